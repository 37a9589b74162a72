#include "oscillax/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oscillax {

const SpecSeries &SampleSeries::at(const SumSpec &spec) const
{
    for (const SpecSeries &s : specs) {
        if (s.spec == spec) {
            return s;
        }
    }
    throw std::out_of_range("series has no sum " + spec.label());
}

void SeriesBuilder::append(const BlockResult &r, const std::vector<std::vector<std::string>> &threshold_ids)
{
    if (r.a != series_.last + 1) {
        throw std::invalid_argument(series_.last + 1 < r.a ? "gap before [" + std::to_string(r.a) + ", ...]"
                                                           : "overlap at [" + std::to_string(r.a) + ", ...]");
    }
    if (series_.specs.empty()) {
        for (std::size_t i = 0; i < r.specs.size(); ++i) {
            SpecSeries s;
            s.spec = r.specs[i];
            s.rule = r.rules[i];
            s.total = ExactAccumulator(accumulator_kind(s.spec));
            if (i < r.threshold_ids.size()) {
                s.threshold_ids = r.threshold_ids[i];
            } else if (i < threshold_ids.size()) {
                s.threshold_ids = threshold_ids[i];
            }
            s.traces.resize(r.outcomes[i].traces.size());
            series_.specs.push_back(std::move(s));
        }
    } else {
        if (r.specs.size() != series_.specs.size()) {
            throw std::invalid_argument("results disagree on the set of sums");
        }
        for (std::size_t i = 0; i < r.specs.size(); ++i) {
            if (!(r.specs[i] == series_.specs[i].spec) || r.outcomes[i].traces.size() != series_.specs[i].traces.size()) {
                throw std::invalid_argument("results disagree on the set of sums");
            }
        }
    }

    bool anchored = true;
    for (std::size_t i = 0; i < r.specs.size(); ++i) {
        if (!(r.assumed_start[i] == series_.specs[i].total)) {
            anchored = false;
        }
    }
    for (std::size_t i = 0; i < r.specs.size(); ++i) {
        SpecSeries &s = series_.specs[i];
        for (const Sample &smp : r.samples) {
            SeriesPoint pt;
            pt.x = smp.x;
            pt.value = s.total + smp.delta[i];
            pt.normalized = s.rule.apply(smp.x, pt.value.to_double());
            s.points.push_back(std::move(pt));
        }
        if (anchored) {
            s.max.merge(r.outcomes[i].max, true);
            s.min.merge(r.outcomes[i].min, false);
            for (std::size_t t = 0; t < s.traces.size(); ++t) {
                s.traces[t].append(r.outcomes[i].traces[t], cap_);
            }
        }
        s.total += r.outcomes[i].delta;
    }
    if (!anchored) {
        series_.unanchored.emplace_back(r.a, r.b);
    }
    series_.last = r.b;
}

std::vector<ExactAccumulator> SeriesBuilder::totals() const
{
    std::vector<ExactAccumulator> out;
    for (const SpecSeries &s : series_.specs) {
        out.push_back(s.total);
    }
    return out;
}

SampleSeries merge_results(std::vector<BlockResult> results, std::size_t crossing_cap)
{
    if (results.empty()) {
        throw std::invalid_argument("nothing to merge");
    }
    std::sort(results.begin(), results.end(), [](const BlockResult &x, const BlockResult &y) { return x.a < y.a; });
    if (results.front().a != 1) {
        throw std::invalid_argument("results must start at 1");
    }
    SeriesBuilder builder(crossing_cap);
    for (const BlockResult &r : results) {
        builder.append(r);
    }
    return builder.series();
}

std::vector<CrossingPoint> find_crossings(const SampleSeries &series, const SumSpec &spec,
                                          const std::string &threshold_id)
{
    if (!series.fully_anchored()) {
        throw std::logic_error("crossings are only resolved for anchored runs");
    }
    const SpecSeries &s = series.at(spec);
    for (std::size_t t = 0; t < s.threshold_ids.size(); ++t) {
        if (s.threshold_ids[t] == threshold_id) {
            return s.traces[t].points;
        }
    }
    throw std::out_of_range("no threshold '" + threshold_id + "' for " + spec.label());
}

std::vector<CrossingPoint> find_crossings(const FactorTable &table, const SumSpec &spec, const Threshold &threshold,
                                          std::uint64_t x_end, std::size_t cap)
{
    WorkUnit unit;
    unit.a = 1;
    unit.b = x_end;
    unit.specs.push_back({spec, NormalizationRule::scaling_only(spec), {threshold}});
    unit.sampling.log_step = 0.0;
    unit.sampling.block_ends = false;
    unit.extrema_from = x_end + 1;
    unit.crossing_cap = cap;
    unit.block_size = std::min<std::uint64_t>(x_end, 25'000'000);
    const BlockResult r = sieve_interval(unit, table);
    return r.outcomes.front().traces.front().points;
}

std::string csv_header() { return "x,u,value_pos,value_neg,normalized"; }

std::string csv_row(const SeriesPoint &p)
{
    char u[64];
    char norm[64];
    std::snprintf(u, sizeof u, "%.10f", std::log(static_cast<double>(p.x)));
    std::snprintf(norm, sizeof norm, "%.17g", p.normalized);
    return std::to_string(p.x) + "," + u + "," + p.value.positive_string() + "," + p.value.negative_string() + "," +
           norm;
}

void write_series_csv(const SpecSeries &series, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << csv_header() << '\n';
    for (const SeriesPoint &p : series.points) {
        out << csv_row(p) << '\n';
    }
}

std::vector<SeriesPoint> read_series_csv(const std::filesystem::path &path, ExactAccumulator::Kind kind)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != csv_header()) {
        throw std::runtime_error(path.string() + ": unexpected header");
    }
    std::vector<SeriesPoint> out;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 5) {
            throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
        }
        SeriesPoint p;
        p.x = std::stoull(f[0]);
        p.value = ExactAccumulator::from_strings(kind, f[2], f[3]);
        p.normalized = std::strtod(f[4].c_str(), nullptr);
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace oscillax
