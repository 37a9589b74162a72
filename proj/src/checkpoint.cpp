#include "oscillax/run.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace oscillax {

namespace {

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep)) {
        out.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

std::string join(const std::vector<std::string> &parts, char sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string encode_extremum(const Extremum &e)
{
    return std::to_string(e.x) + ";" + fmt_double(e.value) + ";" + std::to_string(e.ties);
}

Extremum decode_extremum(const std::string &s)
{
    const auto f = split(s, ';');
    if (f.size() != 3) {
        throw std::runtime_error("checkpoint: bad extremum '" + s + "'");
    }
    return {std::stoull(f[0]), std::strtod(f[1].c_str(), nullptr), std::stoull(f[2])};
}

std::string encode_trace(const ThresholdTrace &t)
{
    std::vector<std::string> pts;
    for (const CrossingPoint &p : t.points) {
        pts.push_back(std::to_string(p.x) + "@" + fmt_double(p.value) + "@" + (p.exact ? "1" : "0"));
    }
    return std::to_string(t.violations) + ";" + std::to_string(t.inexact) + ";" + std::to_string(t.last) + ";" +
           (t.truncated ? "1" : "0") + ";" + join(pts, '|');
}

ThresholdTrace decode_trace(const std::string &s)
{
    const auto f = split(s, ';');
    if (f.size() != 5) {
        throw std::runtime_error("checkpoint: bad trace '" + s + "'");
    }
    ThresholdTrace t;
    t.violations = std::stoull(f[0]);
    t.inexact = std::stoull(f[1]);
    t.last = std::stoull(f[2]);
    t.truncated = f[3] == "1";
    if (!f[4].empty()) {
        for (const std::string &p : split(f[4], '|')) {
            const auto g = split(p, '@');
            if (g.size() != 3) {
                throw std::runtime_error("checkpoint: bad crossing '" + p + "'");
            }
            t.points.push_back({std::stoull(g[0]), std::strtod(g[1].c_str(), nullptr), g[2] == "1"});
        }
    }
    return t;
}

} // namespace

void Checkpoint::save(const std::filesystem::path &path) const
{
    std::vector<std::string> fam, alpha, param, pos, neg, mx, mn;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        fam.push_back(family_name(specs[i].family));
        alpha.push_back(fmt_double(specs[i].alpha));
        param.push_back(std::to_string(specs[i].param));
        pos.push_back(totals[i].positive_string());
        neg.push_back(totals[i].negative_string());
        mx.push_back(encode_extremum(max[i]));
        mn.push_back(encode_extremum(min[i]));
    }
    std::ostringstream out;
    out << "version=" << version << '\n';
    out << "family=" << join(fam, ',') << '\n';
    out << "alpha=" << join(alpha, ',') << '\n';
    out << "param=" << join(param, ',') << '\n';
    out << "a=" << a << '\n';
    out << "b=" << b << '\n';
    out << "block_size=" << block_size << '\n';
    out << "last_block=" << last_block << '\n';
    out << "position=" << position << '\n';
    out << "pos=" << join(pos, ',') << '\n';
    out << "neg=" << join(neg, ',') << '\n';
    out << "table_fingerprint=" << table_fingerprint << '\n';
    out << "max=" << join(mx, ',') << '\n';
    out << "min=" << join(mn, ',') << '\n';
    for (std::size_t i = 0; i < traces.size(); ++i) {
        for (std::size_t t = 0; t < traces[i].size(); ++t) {
            out << "trace." << i << "." << t << "=" << encode_trace(traces[i][t]) << '\n';
        }
    }

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        f << out.str();
        f.flush();
        if (!f) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint Checkpoint::load(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open checkpoint " + path.string());
    }
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("checkpoint: malformed line '" + line + "'");
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const std::string &k) -> const std::string & {
        const auto it = kv.find(k);
        if (it == kv.end()) {
            throw std::runtime_error("checkpoint: missing key " + k);
        }
        return it->second;
    };

    Checkpoint c;
    c.version = std::stoi(need("version"));
    if (c.version != 1) {
        throw std::runtime_error("checkpoint: unsupported version");
    }
    const auto fam = split(need("family"), ',');
    const auto alpha = split(need("alpha"), ',');
    const auto param = split(need("param"), ',');
    const auto pos = split(need("pos"), ',');
    const auto neg = split(need("neg"), ',');
    const auto mx = split(need("max"), ',');
    const auto mn = split(need("min"), ',');
    const std::size_t n = fam.size();
    if (alpha.size() != n || param.size() != n || pos.size() != n || neg.size() != n || mx.size() != n ||
        mn.size() != n) {
        throw std::runtime_error("checkpoint: list lengths disagree");
    }
    for (std::size_t i = 0; i < n; ++i) {
        SumSpec s{parse_family(fam[i]), std::strtod(alpha[i].c_str(), nullptr), std::stoll(param[i])};
        s.validate();
        c.specs.push_back(s);
        c.totals.push_back(ExactAccumulator::from_strings(accumulator_kind(s), pos[i], neg[i]));
        c.max.push_back(decode_extremum(mx[i]));
        c.min.push_back(decode_extremum(mn[i]));
    }
    c.a = std::stoull(need("a"));
    c.b = std::stoull(need("b"));
    c.block_size = std::stoull(need("block_size"));
    c.last_block = std::stoull(need("last_block"));
    c.position = std::stoull(need("position"));
    c.table_fingerprint = need("table_fingerprint");
    c.traces.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0;; ++t) {
            const auto it = kv.find("trace." + std::to_string(i) + "." + std::to_string(t));
            if (it == kv.end()) {
                break;
            }
            c.traces[i].push_back(decode_trace(it->second));
        }
    }
    return c;
}

std::filesystem::path samples_path(const std::filesystem::path &dir, const SumSpec &spec)
{
    return dir / (spec.label() + ".csv");
}

namespace {

// keeps the header and rows with x <= position
void truncate_csv(const std::filesystem::path &path, std::uint64_t position)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("resume: missing samples file " + path.string());
    }
    std::string kept;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            kept += line + '\n';
            header = false;
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const std::uint64_t x = std::stoull(line.substr(0, line.find(',')));
        if (x > position) {
            break;
        }
        kept += line + '\n';
    }
    in.close();
    std::ofstream out(path, std::ios::trunc);
    out << kept;
}

} // namespace

CheckpointedOutcome run_checkpointed(const SieveContext &context, const RunPlan &plan,
                                     const CheckpointOptions &options)
{
    if (plan.last < 1 || plan.block_size == 0 || plan.specs.empty()) {
        throw std::invalid_argument("checkpointed run needs last >= 1, a block size and at least one sum");
    }
    std::filesystem::create_directories(options.output_dir);
    const std::string fingerprint = context.table().fingerprint();

    SeriesBuilder builder(plan.crossing_cap);
    std::uint64_t done_blocks = 0;
    std::uint64_t position = 0;

    if (options.resume && std::filesystem::exists(options.checkpoint)) {
        const Checkpoint c = Checkpoint::load(options.checkpoint);
        if (c.table_fingerprint != fingerprint) {
            throw std::runtime_error("resume: checkpoint was written against a different table");
        }
        if (c.a != 1 || c.b != plan.last || c.block_size != plan.block_size || c.specs.size() != plan.specs.size()) {
            throw std::runtime_error("resume: checkpoint does not match the requested run");
        }
        SampleSeries &s = builder.mutable_series();
        s.last = c.position;
        for (std::size_t i = 0; i < c.specs.size(); ++i) {
            if (!(c.specs[i] == plan.specs[i].spec) || c.traces[i].size() != plan.specs[i].thresholds.size()) {
                throw std::runtime_error("resume: checkpoint does not match the requested run");
            }
            SpecSeries ss;
            ss.spec = c.specs[i];
            ss.rule = plan.specs[i].rule;
            for (const Threshold &t : plan.specs[i].thresholds) {
                ss.threshold_ids.push_back(t.id);
            }
            ss.total = c.totals[i];
            ss.max = c.max[i];
            ss.min = c.min[i];
            ss.traces = c.traces[i];
            const auto path = samples_path(options.output_dir, ss.spec);
            truncate_csv(path, c.position);
            ss.points = read_series_csv(path, accumulator_kind(ss.spec));
            s.specs.push_back(std::move(ss));
        }
        done_blocks = c.last_block;
        position = c.position;
    } else {
        for (const SpecPlan &sp : plan.specs) {
            std::ofstream out(samples_path(options.output_dir, sp.spec), std::ios::trunc);
            out << csv_header() << '\n';
        }
    }

    CheckpointedOutcome outcome;
    std::uint64_t this_call = 0;
    while (position < plan.last) {
        if (options.stop_after_blocks && this_call == options.stop_after_blocks) {
            outcome.series = builder.series();
            outcome.blocks_done = done_blocks;
            return outcome;
        }
        const std::uint64_t a = position + 1;
        const std::uint64_t b = plan.last - a < plan.block_size ? plan.last : a + plan.block_size - 1;
        WorkUnit u;
        u.a = a;
        u.b = b;
        u.block_size = plan.block_size;
        u.specs = plan.specs;
        u.sampling = plan.sampling;
        u.extrema_from = plan.extrema_from;
        u.crossing_cap = plan.crossing_cap;
        if (!builder.empty()) {
            u.start = builder.totals();
        }
        const BlockResult r = sieve_interval(u, context);
        const std::size_t before = builder.empty() ? 0 : builder.series().specs.front().points.size();
        builder.append(r);

        for (const SpecSeries &ss : builder.series().specs) {
            std::ofstream out(samples_path(options.output_dir, ss.spec), std::ios::app);
            for (std::size_t k = before; k < ss.points.size(); ++k) {
                out << csv_row(ss.points[k]) << '\n';
            }
        }
        position = b;
        ++done_blocks;
        ++this_call;

        Checkpoint c;
        c.b = plan.last;
        c.block_size = plan.block_size;
        c.last_block = done_blocks;
        c.position = position;
        c.table_fingerprint = fingerprint;
        for (const SpecSeries &ss : builder.series().specs) {
            c.specs.push_back(ss.spec);
            c.totals.push_back(ss.total);
            c.max.push_back(ss.max);
            c.min.push_back(ss.min);
            c.traces.push_back(ss.traces);
        }
        c.save(options.checkpoint);
    }
    outcome.series = builder.series();
    outcome.completed = true;
    outcome.blocks_done = done_blocks;
    return outcome;
}

DivisibilityReport divisibility_proportion_run(const SieveContext &context, std::int64_t m, std::uint64_t limit,
                                               std::uint64_t onset, bool above, const SamplingPlan &sampling)
{
    if (m < 2) {
        throw std::invalid_argument("modulus must be at least 2");
    }
    const SumSpec spec = SumSpec::div_count(m);
    const Rational inv{1, m};
    // violating the direction: count*m <= x (above) or count*m >= x (below)
    const auto side = above ? Threshold::Side::Lower : Threshold::Side::Upper;
    const Threshold from_onset{"onset", side, Threshold::Shape::Linear, inv, onset};
    const Threshold everywhere{"all", side, Threshold::Shape::Linear, inv, 1};

    RunPlan plan;
    plan.last = limit;
    plan.block_size = std::min<std::uint64_t>(limit, 25'000'000);
    plan.specs.push_back({spec, NormalizationRule::scaling_only(spec), {from_onset, everywhere}});
    plan.sampling = sampling;
    plan.extrema_from = limit + 1;
    plan.crossing_cap = 1000;
    const SampleSeries series = run_range_serial(context, plan);
    const SpecSeries &s = series.specs.front();

    DivisibilityReport report;
    report.m = m;
    report.limit = limit;
    report.onset = onset;
    report.above = above;
    report.final_count = static_cast<std::uint64_t>(s.total.integer_value());
    for (const SeriesPoint &p : s.points) {
        report.samples.emplace_back(p.x, static_cast<std::uint64_t>(p.value.integer_value()));
    }
    report.violations = s.traces[0];
    report.last_violation = s.traces[1].last;
    return report;
}

} // namespace oscillax
