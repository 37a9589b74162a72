#include "oscillax/conjectures.hpp"

#include "oscillax/factor_table.hpp"
#include "oscillax/run.hpp"

#include <algorithm>
#include <cmath>

namespace oscillax {

namespace {

using Shape = Threshold::Shape;

struct Plan {
    std::string id;
    std::string statement;
    SumSpec spec;
    std::optional<std::uint64_t> from;
    std::vector<Threshold> main;
    std::optional<Threshold> all; // same direction from x = 1
};

Rational rat(std::int64_t n, std::int64_t d = 1) { return {n, d}; }

std::vector<Plan> catalogue()
{
    std::vector<Plan> c;
    c.push_back({"sun_s0_positive", "S_0(x) > 0", SumSpec::sun_s(0.0), 5,
                 {Threshold::lower("pos", Shape::Constant, rat(0), 5)}, std::nullopt});
    c.push_back({"sun_s0_band", "1 < S_0(x)/sqrt(x) < 2.3", SumSpec::sun_s(0.0), 325,
                 {Threshold::lower("band_lo", Shape::RootScaled, rat(1), 325),
                  Threshold::upper("band_hi", Shape::RootScaled, rat(23, 10), 325)},
                 std::nullopt});
    c.push_back({"sun_s1_band", "-2.3 < S_1(x)*sqrt(x) < -1", SumSpec::sun_s(1.0), 3,
                 {Threshold::lower("band_lo", Shape::RootScaled, rat(-23, 10), 3),
                  Threshold::upper("band_hi", Shape::RootScaled, rat(-1), 3)},
                 std::nullopt});
    c.push_back({"w_below_x", "|W(x)| < x", SumSpec::grosswald_w(), 3078,
                 {Threshold::lower("lo", Shape::Linear, rat(-1), 3078),
                  Threshold::upper("hi", Shape::Linear, rat(1), 3078)},
                 std::nullopt});
    for (int m = 3; m <= 20; ++m) {
        if (m == 19) {
            continue;
        }
        const bool above = m != 4;
        const auto onset = divisibility_onset(m);
        const std::string rel = above ? " > " : " < ";
        const auto make = [&](const std::string &id, std::uint64_t from) {
            return above ? Threshold::lower(id, Shape::Linear, rat(1, m), from)
                         : Threshold::upper(id, Shape::Linear, rat(1, m), from);
        };
        Plan p{"div_m" + std::to_string(m),
               "#{n <= x : " + std::to_string(m) + " | n - Omega(n)}" + rel + "x/" + std::to_string(m),
               SumSpec::div_count(m),
               onset,
               {},
               make("all", 1)};
        if (onset) {
            p.main.push_back(make("onset", *onset));
        }
        c.push_back(std::move(p));
    }
    for (const std::int64_t d : {-4, -7, -3, 5}) {
        const bool negative = d == -4 || d == -7;
        const auto make = [&](const std::string &id, std::uint64_t from) {
            return negative ? Threshold::upper(id, Shape::Constant, rat(0), from)
                            : Threshold::lower(id, Shape::Constant, rat(0), from);
        };
        c.push_back({"twisted_" + std::to_string(d),
                     "S_" + std::to_string(d) + "(x)" + (negative ? " < 0" : " > 0"), SumSpec::twisted_s(d), 11,
                     {make("from11", 11)}, make("all", 1)});
    }
    return c;
}

const ThresholdTrace &trace_of(const SpecSeries &s, const std::string &id)
{
    for (std::size_t i = 0; i < s.threshold_ids.size(); ++i) {
        if (s.threshold_ids[i] == id) {
            return s.traces.at(i);
        }
    }
    throw std::logic_error("missing threshold " + id);
}

} // namespace

std::string status_name(ConjectureStatus s)
{
    switch (s) {
    case ConjectureStatus::Pass:
        return "pass";
    case ConjectureStatus::Fail:
        return "fail";
    default:
        return "undetermined";
    }
}

bool ConjectureReport::any_failure() const
{
    return std::any_of(results.begin(), results.end(),
                       [](const ConjectureResult &r) { return r.status == ConjectureStatus::Fail; });
}

std::optional<std::uint64_t> divisibility_onset(int m)
{
    switch (m) {
    case 3:
        return 62;
    case 4:
        return 1793193;
    case 5:
        return 187;
    case 20:
        return 61;
    default:
        return std::nullopt;
    }
}

ConjectureReport verify_conjectures(std::uint64_t limit, const ConjectureOptions &options)
{
    ConjectureReport report;
    report.limit = limit;
    if (limit == 0) {
        return report;
    }
    const std::vector<Plan> plans = catalogue();

    // one SumSpec entry per plan; thresholds keep their own ids
    RunPlan run;
    run.last = limit;
    run.block_size = options.block_size;
    run.workers = std::max(1, options.workers);
    run.sampling.log_step = 0.0;
    run.sampling.block_ends = false;
    std::vector<SumSpec> specs;
    for (const Plan &p : plans) {
        SpecPlan sp{p.spec, NormalizationRule::scaling_only(p.spec), p.main};
        if (p.all) {
            sp.thresholds.push_back(*p.all);
        }
        const auto same = std::find_if(run.specs.begin(), run.specs.end(),
                                       [&](const SpecPlan &q) { return q.spec == p.spec; });
        if (same != run.specs.end()) {
            for (Threshold t : sp.thresholds) {
                t.id = p.id + "." + t.id;
                same->thresholds.push_back(t);
            }
        } else {
            for (Threshold &t : sp.thresholds) {
                t.id = p.id + "." + t.id;
            }
            run.specs.push_back(sp);
            specs.push_back(p.spec);
        }
    }
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 2;
    const FactorTable table = build_base_table(std::max<std::uint64_t>(root, 30), required_mode(specs));
    const SieveContext context(table, limit);
    const SampleSeries series = run.workers > 1 ? run_range(context, run) : run_range_serial(context, run);

    for (const Plan &p : plans) {
        const SpecSeries &s = series.at(p.spec);
        ConjectureResult r;
        r.id = p.id;
        r.statement = p.statement;
        r.from = p.from;
        for (const Threshold &t : p.main) {
            const ThresholdTrace &tr = trace_of(s, p.id + "." + t.id);
            r.violations += tr.violations;
            if (const auto f = tr.first(); f && (!r.first_violation || *f < *r.first_violation)) {
                r.first_violation = f;
            }
        }
        if (p.all) {
            const ThresholdTrace &all = trace_of(s, p.id + ".all");
            for (const CrossingPoint &c : all.points) {
                if ((p.from && c.x >= *p.from) || r.early_violations.size() >= 32) {
                    break;
                }
                r.early_violations.push_back(c.x);
            }
            if (p.spec.family == Family::DivCount) {
                r.empirical_onset = all.last + 1;
            }
        }
        if (r.violations > 0) {
            r.status = ConjectureStatus::Fail;
        } else if (!p.from && r.empirical_onset && *r.empirical_onset > limit) {
            r.status = ConjectureStatus::Undetermined;
        }
        report.results.push_back(std::move(r));
    }
    return report;
}

} // namespace oscillax
