#include "oscillax/run.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace oscillax {

std::vector<std::pair<std::uint64_t, std::uint64_t>> plan_units(const RunPlan &plan)
{
    if (plan.last < 1 || plan.block_size == 0) {
        throw std::invalid_argument("run needs last >= 1 and a positive block size");
    }
    std::uint64_t size = plan.unit_size;
    if (size == 0) {
        const auto w = static_cast<std::uint64_t>(std::max(plan.workers, 1));
        size = std::max((plan.last + w - 1) / w, std::min(plan.block_size, plan.last));
    }
    std::vector<std::pair<std::uint64_t, std::uint64_t>> units;
    for (std::uint64_t a = 1; a <= plan.last;) {
        const std::uint64_t b = plan.last - a < size ? plan.last : a + size - 1;
        units.emplace_back(a, b);
        if (b == plan.last) {
            break;
        }
        a = b + 1;
    }
    return units;
}

namespace {

WorkUnit make_unit(const RunPlan &plan, std::uint64_t a, std::uint64_t b)
{
    WorkUnit u;
    u.a = a;
    u.b = b;
    u.block_size = plan.block_size;
    u.specs = plan.specs;
    u.sampling = plan.sampling;
    u.extrema_from = plan.extrema_from;
    u.crossing_cap = plan.crossing_cap;
    return u;
}

// deltas only: no samples, extrema or thresholds
WorkUnit delta_unit(const RunPlan &plan, std::uint64_t a, std::uint64_t b)
{
    WorkUnit u = make_unit(plan, a, b);
    for (SpecPlan &s : u.specs) {
        s.thresholds.clear();
    }
    u.sampling = SamplingPlan{0, 0.0, false, {}};
    u.extrema_from = b + 1;
    return u;
}

} // namespace

SampleSeries run_range_serial(const SieveContext &context, const RunPlan &plan)
{
    SeriesBuilder builder(plan.crossing_cap);
    for (const auto &[a, b] : plan_units(plan)) {
        WorkUnit u = make_unit(plan, a, b);
        if (!builder.empty()) {
            u.start = builder.totals();
        }
        builder.append(sieve_interval(u, context));
    }
    return builder.series();
}

SampleSeries run_range(const SieveContext &context, const RunPlan &plan)
{
    const auto units = plan_units(plan);
    const auto count = static_cast<std::int64_t>(units.size());
    if (count == 1 || plan.workers <= 1) {
        return run_range_serial(context, plan);
    }

    std::vector<BlockResult> results(units.size());
    std::vector<std::vector<ExactAccumulator>> deltas(units.size());
    std::vector<std::string> errors(units.size());

    // pass one: unit 0 is already anchored at zero; the others only need deltas
    // (the last unit's delta is never an offset)
#pragma omp parallel for schedule(dynamic, 1) num_threads(plan.workers)
    for (std::int64_t i = 0; i < count - 1; ++i) {
        try {
            BlockResult r = sieve_interval(i == 0 ? make_unit(plan, units[i].first, units[i].second)
                                                  : delta_unit(plan, units[i].first, units[i].second),
                                           context);
            for (const SpecOutcome &o : r.outcomes) {
                deltas[i].push_back(o.delta);
            }
            if (i == 0) {
                results[0] = std::move(r);
            }
        } catch (const std::exception &e) {
            errors[i] = e.what();
        }
    }
    for (const std::string &e : errors) {
        if (!e.empty()) {
            throw std::runtime_error(e);
        }
    }

    std::vector<std::vector<ExactAccumulator>> offsets(units.size());
    std::vector<ExactAccumulator> running;
    for (const ExactAccumulator &d : deltas[0]) {
        running.push_back(ExactAccumulator(d.kind()));
    }
    for (std::size_t i = 0; i < units.size(); ++i) {
        offsets[i] = running;
        for (std::size_t s = 0; s < deltas[i].size(); ++s) {
            running[s] += deltas[i][s];
        }
    }

    // pass two: anchored reruns
#pragma omp parallel for schedule(dynamic, 1) num_threads(plan.workers)
    for (std::int64_t i = 1; i < count; ++i) {
        try {
            WorkUnit u = make_unit(plan, units[i].first, units[i].second);
            u.start = offsets[i];
            results[i] = sieve_interval(u, context);
        } catch (const std::exception &e) {
            errors[i] = e.what();
        }
    }
    for (const std::string &e : errors) {
        if (!e.empty()) {
            throw std::runtime_error(e);
        }
    }
    return merge_results(std::move(results), plan.crossing_cap);
}

} // namespace oscillax
