#pragma once

#include "oscillax/series.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace oscillax {

/// A sieve run over [1, last].
struct RunPlan {
    std::uint64_t last = 1;
    std::uint64_t block_size = 25'000'000;
    /// Work unit length; 0 picks one unit per worker (at least one block each).
    std::uint64_t unit_size = 0;
    int workers = 1;
    std::vector<SpecPlan> specs;
    SamplingPlan sampling;
    std::uint64_t extrema_from = 1;
    std::size_t crossing_cap = 10'000;
};

/// Work units tiling [1, plan.last].
std::vector<std::pair<std::uint64_t, std::uint64_t>> plan_units(const RunPlan &plan);

/// Units in order, each started from the exact running sums of its predecessors.
SampleSeries run_range_serial(const SieveContext &context, const RunPlan &plan);

/// OpenMP version. Pass one sieves every unit from zero to get its delta;
/// pass two reruns each unit anchored at its true offset. The merged output
/// equals run_range_serial.
SampleSeries run_range(const SieveContext &context, const RunPlan &plan);

/// key=value checkpoint file. Multi-sum runs store comma-separated lists.
struct Checkpoint {
    int version = 1;
    std::vector<SumSpec> specs;
    std::uint64_t a = 1;
    std::uint64_t b = 1;
    std::uint64_t block_size = 0;
    /// Number of completed blocks; the run is complete through `position`.
    std::uint64_t last_block = 0;
    std::uint64_t position = 0;
    std::vector<ExactAccumulator> totals;
    std::string table_fingerprint;
    std::vector<Extremum> max;
    std::vector<Extremum> min;
    std::vector<std::vector<ThresholdTrace>> traces;

    void save(const std::filesystem::path &path) const;
    static Checkpoint load(const std::filesystem::path &path);
};

struct CheckpointOptions {
    std::filesystem::path checkpoint;
    /// One samples CSV per sum is written here, named <label>.csv.
    std::filesystem::path output_dir;
    bool resume = false;
    /// Stop after this many blocks in this invocation (0 = run to the end).
    std::uint64_t stop_after_blocks = 0;
};

struct CheckpointedOutcome {
    SampleSeries series;
    bool completed = false;
    std::uint64_t blocks_done = 0;
};

/// Sequential block-by-block run that checkpoints after every block and
/// streams samples to CSV. Resuming reproduces an uninterrupted run exactly.
CheckpointedOutcome run_checkpointed(const SieveContext &context, const RunPlan &plan,
                                     const CheckpointOptions &options);

std::filesystem::path samples_path(const std::filesystem::path &dir, const SumSpec &spec);

/// Counts #{n <= x : m | n - Omega(n)} and checks the proportion against 1/m.
struct DivisibilityReport {
    std::int64_t m = 2;
    std::uint64_t limit = 0;
    std::uint64_t onset = 1;
    /// True when the proportion must exceed 1/m; false when it must stay below.
    bool above = true;
    std::uint64_t final_count = 0;
    /// (x, count) at the sample points.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> samples;
    /// x >= onset where count*m <= x (above) or count*m >= x (below).
    ThresholdTrace violations;
    /// Last x in [1, limit] violating the direction, or 0.
    std::uint64_t last_violation = 0;
};

DivisibilityReport divisibility_proportion_run(const SieveContext &context, std::int64_t m, std::uint64_t limit,
                                               std::uint64_t onset, bool above, const SamplingPlan &sampling = {});

} // namespace oscillax
