#pragma once

#include "oscillax/sieve.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace oscillax {

struct SeriesPoint {
    std::uint64_t x = 0;
    ExactAccumulator value;
    double normalized = 0.0;
};

struct SpecSeries {
    SumSpec spec;
    NormalizationRule rule;
    std::vector<std::string> threshold_ids;
    std::vector<SeriesPoint> points;
    ExactAccumulator total;
    Extremum max;
    Extremum min;
    std::vector<ThresholdTrace> traces;
};

/// Global prefix sums over [1, last] assembled from work units.
struct SampleSeries {
    std::uint64_t last = 0;
    std::vector<SpecSeries> specs;
    /// Units whose assumed start differed from the true offset. Their samples
    /// are still exact, but extrema and crossings inside them are not included.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> unanchored;

    bool fully_anchored() const { return unanchored.empty(); }
    const SpecSeries &at(const SumSpec &spec) const;
};

/// Left fold over consecutive results; the order-deterministic core of merging.
class SeriesBuilder {
public:
    explicit SeriesBuilder(std::size_t crossing_cap = 10'000) : cap_(crossing_cap) {}

    /// `r` must start at 1 (first call) or right after the previous result.
    void append(const BlockResult &r, const std::vector<std::vector<std::string>> &threshold_ids = {});
    std::uint64_t covered() const { return series_.last; }
    /// Running sums through covered().
    std::vector<ExactAccumulator> totals() const;
    bool empty() const { return series_.specs.empty(); }

    const SampleSeries &series() const { return series_; }
    SampleSeries &mutable_series() { return series_; }

private:
    std::size_t cap_;
    SampleSeries series_;
};

/// Sorts by a, checks the tiling of [1, X] and SumSpec agreement, then folds.
SampleSeries merge_results(std::vector<BlockResult> results, std::size_t crossing_cap = 10'000);

/// Violating points of a threshold recorded during the run.
std::vector<CrossingPoint> find_crossings(const SampleSeries &series, const SumSpec &spec,
                                          const std::string &threshold_id);
/// Sieves [1, x_end] for a single sum and threshold and returns its violations.
std::vector<CrossingPoint> find_crossings(const FactorTable &table, const SumSpec &spec, const Threshold &threshold,
                                          std::uint64_t x_end, std::size_t cap = 10'000);

/// Samples CSV: header x,u,value_pos,value_neg,normalized.
std::string csv_header();
std::string csv_row(const SeriesPoint &point);
void write_series_csv(const SpecSeries &series, const std::filesystem::path &path);
std::vector<SeriesPoint> read_series_csv(const std::filesystem::path &path, ExactAccumulator::Kind kind);

} // namespace oscillax
