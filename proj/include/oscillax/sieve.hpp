#pragma once

#include "oscillax/arith.hpp"
#include "oscillax/factor_table.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oscillax {

namespace detail {
struct SmoothPart;
}

/// normalized(x) = (value + log_coefficient * ln x + shift) * x^exponent
struct NormalizationRule {
    double exponent = 0.0;
    double log_coefficient = 0.0;
    double shift = 0.0;

    /// Scaling with no centering: x^(alpha-1/2) for the weighted families
    /// and twisted sums, 1/x for W and for divisibility counts.
    static NormalizationRule scaling_only(const SumSpec &spec);
    double apply(std::uint64_t x, double value) const;
    /// Same, with ln x and x^exponent supplied by the caller.
    double apply(double log_x, double scale, double value) const
    {
        return (value + log_coefficient * log_x + shift) * scale;
    }
};

/// Exact rational num/den with den > 0.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    /// Accepts "3", "-2.3", "1/4", "0.019349".
    static Rational parse(std::string_view text);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    friend bool operator==(const Rational &, const Rational &) = default;
};

/// A bound the running sum must respect from `active_from` on.
///   Lower: violated when value <= bound(x)
///   Upper: violated when value >= bound(x)
/// bound(x) = c, c * x^(1/2 - alpha), or c * x.
struct Threshold {
    enum class Side { Lower, Upper };
    enum class Shape { Constant, RootScaled, Linear };

    std::string id;
    Side side = Side::Lower;
    Shape shape = Shape::Constant;
    Rational coefficient;
    std::uint64_t active_from = 1;

    static Threshold lower(std::string id, Shape shape, Rational c, std::uint64_t from = 1)
    {
        return {std::move(id), Side::Lower, shape, c, from};
    }
    static Threshold upper(std::string id, Shape shape, Rational c, std::uint64_t from = 1)
    {
        return {std::move(id), Side::Upper, shape, c, from};
    }
    /// "lower:root:1", "upper:const:0", "lower:linear:1/3", optionally ":from=325".
    static Threshold parse(std::string_view text);
    std::string describe() const;
};

struct Verdict {
    bool violated = false;
    /// False when a double-double comparison fell inside its rounding margin;
    /// such points are reported as violations.
    bool exact = true;
};

Verdict check_threshold(const Threshold &t, const SumSpec &spec, std::uint64_t x, const ExactAccumulator &value);

struct CrossingPoint {
    std::uint64_t x = 0;
    double value = 0.0;
    bool exact = true;
};

/// Violations of one threshold: every violating x up to `cap`, plus totals.
struct ThresholdTrace {
    std::uint64_t violations = 0;
    std::uint64_t inexact = 0;
    /// Largest violating x seen (0 if none).
    std::uint64_t last = 0;
    std::vector<CrossingPoint> points;
    bool truncated = false;

    std::optional<std::uint64_t> first() const
    {
        if (points.empty()) {
            return std::nullopt;
        }
        return points.front().x;
    }
    void append(const ThresholdTrace &later, std::size_t cap);
};

/// Record value of the normalized series. `ties` counts x attaining it;
/// x is the smallest of them.
struct Extremum {
    std::uint64_t x = 0;
    double value = 0.0;
    std::uint64_t ties = 0;

    bool valid() const { return ties > 0; }
    /// Folds a later candidate in; `is_max` picks the direction.
    void offer(std::uint64_t at, double v, bool is_max);
    void merge(const Extremum &later, bool is_max);
};

struct SamplingPlan {
    /// Every multiple of `stride` (0 disables).
    std::uint64_t stride = 0;
    /// x = ceil(exp(k * log_step)) for k >= 0 (0 disables).
    double log_step = 0.01;
    bool block_ends = true;
    /// Extra x values, e.g. known extremum locations.
    std::vector<std::uint64_t> probes;
};

struct SpecPlan {
    SumSpec spec;
    NormalizationRule rule;
    std::vector<Threshold> thresholds;
};

struct WorkUnit {
    std::uint64_t a = 1;
    std::uint64_t b = 1;
    std::uint64_t block_size = 25'000'000;
    std::vector<SpecPlan> specs;
    SamplingPlan sampling;
    /// Extrema only consider x >= extrema_from.
    std::uint64_t extrema_from = 1;
    /// Running sums just before a; empty means zero. Extrema and crossings are
    /// evaluated against these offsets.
    std::vector<ExactAccumulator> start;
    std::size_t crossing_cap = 10'000;
};

struct Sample {
    std::uint64_t x = 0;
    /// Per spec, the sum over [a, x].
    std::vector<ExactAccumulator> delta;
};

struct SpecOutcome {
    ExactAccumulator delta;
    Extremum max;
    Extremum min;
    std::vector<ThresholdTrace> traces;
};

struct SieveStats {
    std::uint64_t phase1_resolved = 0;
    std::uint64_t phase2_resolved = 0;
    std::uint64_t trial_divisions = 0;
    std::uint64_t residual_resolved = 0;
    /// Set when M^2 < b so the large-prime phase had no primes.
    bool phase1_empty = false;
};

struct BlockResult {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::vector<SumSpec> specs;
    std::vector<NormalizationRule> rules;
    /// Threshold ids per spec, parallel to the traces.
    std::vector<std::vector<std::string>> threshold_ids;
    std::vector<ExactAccumulator> assumed_start;
    std::vector<SpecOutcome> outcomes;
    std::vector<Sample> samples;
    SieveStats stats;
};

/// Which table mode a sum can be evaluated from.
bool mode_supports(TableMode mode, const SumSpec &spec);
/// Narrowest mode covering all specs; throws if none does.
TableMode required_mode(const std::vector<SumSpec> &specs);

struct SieveOptions {
    /// Miller-Rabin check on every residual prime cofactor.
    bool verify_residual = false;
};

/// Shared, read-only inputs for sieving many units against one table.
class SieveContext {
public:
    SieveContext(const FactorTable &table, std::uint64_t max_b, SieveOptions options = {});

    const FactorTable &table() const { return *table_; }
    std::uint64_t max_b() const { return max_b_; }
    const std::vector<std::uint32_t> &primes() const { return primes_; }
    std::uint64_t prime_limit() const { return prime_limit_; }
    const SieveOptions &options() const { return options_; }
    const std::vector<detail::SmoothPart> &smooth() const { return smooth_; }

    SieveContext(const SieveContext &) = delete;
    SieveContext &operator=(const SieveContext &) = delete;
    ~SieveContext();

private:
    const FactorTable *table_;
    std::uint64_t max_b_;
    std::uint64_t prime_limit_;
    std::vector<std::uint32_t> primes_;
    SieveOptions options_;
    std::vector<detail::SmoothPart> smooth_;
};

BlockResult sieve_interval(const WorkUnit &unit, const SieveContext &context);
/// Convenience overload building a throwaway context.
BlockResult sieve_interval(const WorkUnit &unit, const FactorTable &table);

/// The x values at which samples are emitted within [a, b] (block ends excluded).
std::vector<std::uint64_t> sample_points(const SamplingPlan &plan, std::uint64_t a, std::uint64_t b);

} // namespace oscillax
