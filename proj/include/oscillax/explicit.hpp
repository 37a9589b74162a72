#pragma once

#include "oscillax/oscillation.hpp"
#include "oscillax/series.hpp"

#include <string>
#include <vector>

namespace oscillax {

struct ExplicitConfig {
    BoundFamily family = BoundFamily::S;
    double alpha = 0.0;
    double T = 3000.0;
    double u_lo = 0.0;
    double u_hi = 0.0;
    double du = 1e-4;
    double tolerance = 1e-6; // crossing refinement in u
    int workers = 1;
};

struct EstimatePoint {
    double u = 0.0;
    double value = 0.0;
};

struct EstimateCrossing {
    double threshold = 0.0;
    double u_lo = 0.0; // bracket, width <= tolerance
    double u_hi = 0.0;
    double u_star = 0.0;
    bool upward = false; // estimate - threshold goes from negative to positive
};

struct EstimateSeries {
    ExplicitConfig config;
    std::vector<EstimatePoint> points;
    std::vector<EstimateCrossing> crossings;
    std::size_t zeros_used = 0;
    /// 2|Res| of the highest zero used; a rough proxy for the truncation error.
    double last_term = 0.0;
};

/// Truncated sum center(u) + 2 Re sum_{0 < gamma <= T} Res(i gamma) e^{i gamma u}.
/// S family: the normalized Sun sum (for alpha = 1/2 the center is the line in
/// u; for 1/2 < alpha < 1 the shifted sum, see sieve_rule). H family: the
/// Liouville-type sum centered at 0 or h(alpha).
class ExplicitEstimator {
public:
    /// Throws std::invalid_argument when T exceeds the largest loaded ordinate.
    ExplicitEstimator(const ZeroSet &zeros, BoundFamily family, double alpha, double T, int workers = 1);
    /// Reuses a table; only zeros with gamma <= T contribute.
    ExplicitEstimator(const ResidueTable &table, double alpha, double T);

    double value(double u) const;
    /// Both +gamma and -gamma terms summed as complex numbers.
    DDComplex value_unfolded(double u) const;
    /// The alpha = 0 formula written out term by term (S family only).
    DDComplex literal_alpha0(double u) const;

    std::size_t zeros_used() const { return gammas_.size(); }
    double last_term() const;
    double center(double u) const;

private:
    void init(const ResidueTable &table);

    BoundFamily family_;
    double alpha_;
    double T_;
    CenterLine center_;
    std::vector<DDouble> gammas_;
    std::vector<DDComplex> residues_;
    std::vector<ZeroAnalytics> analytics_;
};

/// gamma * u reduced into [-pi, pi] in double-double before rounding.
double reduced_phase(DDouble gamma, double u);

/// Values on the grid u_lo, u_lo + du, ..., u_hi; OpenMP over u when workers > 1.
EstimateSeries estimate(const ExplicitConfig &config, const ExplicitEstimator &estimator);
EstimateSeries estimate_serial(const ExplicitConfig &config, const ExplicitEstimator &estimator);
EstimateSeries estimate(const ExplicitConfig &config, const ZeroSet &zeros);

/// Bisects every sign change of estimate - threshold on the grid. Adds the
/// crossings to the series and returns them.
std::vector<EstimateCrossing> find_estimate_crossings(EstimateSeries &series, const ExplicitEstimator &estimator,
                                                      const std::vector<double> &thresholds);

struct ComparisonPoint {
    double u = 0.0;
    double value = 0.0;
};

struct ResidualStats {
    std::size_t points = 0;
    double mean_abs = 0.0;
    double max_abs = 0.0;
    double worst_u = 0.0;
};

/// Evaluates the estimate at every sieved u inside [u_lo, u_hi].
ResidualStats compare_to_sieve(const ExplicitEstimator &estimator, const std::vector<ComparisonPoint> &sieved,
                               double u_lo, double u_hi);
/// Compares on the u values both series share (to 1e-12).
ResidualStats compare_to_sieve(const EstimateSeries &series, const std::vector<ComparisonPoint> &sieved);

/// (ln x, normalized) pairs of a sieved series.
std::vector<ComparisonPoint> comparison_points(const SpecSeries &series);
/// Normalization matching the estimate for the S family.
NormalizationRule sieve_rule(double alpha);

void write_estimate_csv(const EstimateSeries &series, const std::string &path);
void write_crossings_csv(const EstimateSeries &series, const std::string &path);

} // namespace oscillax
