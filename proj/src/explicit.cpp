#include "oscillax/explicit.hpp"

#include "oscillax/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace oscillax {

namespace {

std::vector<double> grid(const ExplicitConfig &c)
{
    if (!(c.du > 0.0)) {
        throw std::invalid_argument("du must be positive");
    }
    if (!(c.u_hi >= c.u_lo)) {
        throw std::invalid_argument("empty u range");
    }
    const auto steps = static_cast<std::size_t>(std::floor((c.u_hi - c.u_lo) / c.du + 1e-9));
    std::vector<double> us;
    us.reserve(steps + 2);
    for (std::size_t k = 0; k <= steps; ++k) {
        us.push_back(c.u_lo + static_cast<double>(k) * c.du);
    }
    if (c.u_hi - us.back() > 1e-12 * std::max(1.0, std::abs(c.u_hi))) {
        us.push_back(c.u_hi);
    }
    return us;
}

EstimateSeries start_series(const ExplicitConfig &config, const ExplicitEstimator &est)
{
    EstimateSeries s;
    s.config = config;
    s.zeros_used = est.zeros_used();
    s.last_term = est.last_term();
    return s;
}

} // namespace

double reduced_phase(DDouble gamma, double u) { return dd::reduce_two_pi(gamma * u).to_double(); }

ExplicitEstimator::ExplicitEstimator(const ZeroSet &zeros, BoundFamily family, double alpha, double T, int workers)
    : family_(family), alpha_(alpha), T_(T)
{
    if (zeros.empty() || T > zeros.gammas.back().to_double()) {
        throw std::invalid_argument("T exceeds the largest loaded ordinate");
    }
    init(ResidueTable::build(zeros, T, family, workers));
}

ExplicitEstimator::ExplicitEstimator(const ResidueTable &table, double alpha, double T)
    : family_(table.family()), alpha_(alpha), T_(T)
{
    init(table);
}

void ExplicitEstimator::init(const ResidueTable &table)
{
    center_.slope = table.center_slope(alpha_);
    center_.intercept = table.center_intercept(alpha_);
    for (std::size_t i = 1; i <= table.size(); ++i) {
        const ZeroAnalytics &z = table.at(i);
        if (z.gamma.to_double() > T_) {
            break;
        }
        gammas_.push_back(z.gamma);
        residues_.push_back(table.residue(alpha_, i).residue);
        if (family_ == BoundFamily::S && alpha_ == 0.0) {
            analytics_.push_back(z);
        }
    }
}

double ExplicitEstimator::center(double u) const
{
    return (center_.slope * DDouble(u) + center_.intercept).to_double();
}

double ExplicitEstimator::value(double u) const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < gammas_.size(); ++i) {
        const double ph = reduced_phase(gammas_[i], u);
        sum += residues_[i].re.to_double() * std::cos(ph) - residues_[i].im.to_double() * std::sin(ph);
    }
    return center(u) + 2.0 * sum;
}

DDComplex ExplicitEstimator::value_unfolded(double u) const
{
    DDComplex sum(center(u));
    for (std::size_t i = 0; i < gammas_.size(); ++i) {
        DDouble sn, cs;
        dd::sincos(DDouble(reduced_phase(gammas_[i], u)), sn, cs);
        const DDComplex up{cs, sn};
        sum += residues_[i] * up;
        sum += dd::conj(residues_[i]) * dd::conj(up);
    }
    return sum;
}

DDComplex ExplicitEstimator::literal_alpha0(double u) const
{
    if (family_ != BoundFamily::S || alpha_ != 0.0) {
        throw std::logic_error("the literal form exists for the S family at alpha = 0 only");
    }
    const DDouble root2 = dd::sqrt2;
    DDComplex total(-(DDouble(1.0) + root2) / zeta_real(DDouble(0.5)));
    for (const ZeroAnalytics &z : analytics_) {
        for (int sign : {1, -1}) {
            const DDouble g = sign > 0 ? z.gamma : -z.gamma;
            const DDComplex rho{DDouble(0.5), g};
            const DDComplex zeta2 = sign > 0 ? z.zeta_2rho : dd::conj(z.zeta_2rho);
            const DDComplex zp = sign > 0 ? z.zeta_prime_rho : dd::conj(z.zeta_prime_rho);
            const DDComplex two = dd::pow_from_log(dd::ln2, DDComplex(DDouble(0.5), -g));
            DDouble sn, cs;
            dd::sincos(DDouble(reduced_phase(g, u)), sn, cs);
            total -= (DDComplex(1.0) + two) * zeta2 * DDComplex(cs, sn) / (rho * zp);
        }
    }
    return total;
}

double ExplicitEstimator::last_term() const
{
    return residues_.empty() ? 0.0 : 2.0 * dd::abs(residues_.back()).to_double();
}

EstimateSeries estimate_serial(const ExplicitConfig &config, const ExplicitEstimator &estimator)
{
    EstimateSeries s = start_series(config, estimator);
    for (const double u : grid(config)) {
        s.points.push_back({u, estimator.value(u)});
    }
    return s;
}

EstimateSeries estimate(const ExplicitConfig &config, const ExplicitEstimator &estimator)
{
    if (config.workers <= 1) {
        return estimate_serial(config, estimator);
    }
    EstimateSeries s = start_series(config, estimator);
    const std::vector<double> us = grid(config);
    s.points.resize(us.size());
#pragma omp parallel for schedule(static) num_threads(config.workers)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(us.size()); ++k) {
        s.points[k] = {us[k], estimator.value(us[k])};
    }
    return s;
}

EstimateSeries estimate(const ExplicitConfig &config, const ZeroSet &zeros)
{
    const ExplicitEstimator est(zeros, config.family, config.alpha, config.T, config.workers);
    return estimate(config, est);
}

std::vector<EstimateCrossing> find_estimate_crossings(EstimateSeries &series, const ExplicitEstimator &estimator,
                                                      const std::vector<double> &thresholds)
{
    std::vector<EstimateCrossing> found;
    const double tol = series.config.tolerance > 0.0 ? series.config.tolerance : 1e-6;
    for (const double t : thresholds) {
        for (std::size_t k = 1; k < series.points.size(); ++k) {
            const EstimatePoint &a = series.points[k - 1];
            const EstimatePoint &b = series.points[k];
            const bool below_a = a.value < t;
            if (below_a == (b.value < t)) {
                continue;
            }
            double lo = a.u;
            double hi = b.u;
            // narrow well past the tolerance so the value at u* is close to t
            while (hi - lo > tol / 64.0) {
                const double mid = 0.5 * (lo + hi);
                if ((estimator.value(mid) < t) == below_a) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            found.push_back({t, lo, hi, 0.5 * (lo + hi), below_a});
        }
    }
    series.crossings.insert(series.crossings.end(), found.begin(), found.end());
    return found;
}

ResidualStats compare_to_sieve(const ExplicitEstimator &estimator, const std::vector<ComparisonPoint> &sieved,
                               double u_lo, double u_hi)
{
    ResidualStats r;
    double total = 0.0;
    for (const ComparisonPoint &p : sieved) {
        if (p.u < u_lo || p.u > u_hi) {
            continue;
        }
        const double d = std::abs(estimator.value(p.u) - p.value);
        total += d;
        if (d > r.max_abs || r.points == 0) {
            r.max_abs = d;
            r.worst_u = p.u;
        }
        ++r.points;
    }
    if (r.points == 0) {
        throw std::invalid_argument("no sieved samples inside the estimate range");
    }
    r.mean_abs = total / static_cast<double>(r.points);
    return r;
}

ResidualStats compare_to_sieve(const EstimateSeries &series, const std::vector<ComparisonPoint> &sieved)
{
    ResidualStats r;
    double total = 0.0;
    for (const ComparisonPoint &p : sieved) {
        const auto it = std::lower_bound(series.points.begin(), series.points.end(), p.u,
                                         [](const EstimatePoint &e, double u) { return e.u < u; });
        const double slack = 1e-12 * std::max(1.0, std::abs(p.u));
        const EstimatePoint *match = nullptr;
        if (it != series.points.end() && std::abs(it->u - p.u) <= slack) {
            match = &*it;
        } else if (it != series.points.begin() && std::abs((it - 1)->u - p.u) <= slack) {
            match = &*(it - 1);
        }
        if (match == nullptr) {
            continue;
        }
        const double d = std::abs(match->value - p.value);
        total += d;
        if (d > r.max_abs || r.points == 0) {
            r.max_abs = d;
            r.worst_u = p.u;
        }
        ++r.points;
    }
    if (r.points == 0) {
        throw std::invalid_argument("the series share no u values");
    }
    r.mean_abs = total / static_cast<double>(r.points);
    return r;
}

std::vector<ComparisonPoint> comparison_points(const SpecSeries &series)
{
    std::vector<ComparisonPoint> out;
    out.reserve(series.points.size());
    for (const SeriesPoint &p : series.points) {
        out.push_back({std::log(static_cast<double>(p.x)), p.normalized});
    }
    return out;
}

NormalizationRule sieve_rule(double alpha)
{
    NormalizationRule r;
    r.exponent = alpha - 0.5;
    r.shift = s_family_shift(alpha).to_double();
    return r;
}

void write_estimate_csv(const EstimateSeries &series, const std::string &path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "u,estimate\n";
    char buf[128];
    for (const EstimatePoint &p : series.points) {
        std::snprintf(buf, sizeof buf, "%.10f,%.15g\n", p.u, p.value);
        out << buf;
    }
}

void write_crossings_csv(const EstimateSeries &series, const std::string &path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "threshold,u_lo,u_hi,u_star\n";
    char buf[160];
    for (const EstimateCrossing &c : series.crossings) {
        std::snprintf(buf, sizeof buf, "%.15g,%.12f,%.12f,%.12f\n", c.threshold, c.u_lo, c.u_hi, c.u_star);
        out << buf;
    }
}

} // namespace oscillax
