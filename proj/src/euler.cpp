#include "oscillax/euler.hpp"

#include "oscillax/primes.hpp"
#include "oscillax/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace oscillax {

LocalFactor LocalFactor::f6()
{
    return {"F6", {{1, 2, 1}, {1, 1, -2}, {2, 1, -1}, {3, 1, -2}, {4, 1, -3}, {5, 1, -6}, {6, 1, -9}}};
}

LocalFactor LocalFactor::h_direct() { return {"h", {{1, 2, 1}, {1, 1, -1}}}; }

LocalFactor LocalFactor::j_direct() { return {"J", {{1, -2, -1}}}; }

LocalFactor LocalFactor::j4()
{
    return {"J4", {{2, 1, 3}, {4, 1, 3}, {1, -2, -1}, {1, 1, -2}, {3, 1, -2}}};
}

std::vector<__int128> LocalFactor::series(int depth) const
{
    std::vector<__int128> a(static_cast<std::size_t>(depth) + 1, 0);
    a[0] = 1;
    for (const Term &t : terms) {
        for (int r = 0; r < std::abs(t.e); ++r) {
            if (t.e > 0) {
                // times (1 - c x^k)
                for (int n = depth; n >= t.k; --n) {
                    a[n] -= t.c * a[n - t.k];
                }
            } else {
                // divided by (1 - c x^k)
                for (int n = t.k; n <= depth; ++n) {
                    a[n] += t.c * a[n - t.k];
                }
            }
        }
    }
    return a;
}

__int128 LocalFactor::log_coefficient_scaled(int n) const
{
    __int128 sum = 0;
    for (const Term &t : terms) {
        if (n % t.k != 0) {
            continue;
        }
        __int128 cm = 1;
        for (int m = 0; m < n / t.k; ++m) {
            cm *= t.c;
        }
        sum -= static_cast<__int128>(t.e) * t.k * cm;
    }
    return sum;
}

int LocalFactor::order() const
{
    for (int n = 1; n <= 120; ++n) {
        if (log_coefficient_scaled(n) != 0) {
            return n;
        }
    }
    return 0;
}

DDComplex LocalFactor::evaluate(DDComplex x) const
{
    DDComplex num(1.0);
    DDComplex den(1.0);
    for (const Term &t : terms) {
        DDComplex xk = x;
        for (int i = 1; i < t.k; ++i) {
            xk = xk * x;
        }
        const DDComplex f = DDComplex(1.0) - xk * DDouble(static_cast<double>(t.c));
        for (int r = 0; r < std::abs(t.e); ++r) {
            (t.e > 0 ? num : den) *= f;
        }
    }
    return num / den;
}

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Bound on sum over integers q > from_q of sum_{n >= from_n} |l_n| q^{-sigma n},
// where l_n are the log coefficients; termwise via the (1 - c x^k)^e pieces.
double log_tail(const LocalFactor &f, double sigma, double from_q, int from_n)
{
    double total = 0.0;
    for (const LocalFactor::Term &t : f.terms) {
        const double c = std::abs(static_cast<double>(t.c));
        const int m0 = (from_n + t.k - 1) / t.k;
        const double ratio = c * std::pow(from_q, -sigma * t.k);
        const double a = sigma * t.k * m0;
        if (ratio >= 1.0 || a <= 1.0) {
            return kInfinity;
        }
        const double q_sum = std::pow(from_q, 1.0 - a) / (a - 1.0);
        total += std::abs(t.e) * std::pow(c, m0) / (m0 * (1.0 - ratio)) * q_sum;
    }
    return total;
}

const std::vector<std::uint32_t> &cached_primes()
{
    static const std::vector<std::uint32_t> primes = primes_up_to(1'000'000);
    return primes;
}

int moebius(int k)
{
    int m = 1;
    for (int p = 2; p * p <= k; ++p) {
        if (k % p == 0) {
            k /= p;
            if (k % p == 0) {
                return 0;
            }
            m = -m;
        }
    }
    return k > 1 ? -m : m;
}

// sum over n in [order, depth] of l_n (P(ns) - sum_{p <= P} p^-ns)
DDouble prime_zeta_correction(const LocalFactor &factor, DDouble s, const std::vector<std::uint32_t> &primes,
                              int order, int depth)
{
    std::vector<DDouble> partial(static_cast<std::size_t>(depth) + 1, DDouble(0.0));
    for (const std::uint32_t p : primes) {
        const DDouble x = dd::exp(-s * dd::log(DDouble(static_cast<double>(p))));
        DDouble xn = x;
        for (int n = 1; n <= depth; ++n) {
            if (n >= order) {
                partial[n] += xn;
            }
            xn *= x;
        }
    }
    DDouble total(0.0);
    for (int n = order; n <= depth; ++n) {
        const auto scaled = factor.log_coefficient_scaled(n);
        if (scaled == 0) {
            continue;
        }
        const DDouble ln = DDouble(static_cast<double>(scaled)) / DDouble(static_cast<double>(n));
        total += ln * (prime_zeta(s * DDouble(static_cast<double>(n))) - partial[n]);
    }
    return total;
}

} // namespace

DDouble prime_zeta(DDouble s)
{
    if (!(s > DDouble(1.0))) {
        throw std::domain_error("prime zeta needs s > 1");
    }
    DDouble sum(0.0);
    for (int k = 1;; ++k) {
        const DDouble ks = s * DDouble(static_cast<double>(k));
        if (ks.to_double() > 120.0) {
            break;
        }
        const int mu = moebius(k);
        if (mu == 0) {
            continue;
        }
        sum += DDouble(static_cast<double>(mu)) / DDouble(static_cast<double>(k)) * dd::log(zeta_real(ks));
    }
    return sum;
}

EulerValue euler_product(const LocalFactor &factor, DDComplex s, const EulerOptions &options)
{
    const double sigma = s.re.to_double();
    const double t = s.im.to_double();
    const int order = factor.order();
    const auto big_p = static_cast<double>(options.prime_cutoff);
    EulerValue out;
    if (order == 0) {
        out.value = DDComplex(1.0);
        return out;
    }
    double outer = log_tail(factor, sigma, std::max(big_p, 2.0), order);
    if (!std::isfinite(outer)) {
        throw std::domain_error("Euler product for " + factor.name + " has no tail bound at Re s = " +
                                std::to_string(sigma));
    }

    std::vector<std::uint32_t> fresh;
    const std::vector<std::uint32_t> *primes = &cached_primes();
    if (options.prime_cutoff > 1'000'000) {
        fresh = primes_up_to(options.prime_cutoff);
        primes = &fresh;
    }
    const auto end = std::upper_bound(primes->begin(), primes->end(), options.prime_cutoff);
    // real s: every prime in double-double (cheap enough, and h(alpha) wants it);
    // complex s: closed form only up to the exact cutoff
    const auto split = t == 0.0 ? end : std::upper_bound(primes->begin(), end, options.exact_cutoff);

    // closed form, double-double
    DDComplex small(1.0);
    const DDComplex minus_s = -s;
    for (auto it = primes->begin(); it != split; ++it) {
        const DDComplex x = dd::pow_from_log(dd::log(DDouble(static_cast<double>(*it))), minus_s);
        small *= factor.evaluate(x);
    }

    // truncated log series in double for the rest: terms are below p^{-order sigma}
    double inner = 0.0;
    int depth = order;
    std::vector<double> coef;
    if (split != end) {
        const double q0 = static_cast<double>(*split) - 1.0;
        for (depth = order; depth < 100; ++depth) {
            inner = log_tail(factor, sigma, q0, depth + 1);
            if (inner < 1e-34) {
                break;
            }
        }
        if (!std::isfinite(inner)) {
            throw std::domain_error("Euler product for " + factor.name + " needs a larger exact cutoff");
        }
        coef.assign(static_cast<std::size_t>(depth) + 1, 0.0);
        for (int n = order; n <= depth; ++n) {
            coef[n] = static_cast<double>(factor.log_coefficient_scaled(n)) / n;
        }
    }
    std::complex<double> log_sum(0.0, 0.0);
    double abs_sum = 0.0;
    // depth shrinks as p grows; recompute it per band of primes
    int band_depth = depth;
    double band_end = 0.0;
    for (auto it = split; it != end; ++it) {
        if (static_cast<double>(*it) > band_end) {
            const double q = static_cast<double>(*it) - 1.0;
            while (band_depth > order && log_tail(factor, sigma, q, band_depth) < 1e-34) {
                --band_depth;
            }
            inner += log_tail(factor, sigma, q, band_depth + 1);
            band_end = 4.0 * static_cast<double>(*it);
        }
        const double lp = std::log(static_cast<double>(*it));
        const double m = std::exp(-sigma * lp);
        const double xr = m * std::cos(t * lp);
        const double xi = -m * std::sin(t * lp);
        // Horner in plain doubles; std::complex multiplication is much slower here
        double ar = coef[band_depth];
        double ai = 0.0;
        for (int n = band_depth - 1; n >= order; --n) {
            const double r = ar * xr - ai * xi + coef[n];
            ai = ar * xi + ai * xr;
            ar = r;
        }
        double pr = xr;
        double pi = xi;
        for (int n = 1; n < order; ++n) {
            const double r = pr * xr - pi * xi;
            pi = pr * xi + pi * xr;
            pr = r;
        }
        const double tr = ar * pr - ai * pi;
        const double ti = ar * pi + ai * pr;
        log_sum += std::complex<double>(tr, ti);
        abs_sum += std::hypot(tr, ti);
    }
    out.value = small * dd::exp(DDComplex(DDouble(log_sum.real()), DDouble(log_sum.imag())));
    if (options.prime_zeta_tail) {
        if (t != 0.0) {
            throw std::domain_error("prime zeta tail correction needs real s");
        }
        int tail_depth = order;
        for (; tail_depth < 100; ++tail_depth) {
            if (log_tail(factor, sigma, std::max(big_p, 2.0), tail_depth + 1) < 1e-33) {
                break;
            }
        }
        if (sigma * order <= 1.0) {
            throw std::domain_error("prime zeta tail correction needs n Re s > 1");
        }
        const std::vector<std::uint32_t> used(primes->begin(), end);
        out.value = out.value * dd::exp(prime_zeta_correction(factor, s.re, used, order, tail_depth));
        outer = log_tail(factor, sigma, std::max(big_p, 2.0), tail_depth + 1) + 1e-30;
    }
    out.primes = static_cast<std::uint64_t>(end - primes->begin());
    out.depth = depth;
    // the exponent s ln p, formed in double, carries absolute error ~ |s| ln P 2^-53,
    // which becomes relative error order times that in each term
    const double rounding = abs_sum * 2.3e-16 *
                                (8.0 + order * (std::abs(sigma) + std::abs(t)) * std::log(std::max(big_p, 2.0))) +
                            1e-30 * static_cast<double>(split - primes->begin());
    const double budget = outer + inner + rounding;
    out.tail_bound = dd::abs(out.value).to_double() * std::expm1(budget);
    return out;
}

} // namespace oscillax
