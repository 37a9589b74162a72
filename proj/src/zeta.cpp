#include "oscillax/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace oscillax {

namespace {

// B_{2k} / (2k)!, k = 1..40
const DDouble kBernoulli[] = {
    {0.08333333333333333, 4.625929269271485e-18},
    {-0.001388888888888889, 5.300543954373577e-20},
    {3.306878306878307e-05, -2.2300719288557665e-21},
    {-8.267195767195768e-07, 3.457597454003665e-23},
    {2.08767569878681e-08, -1.2073450591132599e-24},
    {-5.284190138687493e-10, 3.517096671929869e-27},
    {1.3382536530684679e-11, -2.828354019907999e-29},
    {-3.3896802963225827e-13, -1.4986928409964295e-29},
    {8.586062056277845e-15, -6.05252374381974e-31},
    {-2.174868698558062e-16, 4.961617782549996e-33},
    {5.5090028283602295e-18, -1.49827152194499e-35},
    {-1.3954464685812522e-19, -1.0350590497256251e-35},
    {3.534707039629467e-21, 1.894231142684204e-37},
    {-8.953517427037546e-23, -5.728752743153026e-39},
    {2.267952452337683e-24, 1.3043458462619563e-40},
    {-5.744790668872202e-26, 1.663242973708004e-43},
    {1.455172475614865e-27, -5.613265715443096e-44},
    {-3.6859949406653103e-29, 1.0778256413554197e-45},
    {9.336734257095045e-31, -3.9347970210731877e-47},
    {-2.36502241570063e-32, 2.0347170931532494e-49},
    {5.990671762482134e-34, 1.6265467158179092e-50},
    {-1.5174548844682903e-35, 5.493014407946745e-52},
    {3.843758125454189e-37, -3.685053096067968e-53},
    {-9.736353072646691e-39, 2.258059165188444e-55},
    {2.466247044200681e-40, -1.505641802268162e-56},
    {-6.247076741820743e-42, -2.7106815859687654e-58},
    {1.5824030244644914e-43, 2.545428531496969e-60},
    {-4.008273685948936e-45, -2.2124211668946826e-61},
    {1.0153075855569557e-46, -9.404269751258486e-63},
    {-2.5718041582418717e-48, -6.537655454012542e-65},
    {6.514456035233815e-50, -2.763626172529861e-66},
    {-1.6501309906896525e-51, 3.1794529475063687e-68},
    {4.179830628539476e-53, 2.617556823159939e-69},
    {-1.058763466770291e-54, 6.6915528436035195e-71},
    {2.6818791912607708e-56, -8.70695425146146e-73},
    {-6.793279351107421e-58, 2.795667911354165e-74},
    {1.7207577616681404e-59, 4.65433497191727e-76},
    {-4.358730329348894e-61, 2.8840522874209336e-77},
    {1.1040792903684666e-62, 6.624841731022409e-79},
    {-2.7966655133781345e-64, 2.628041826403209e-81},
};
constexpr int kBernoulliCount = sizeof(kBernoulli) / sizeof(kBernoulli[0]);

// ln n for small n, shared by every evaluation
const std::vector<DDouble> &log_table()
{
    static const std::vector<DDouble> table = [] {
        constexpr std::size_t size = 1u << 17;
        std::vector<DDouble> t(size, DDouble(0.0));
        std::vector<std::uint32_t> spf(size, 0);
        for (std::size_t n = 2; n < size; ++n) {
            if (spf[n] == 0) {
                for (std::size_t m = n; m < size; m += n) {
                    if (spf[m] == 0) {
                        spf[m] = static_cast<std::uint32_t>(n);
                    }
                }
                t[n] = dd::log(DDouble(static_cast<double>(n)));
            } else {
                t[n] = t[spf[n]] + t[n / spf[n]];
            }
        }
        return t;
    }();
    return table;
}

double magnitude(DDComplex z) { return std::hypot(z.re.to_double(), z.im.to_double()); }

// Pieces of the Euler-Maclaurin sum at a fixed N, kept apart so the value,
// derivative and (s-1)-regularized forms can be assembled from them.
struct Pieces {
    DDComplex head;        // sum_{n<N} n^-s
    DDComplex head_log;    // sum_{n<N} ln(n) n^-s
    DDComplex n_pow;       // N^-s
    DDComplex corr;        // N^-s/2 + Bernoulli terms
    DDComplex corr_prime;  // derivative of corr
    DDouble ln_n;
    double error = 0.0;
    std::uint64_t nodes = 0;
    int corrections = 0;
};

Pieces compute(DDComplex s, const ZetaOptions &options, bool want_derivative)
{
    Pieces out;
    const std::uint64_t n_nodes = zeta_nodes(s, options);
    out.nodes = n_nodes;
    const int digits = options.digits > 0 ? options.digits : precision_digits();
    const double tol = std::pow(10.0, -digits - 1);
    const DDComplex minus_s = -s;
    const std::vector<DDouble> &logs = log_table();

    // n^-s by complete multiplicativity: exponentials only at primes
    std::vector<std::uint32_t> spf(n_nodes, 0);
    std::vector<DDComplex> pw(n_nodes);
    std::vector<DDouble> lg(want_derivative ? n_nodes : 0);
    double abs_sum = 0.0;
    if (n_nodes > 1) {
        pw[1] = DDComplex(1.0);
        if (want_derivative) {
            lg[1] = DDouble(0.0);
        }
    }
    for (std::uint64_t n = 2; n < n_nodes; ++n) {
        if (spf[n] == 0) {
            for (std::uint64_t m = n; m < n_nodes; m += n) {
                if (spf[m] == 0) {
                    spf[m] = static_cast<std::uint32_t>(n);
                }
            }
            const DDouble l = n < logs.size() ? logs[n] : dd::log(DDouble(static_cast<double>(n)));
            pw[n] = dd::pow_from_log(l, minus_s);
            if (want_derivative) {
                lg[n] = l;
            }
        } else {
            const std::uint64_t p = spf[n];
            pw[n] = pw[p] * pw[n / p];
            if (want_derivative) {
                lg[n] = lg[p] + lg[n / p];
            }
        }
    }
    for (std::uint64_t n = 1; n < n_nodes; ++n) {
        out.head += pw[n];
        abs_sum += magnitude(pw[n]);
        if (want_derivative) {
            out.head_log += pw[n] * lg[n];
        }
    }

    const DDouble big_n(static_cast<double>(n_nodes));
    out.ln_n = dd::log(big_n);
    out.n_pow = dd::pow_from_log(out.ln_n, minus_s);
    out.corr = out.n_pow * DDouble(0.5);
    out.corr_prime = out.n_pow * (out.ln_n * DDouble(-0.5));

    // Bernoulli corrections: c_k P_k(s) N^{-s-2k+1}, P_1 = s,
    // P_{k+1} = P_k (s+2k-1)(s+2k)
    DDComplex p = s;
    DDComplex dp(1.0);
    const DDouble inv_n2 = DDouble(1.0) / (big_n * big_n);
    DDComplex scale = out.n_pow / big_n; // N^{-s-1}
    const double reference = std::max(magnitude(out.head + out.corr), 1e-300);
    const double reference_prime = std::max(magnitude(out.head_log) + magnitude(out.corr_prime), 1e-300);
    const int limit = std::min(options.max_corrections, kBernoulliCount - 1);
    double next = 0.0;
    int k = 1;
    for (; k <= limit; ++k) {
        const DDComplex term = kBernoulli[k - 1] * p * scale;
        out.corr += term;
        if (want_derivative) {
            out.corr_prime += kBernoulli[k - 1] * (dp - out.ln_n * p) * scale;
        }
        const DDComplex a = s + DDouble(2.0 * k - 1);
        const DDComplex b = s + DDouble(2.0 * k);
        const DDComplex ab = a * b;
        dp = dp * ab + p * (s * DDouble(2.0) + DDouble(4.0 * k - 1));
        p = p * ab;
        scale = scale * inv_n2;
        next = magnitude(kBernoulli[k] * p * scale);
        const double next_prime = want_derivative ? magnitude(kBernoulli[k] * (dp - out.ln_n * p) * scale) : 0.0;
        if (next < tol * reference && next_prime < tol * reference_prime) {
            break;
        }
    }
    out.corrections = std::min(k, limit);
    const double sigma = s.re.to_double();
    const double grow = sigma + 2.0 * out.corrections + 1.0;
    const double ratio = grow > 0.0 ? magnitude(s + DDouble(2.0 * out.corrections + 1.0)) / grow : 1e3;
    out.error = next * ratio + 8.0 * dd::eps * (abs_sum + 1.0);
    return out;
}

} // namespace

int precision_digits()
{
    if (const char *env = std::getenv("OSCILLAX_PRECISION")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0') {
            return static_cast<int>(std::clamp(v, 4L, 32L));
        }
    }
    return 32;
}

std::uint64_t zeta_nodes(DDComplex s, const ZetaOptions &options)
{
    if (options.nodes > 0) {
        return std::max<std::uint64_t>(options.nodes, 2);
    }
    const double size = magnitude(s);
    const auto n = static_cast<std::uint64_t>(std::ceil(10.0 + options.node_slope * size));
    return std::max(options.min_nodes, n);
}

ZetaResult zeta_full(DDComplex s, const ZetaOptions &options)
{
    const DDComplex sm1 = s - DDouble(1.0);
    if (sm1.re.hi() == 0.0 && sm1.im.hi() == 0.0) {
        throw std::domain_error("zeta has a pole at s = 1");
    }
    const Pieces pc = compute(s, options, true);
    const DDouble big_n(static_cast<double>(pc.nodes));
    const DDComplex n_one = pc.n_pow * big_n; // N^{1-s}
    const DDComplex q = n_one / sm1;
    ZetaResult r;
    r.value = pc.head + q + pc.corr;
    r.derivative = -pc.head_log - q * pc.ln_n - q / sm1 + pc.corr_prime;
    r.error_estimate = pc.error;
    r.nodes = pc.nodes;
    r.corrections = pc.corrections;
    return r;
}

DDComplex zeta(DDComplex s, const ZetaOptions &options)
{
    const DDComplex sm1 = s - DDouble(1.0);
    if (sm1.re.hi() == 0.0 && sm1.im.hi() == 0.0) {
        throw std::domain_error("zeta has a pole at s = 1");
    }
    const Pieces pc = compute(s, options, false);
    const DDouble big_n(static_cast<double>(pc.nodes));
    return pc.head + pc.n_pow * big_n / sm1 + pc.corr;
}

DDComplex zeta_prime(DDComplex s, const ZetaOptions &options) { return zeta_full(s, options).derivative; }

DDComplex zeta_regularized(DDComplex s, const ZetaOptions &options)
{
    const Pieces pc = compute(s, options, false);
    const DDComplex sm1 = s - DDouble(1.0);
    const DDouble big_n(static_cast<double>(pc.nodes));
    return sm1 * (pc.head + pc.corr) + pc.n_pow * big_n;
}

DDouble zeta_real(DDouble s, const ZetaOptions &options) { return zeta(DDComplex(s), options).re; }

} // namespace oscillax
