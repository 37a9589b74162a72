#pragma once

#include "oscillax/ddouble.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oscillax {

/// Local factor prod_j (1 - c_j x^{k_j})^{e_j}, evaluated at x = p^-s.
struct LocalFactor {
    struct Term {
        int k;
        int c;
        int e;
    };
    std::string name;
    std::vector<Term> terms;

    static LocalFactor f6();        // (1-2x)(1-x)^-2(1-x^2)^-1(1-x^3)^-2(1-x^4)^-3(1-x^5)^-6(1-x^6)^-9
    static LocalFactor h_direct();  // (1-2x)(1-x)^-1
    static LocalFactor j_direct();  // (1+2x)^-1
    static LocalFactor j4();        // (1-x^2)^3(1-x^4)^3 / ((1+2x)(1-x)^2(1-x^3)^2)

    /// Exact power-series coefficients a_0..a_depth.
    std::vector<__int128> series(int depth) const;

    /// n * (coefficient of x^n in log of the factor), exact.
    __int128 log_coefficient_scaled(int n) const;

    /// Smallest n >= 1 with a nonzero log coefficient (0 if none up to 120).
    int order() const;

    DDComplex evaluate(DDComplex x) const;
};

struct EulerOptions {
    std::uint64_t prime_cutoff = 1'000'000;  // P
    std::uint64_t exact_cutoff = 1000;       // primes up to here use the closed form
    // real s only: add the omitted primes through prime zeta values
    // P(ns) - sum_{p<=P} p^-ns, leaving only the series remainder in the bound
    bool prime_zeta_tail = false;
};

struct EulerValue {
    DDComplex value;
    double tail_bound = 0.0;   // absolute bound on |value - full product|
    std::uint64_t primes = 0;  // primes used
    int depth = 0;             // log-series depth for primes above the exact cutoff
};

/// Prime zeta function sum_p p^-s for real s > 1, from log zeta(ks) and Moebius.
DDouble prime_zeta(DDouble s);

/// prod_{p <= P} factor(p^-s) with a bound on the omitted primes.
/// Throws std::domain_error where no tail bound can be given (Re s too small).
EulerValue euler_product(const LocalFactor &factor, DDComplex s, const EulerOptions &options = {});

} // namespace oscillax
