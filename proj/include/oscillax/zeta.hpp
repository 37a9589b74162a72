#pragma once

#include "oscillax/ddouble.hpp"

#include <cstdint>

namespace oscillax {

/// Target decimal digits for analytic evaluations. OSCILLAX_PRECISION
/// overrides the default of 32; values are clamped to [4, 32].
int precision_digits();

struct ZetaOptions {
    int digits = 0;                 // 0: precision_digits()
    int max_corrections = 30;       // Bernoulli terms
    std::uint64_t min_nodes = 20;
    double node_slope = 1.3;        // N >= 10 + node_slope * |Im s|
    std::uint64_t nodes = 0;        // fixed N when nonzero
};

struct ZetaResult {
    DDComplex value;
    DDComplex derivative;
    double error_estimate = 0.0;    // absolute, for value
    std::uint64_t nodes = 0;
    int corrections = 0;
};

/// Euler-Maclaurin with the nodes chosen from options; value and derivative
/// are produced together. Throws std::domain_error at s = 1.
ZetaResult zeta_full(DDComplex s, const ZetaOptions &options = {});

DDComplex zeta(DDComplex s, const ZetaOptions &options = {});
DDComplex zeta_prime(DDComplex s, const ZetaOptions &options = {});

/// (s - 1) zeta(s), finite at s = 1 where it equals 1.
DDComplex zeta_regularized(DDComplex s, const ZetaOptions &options = {});

DDouble zeta_real(DDouble s, const ZetaOptions &options = {});

std::uint64_t zeta_nodes(DDComplex s, const ZetaOptions &options = {});

} // namespace oscillax
