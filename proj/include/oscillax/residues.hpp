#pragma once

#include "oscillax/ddouble.hpp"
#include "oscillax/euler.hpp"

#include <array>
#include <cstdint>

namespace oscillax {

/// Euler's constant (written as a Greek xi in some sources).
inline const DDouble &EulerGamma = dd::euler_gamma;

/// Center of the normalized sum as a function of u = ln x: intercept + slope u.
/// slope is zero except for the S-family at alpha = 1/2.
struct CenterLine {
    DDouble slope;
    DDouble intercept;
    double at(double u) const { return (intercept + slope * DDouble(u)).to_double(); }
    bool affine() const { return slope.hi() != 0.0; }
};

struct ResidueTerm {
    DDouble gamma;
    DDComplex residue;
    double magnitude = 0.0;
};

/// Zeta data at rho = 1/2 + i gamma shared by every alpha.
struct ZeroAnalytics {
    DDouble gamma;
    DDComplex rho;
    DDComplex zeta_prime_rho;
    DDComplex zeta_2rho;
    bool has_h_part = false;
    DDComplex f6_rho;       // F_6(rho)
    DDComplex z6_hat_rho;   // zeta(2rho) zeta^2(3rho) zeta^3(4rho) zeta^6(5rho) zeta^9(6rho)
    double f6_tail = 0.0;
};

/// Throws std::invalid_argument when |zeta(rho)| > 1e-6 or |zeta'(rho)| < 1e-12.
ZeroAnalytics analyze_zero(DDouble gamma, bool with_h_part, const EulerOptions &euler = {});

// S-family: Laplace transform F_alpha of the centered, scaled sum.
/// Residue at 0 (alpha != 1/2) or the full center line (alpha = 1/2).
CenterLine res_F_at_zero(double alpha);
ResidueTerm res_F_at_gamma(double alpha, const ZeroAnalytics &zero);
ResidueTerm res_F_at_gamma(double alpha, DDouble gamma);
/// F_alpha(s) including the pole-removing adjustments.
DDComplex transform_F(double alpha, DDComplex s);
/// Constant added to the sum for 1/2 < alpha < 1 so the transform has no
/// pole at alpha - 1/2: (1 + 2^(1 - alpha)) zeta(2 alpha) / zeta(alpha). Zero elsewhere.
DDouble s_family_shift(double alpha);

// H-family.
DDouble res_G_at_zero(double alpha);
ResidueTerm res_G_at_gamma(double alpha, const ZeroAnalytics &zero);
ResidueTerm res_G_at_gamma(double alpha, DDouble gamma);

struct HValue {
    DDouble value;
    double error = 0.0;
};

/// h(alpha) = F_6(alpha) / Z_6(alpha) for alpha in [1/2, 1]; 0 at both ends.
HValue h_of_alpha(double alpha, const EulerOptions &euler = {});

/// Coefficients of x^7, x^8, x^9 in the F_6 local factor.
std::array<long long, 3> h_series_check();

/// Euler product prod (1 - 2 p^-s) times zeta(s), for Re s > 1.
EulerValue h_direct(double s, const EulerOptions &euler = {});

/// J(s) = prod (1 + 2 p^-s)^-1, Re s > 1.
EulerValue evaluate_J(double s, const EulerOptions &euler = {});
/// J_4(s), Re s > 1/5.
EulerValue evaluate_J4(double s, const EulerOptions &euler = {});
/// zeta(2s)^3 zeta(4s)^3 J_4(s) / (zeta(s)^2 zeta(3s)^2).
EulerValue evaluate_J_factored(double s, const EulerOptions &euler = {});

} // namespace oscillax
