#include "oscillax/residues.hpp"

#include "oscillax/zeta.hpp"

#include <cmath>
#include <stdexcept>

namespace oscillax {

namespace {

const DDouble kOnePlusRoot2 = DDouble(1.0) + dd::sqrt2;

DDouble zeta_half() { return zeta_real(DDouble(0.5)); }

DDComplex ipow(DDComplex z, int n)
{
    DDComplex r(1.0);
    for (int i = 0; i < n; ++i) {
        r *= z;
    }
    return r;
}

DDComplex rho_of(DDouble gamma) { return {DDouble(0.5), gamma}; }

ResidueTerm make_term(DDouble gamma, DDComplex r)
{
    return {gamma, r, dd::abs(r).to_double()};
}

void check_alpha(double alpha)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::domain_error("alpha must lie in [0, 1]");
    }
}

} // namespace

ZeroAnalytics analyze_zero(DDouble gamma, bool with_h_part, const EulerOptions &euler)
{
    ZeroAnalytics z;
    z.gamma = gamma;
    z.rho = rho_of(gamma);
    const ZetaResult at_rho = zeta_full(z.rho);
    if (dd::abs(at_rho.value).to_double() > 1e-6) {
        throw std::invalid_argument("1/2 + i" + dd::to_string(gamma, 20) + " is not a zeta zero");
    }
    if (dd::abs(at_rho.derivative).to_double() < 1e-12) {
        throw std::invalid_argument("zeta' vanishes at 1/2 + i" + dd::to_string(gamma, 20));
    }
    z.zeta_prime_rho = at_rho.derivative;
    z.zeta_2rho = zeta(z.rho * DDouble(2.0));
    if (with_h_part) {
        z.has_h_part = true;
        const EulerValue f6 = euler_product(LocalFactor::f6(), z.rho, euler);
        z.f6_rho = f6.value;
        z.f6_tail = f6.tail_bound;
        z.z6_hat_rho = z.zeta_2rho * ipow(zeta(z.rho * DDouble(3.0)), 2) * ipow(zeta(z.rho * DDouble(4.0)), 3) *
                       ipow(zeta(z.rho * DDouble(5.0)), 6) * ipow(zeta(z.rho * DDouble(6.0)), 9);
    }
    return z;
}

CenterLine res_F_at_zero(double alpha)
{
    check_alpha(alpha);
    const DDouble zh = zeta_half();
    CenterLine c;
    if (alpha == 0.5) {
        const DDouble zph = zeta_prime(DDComplex(DDouble(0.5))).re;
        c.slope = -kOnePlusRoot2 / (DDouble(2.0) * zh);
        c.intercept = kOnePlusRoot2 / zh *
                      (dd::ln2 / (DDouble(2.0) + dd::sqrt2) + zph / (DDouble(2.0) * zh) - EulerGamma);
        return c;
    }
    c.slope = DDouble(0.0);
    c.intercept = kOnePlusRoot2 / ((DDouble(2.0) * DDouble(alpha) - DDouble(1.0)) * zh);
    return c;
}

ResidueTerm res_F_at_gamma(double alpha, const ZeroAnalytics &z)
{
    check_alpha(alpha);
    const DDComplex two_conj = dd::pow_from_log(dd::ln2, dd::conj(z.rho));
    const DDComplex r = -(DDComplex(1.0) + two_conj) * z.zeta_2rho /
                        ((z.rho - DDComplex(DDouble(alpha))) * z.zeta_prime_rho);
    return make_term(z.gamma, r);
}

ResidueTerm res_F_at_gamma(double alpha, DDouble gamma)
{
    return res_F_at_gamma(alpha, analyze_zero(gamma, false));
}

DDComplex transform_F(double alpha, DDComplex s)
{
    check_alpha(alpha);
    const DDComplex one(1.0);
    const DDComplex half(0.5);
    const DDComplex shift = s - DDComplex(DDouble(alpha)) + half;
    const DDComplex two_pow = dd::pow_from_log(dd::ln2, half - s);
    DDComplex f = -(one + two_pow) * zeta(s * DDouble(2.0) + one) / (shift * zeta(s + half));
    if (alpha == 0.5) {
        f += DDComplex(kOnePlusRoot2 / (DDouble(2.0) * zeta_half())) / (s * s);
    } else if (alpha > 0.5 && alpha < 1.0) {
        f += DDComplex(s_family_shift(alpha)) / shift;
    }
    return f;
}

DDouble s_family_shift(double alpha)
{
    if (!(alpha > 0.5 && alpha < 1.0)) {
        return DDouble(0.0);
    }
    // residue of f_alpha at alpha - 1/2 is -(1 + 2^(1 - alpha)) zeta(2 alpha) / zeta(alpha)
    const DDouble a(alpha);
    const DDouble two = dd::exp((DDouble(1.0) - a) * dd::ln2);
    return (DDouble(1.0) + two) * zeta_real(DDouble(2.0) * a) / zeta_real(a);
}

DDouble res_G_at_zero(double alpha)
{
    check_alpha(alpha);
    return alpha <= 0.5 ? DDouble(0.0) : h_of_alpha(alpha).value;
}

ResidueTerm res_G_at_gamma(double alpha, const ZeroAnalytics &z)
{
    check_alpha(alpha);
    if (!z.has_h_part) {
        throw std::invalid_argument("zero analytics lack the F_6 / Z_6 part");
    }
    const DDComplex r = z.f6_rho / ((z.rho - DDComplex(DDouble(alpha))) * z.zeta_prime_rho * z.z6_hat_rho);
    return make_term(z.gamma, r);
}

ResidueTerm res_G_at_gamma(double alpha, DDouble gamma)
{
    return res_G_at_gamma(alpha, analyze_zero(gamma, true));
}

HValue h_of_alpha(double alpha, const EulerOptions &euler)
{
    if (!(alpha >= 0.5 && alpha <= 1.0)) {
        throw std::domain_error("h(alpha) is evaluated on [1/2, 1] only");
    }
    if (alpha == 0.5 || alpha == 1.0) {
        return {DDouble(0.0), 0.0};
    }
    const DDouble a(alpha);
    const EulerValue f6 = euler_product(LocalFactor::f6(), DDComplex(a), euler);
    // 1/zeta(a) and 1/zeta(2a) through (s-1)zeta(s) so both ends stay finite
    const DDouble r1 = zeta_regularized(DDComplex(a)).re;
    const DDouble r2 = zeta_regularized(DDComplex(DDouble(2.0) * a)).re;
    DDouble den = r1 * r2;
    const int powers[] = {2, 3, 6, 9};
    for (int j = 0; j < 4; ++j) {
        const DDouble z = zeta_real(DDouble(3.0 + j) * a);
        for (int r = 0; r < powers[j]; ++r) {
            den *= z;
        }
    }
    const DDouble num = f6.value.re * (a - DDouble(1.0)) * (DDouble(2.0) * a - DDouble(1.0));
    const DDouble v = num / den;
    const double rel = f6.tail_bound / std::max(dd::abs(f6.value).to_double(), 1e-300);
    return {v, std::abs(v.to_double()) * rel + 1e-28};
}

std::array<long long, 3> h_series_check()
{
    const auto a = LocalFactor::f6().series(9);
    return {static_cast<long long>(a[7]), static_cast<long long>(a[8]), static_cast<long long>(a[9])};
}

EulerValue h_direct(double s, const EulerOptions &euler)
{
    if (!(s > 1.0)) {
        throw std::domain_error("the direct product needs Re s > 1");
    }
    const LocalFactor one_minus_2x{"1-2x", {{1, 2, 1}}};
    EulerOptions opts = euler;
    opts.prime_zeta_tail = true;
    EulerValue v = euler_product(one_minus_2x, DDComplex(DDouble(s)), opts);
    const DDouble z = zeta_real(DDouble(s));
    v.value = v.value * z;
    v.tail_bound *= std::abs(z.to_double());
    return v;
}

EulerValue evaluate_J(double s, const EulerOptions &euler)
{
    if (!(s > 1.0)) {
        throw std::domain_error("the direct product for J needs Re s > 1");
    }
    EulerOptions opts = euler;
    opts.prime_zeta_tail = true;
    return euler_product(LocalFactor::j_direct(), DDComplex(DDouble(s)), opts);
}

EulerValue evaluate_J4(double s, const EulerOptions &euler)
{
    if (!(s > 0.2)) {
        throw std::domain_error("J_4 needs Re s > 1/5");
    }
    return euler_product(LocalFactor::j4(), DDComplex(DDouble(s)), euler);
}

EulerValue evaluate_J_factored(double s, const EulerOptions &euler)
{
    if (!(s > 1.0)) {
        throw std::domain_error("the factored form is compared for Re s > 1");
    }
    EulerValue v = evaluate_J4(s, euler);
    const DDouble x(s);
    const DDouble z1 = zeta_real(x);
    const DDouble z2 = zeta_real(DDouble(2.0) * x);
    const DDouble z3 = zeta_real(DDouble(3.0) * x);
    const DDouble z4 = zeta_real(DDouble(4.0) * x);
    const DDouble scale = z2 * z2 * z2 * z4 * z4 * z4 / (z1 * z1 * z3 * z3);
    v.value = v.value * scale;
    v.tail_bound *= std::abs(scale.to_double());
    return v;
}

} // namespace oscillax
