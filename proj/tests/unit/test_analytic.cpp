#include "doctest.h"

#include "oscillax/residues.hpp"
#include "oscillax/zeros.hpp"
#include "oscillax/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

using namespace oscillax;

namespace {

double mag(DDComplex z) { return dd::abs(z).to_double(); }

const ZeroSet &zeros()
{
    static const ZeroSet set = load_zeros(std::string(OSCILLAX_DATA_DIR) + "/zeros5000.txt");
    return set;
}

// (1 / 2 pi i) contour integral of F around i gamma, as the mean of
// (s - i gamma) F(s) over equally spaced points of a small circle
template <class F>
DDComplex contour_residue(F &&f, DDouble gamma, double radius, int points)
{
    DDComplex sum(0.0);
    for (int j = 0; j < points; ++j) {
        const DDouble th = dd::two_pi * DDouble(static_cast<double>(j)) / DDouble(static_cast<double>(points));
        DDouble sn, cs;
        dd::sincos(th, sn, cs);
        const DDComplex offset{DDouble(radius) * cs, DDouble(radius) * sn};
        const DDComplex s = DDComplex(DDouble(0.0), gamma) + offset;
        sum += offset * f(s);
    }
    return sum / DDouble(static_cast<double>(points));
}

DDouble z6(DDouble s)
{
    DDouble z = zeta_real(s) * zeta_real(DDouble(2.0) * s);
    const int powers[] = {2, 3, 6, 9};
    for (int j = 0; j < 4; ++j) {
        const DDouble v = zeta_real(DDouble(3.0 + j) * s);
        for (int r = 0; r < powers[j]; ++r) {
            z *= v;
        }
    }
    return z;
}

} // namespace

TEST_CASE("centers at zero")
{
    CHECK(std::abs(res_F_at_zero(0.0).intercept.to_double() - 1.6531) < 1e-4);
    CHECK(std::abs(res_F_at_zero(1.0).intercept.to_double() + 1.6531) < 1e-4);
    CHECK_FALSE(res_F_at_zero(0.0).affine());
    const CenterLine half = res_F_at_zero(0.5);
    CHECK(half.affine());
    CHECK(std::abs(half.slope.to_double() - 0.826585) < 1e-5);
    CHECK(std::abs(half.intercept.to_double() + 1.60167) < 1e-5);
    CHECK(std::abs(half.at(10.0) - (0.826585 * 10 - 1.60167)) < 1e-4);
    // (1 + sqrt 2) / ((2 alpha - 1) zeta(1/2)) scales as 1 / (2 alpha - 1)
    CHECK(std::abs(res_F_at_zero(0.25).intercept.to_double() - 2 * res_F_at_zero(0.0).intercept.to_double()) < 1e-14);
    CHECK_THROWS_AS(res_F_at_zero(1.5), std::domain_error);
}

TEST_CASE("h(alpha)")
{
    CHECK(h_of_alpha(1.0).value.to_double() == 0.0);
    CHECK(h_of_alpha(0.5).value.to_double() == 0.0);
    CHECK(std::abs(h_of_alpha(0.999999).value.to_double()) < 1e-6);
    CHECK(std::abs(h_of_alpha(0.55).value.to_double() + 0.094719) < 1e-5);
    CHECK(std::abs(h_of_alpha(0.75).value.to_double() - 0.079384) < 1e-5);
    CHECK(std::abs(h_of_alpha(0.55336).value.to_double() + 0.0950579) < 1e-5);
    CHECK(std::abs(h_of_alpha(0.73587).value.to_double() - 0.0804324) < 1e-5);
    CHECK(h_of_alpha(0.75).error < 1e-20);
    CHECK_THROWS_AS(h_of_alpha(0.4), std::domain_error);
    CHECK(res_G_at_zero(0.3).to_double() == 0.0);
    CHECK(res_G_at_zero(0.5).to_double() == 0.0);
    CHECK(std::abs(res_G_at_zero(0.75).to_double() - 0.0793843) < 1e-7);
    // sign change between the two extremes
    CHECK(h_of_alpha(0.62).value.to_double() < 0.0);
    CHECK(h_of_alpha(0.64).value.to_double() > 0.0);
}

TEST_CASE("local factor expansions")
{
    const auto f6 = LocalFactor::f6().series(12);
    for (int n = 1; n <= 6; ++n) {
        CHECK(f6[n] == 0);
    }
    const auto c = h_series_check();
    CHECK(c[0] == -18);
    CHECK(c[1] == -30);
    CHECK(c[2] == -56);
    CHECK(LocalFactor::f6().order() == 7);
    const auto j4 = LocalFactor::j4().series(8);
    for (int n = 1; n <= 4; ++n) {
        CHECK(j4[n] == 0);
    }
    CHECK(j4[5] != 0);
    CHECK(LocalFactor::j4().order() == 5);
    CHECK(LocalFactor::j_direct().order() == 1);
    // closed form against the series at a small point
    const DDouble x(1e-3);
    DDouble series(0.0);
    DDouble xn(1.0);
    for (int n = 0; n <= 12; ++n) {
        series += DDouble(static_cast<double>(f6[n])) * xn;
        xn *= x;
    }
    CHECK(std::abs((LocalFactor::f6().evaluate(DDComplex(x)).re - series).to_double()) < 1e-30);
    // J_4 local factor tends to 1 as p^-s -> 0
    CHECK(std::abs((LocalFactor::j4().evaluate(DDComplex(DDouble(1e-9))).re - DDouble(1.0)).to_double()) < 1e-30);
}

TEST_CASE("Euler products agree with zeta-factored forms")
{
    for (double s : {1.1, 1.5, 2.0, 2.5, 3.0}) {
        CAPTURE(s);
        const EulerValue direct = h_direct(s);
        const EulerValue f6 = euler_product(LocalFactor::f6(), DDComplex(DDouble(s)));
        const DDouble z = z6(DDouble(s));
        const double diff = std::abs((direct.value.re - f6.value.re / z).to_double());
        CHECK(diff <= direct.tail_bound + f6.tail_bound / std::abs(z.to_double()) + 1e-26);
    }
    for (double s : {2.0, 3.0}) {
        CAPTURE(s);
        const EulerValue direct = evaluate_J(s);
        const EulerValue factored = evaluate_J_factored(s);
        CHECK(std::abs((direct.value.re - factored.value.re).to_double()) < 1e-10);
        CHECK(std::abs((direct.value.re - factored.value.re).to_double()) <=
              direct.tail_bound + factored.tail_bound + 1e-26);
        // the plain truncated product honours its own (loose) bound
        const EulerValue plain = euler_product(LocalFactor::j_direct(), DDComplex(DDouble(s)));
        CHECK(std::abs((plain.value.re - factored.value.re).to_double()) <= plain.tail_bound + factored.tail_bound);
        CHECK(plain.tail_bound > 0.0);
    }
    CHECK_THROWS_AS(evaluate_J(0.9), std::domain_error);
    CHECK_THROWS_AS(evaluate_J4(0.2), std::domain_error);
    CHECK_THROWS_AS(euler_product(LocalFactor::f6(), DDComplex(DDouble(0.1))), std::domain_error);
}

TEST_CASE("h(2) against the Dirichlet series")
{
    // sum (-1)^omega(n) n^-2 over n <= 10^6; the tail is below 1e-6
    constexpr std::size_t top = 1'000'000;
    std::vector<unsigned char> omega(top + 1, 0);
    for (std::size_t p = 2; p <= top; ++p) {
        if (omega[p] == 0) {
            for (std::size_t m = p; m <= top; m += p) {
                ++omega[m];
            }
        }
    }
    double sum = 0.0;
    for (std::size_t n = top; n >= 1; --n) {
        const double term = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
        sum += (omega[n] % 2 == 0) ? term : -term;
    }
    const EulerValue f6 = euler_product(LocalFactor::f6(), DDComplex(DDouble(2.0)));
    const double h2 = (f6.value.re / z6(DDouble(2.0))).to_double();
    CHECK(std::abs(h2 - sum) < 1.1e-6);
}

TEST_CASE("prime zeta")
{
    CHECK(std::abs((prime_zeta(DDouble(2.0)) - dd::parse("0.45224742004106549850654336483224793")).to_double()) <
          1e-28);
    CHECK(std::abs((prime_zeta(DDouble(1.1)) - dd::parse("2.1088436903320919168391893308473673")).to_double()) <
          1e-27);
}

TEST_CASE("S-family residues against contour means")
{
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<std::size_t> pick(1, 200);
    const double alphas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int i = 0; i < 5; ++i) {
        const std::size_t idx = i == 0 ? 1 : pick(rng);
        const DDouble g = zeros().gamma(idx);
        const ZeroAnalytics z = analyze_zero(g, false);
        for (double a : alphas) {
            CAPTURE(idx);
            CAPTURE(a);
            const DDComplex want = contour_residue([&](DDComplex s) { return transform_F(a, s); }, g, 0.05, 64);
            const DDComplex got = res_F_at_gamma(a, z).residue;
            CHECK(mag(got - want) / mag(want) < 1e-10);
        }
    }
}

TEST_CASE("H-family residues against contour means")
{
    for (std::size_t idx : {1, 17}) {
        const DDouble g = zeros().gamma(idx);
        const ZeroAnalytics z = analyze_zero(g, true);
        for (double a : {0.0, 0.75}) {
            CAPTURE(idx);
            CAPTURE(a);
            const auto g_alpha = [&](DDComplex s) {
                const DDComplex w = s + DDComplex(DDouble(0.5));
                const EulerValue f6 = euler_product(LocalFactor::f6(), w);
                DDComplex den = zeta(w) * zeta(w * DDouble(2.0));
                const int powers[] = {2, 3, 6, 9};
                for (int j = 0; j < 4; ++j) {
                    const DDComplex v = zeta(w * DDouble(3.0 + j));
                    for (int r = 0; r < powers[j]; ++r) {
                        den *= v;
                    }
                }
                // the h(alpha) / (s - alpha + 1/2) adjustment is analytic at i gamma
                return f6.value / (den * (s - DDComplex(DDouble(a)) + DDComplex(DDouble(0.5))));
            };
            const DDComplex want = contour_residue(g_alpha, g, 0.05, 24);
            const DDComplex got = res_G_at_gamma(a, z).residue;
            CHECK(mag(got - want) / mag(want) < 1e-10);
        }
    }
}

TEST_CASE("adjusted transform is analytic off the imaginary axis")
{
    for (double a : {0.6, 0.75, 0.9}) {
        CAPTURE(a);
        const DDComplex pole(DDouble(a - 0.5));
        DDComplex sum(0.0);
        double scale = 0.0;
        for (int j = 0; j < 64; ++j) {
            DDouble sn, cs;
            dd::sincos(dd::two_pi * DDouble(j / 64.0), sn, cs);
            const DDComplex off{DDouble(0.02) * cs, DDouble(0.02) * sn};
            const DDComplex f = transform_F(a, pole + off);
            scale = std::max(scale, mag(f));
            sum += off * f;
        }
        // a leftover simple pole would leave a mean of order |residue| > 1
        CHECK(mag(sum) / 64.0 < 1e-20);
        CHECK(scale < 1e3);
    }
    CHECK(s_family_shift(0.3).to_double() == 0.0);
    CHECK(s_family_shift(0.75).to_double() == doctest::Approx(-1.66189).epsilon(1e-5));
}

TEST_CASE("residue magnitude symmetry")
{
    for (std::size_t idx : {1, 2, 50, 400}) {
        const ZeroAnalytics z = analyze_zero(zeros().gamma(idx), true);
        for (double a : {0.0, 0.25, 0.1}) {
            const double f1 = res_F_at_gamma(a, z).magnitude;
            const double f2 = res_F_at_gamma(1.0 - a, z).magnitude;
            CHECK(std::abs(f1 - f2) <= 1e-12 * f1);
            const double g1 = res_G_at_gamma(a, z).magnitude;
            const double g2 = res_G_at_gamma(1.0 - a, z).magnitude;
            CHECK(std::abs(g1 - g2) <= 1e-12 * g1);
        }
    }
}

TEST_CASE("bad zero input")
{
    CHECK_THROWS_AS(analyze_zero(DDouble(14.0), false), std::invalid_argument);
    const ZeroAnalytics z = analyze_zero(zeros().gamma(1), false);
    CHECK_THROWS_AS(res_G_at_gamma(0.0, z), std::invalid_argument);
}
