#include "doctest.h"

#include "oscillax/oscillation.hpp"
#include "oscillax/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

using namespace oscillax;

namespace {

const ZeroSet &zeros()
{
    static const ZeroSet set = load_zeros(std::string(OSCILLAX_DATA_DIR) + "/zeros5000.txt");
    return set;
}

const ResidueTable &s_table()
{
    static const ResidueTable t = ResidueTable::build(zeros(), 400.0, BoundFamily::S, 2);
    return t;
}

std::vector<std::size_t> prefix(std::size_t n)
{
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{1});
    return v;
}

} // namespace

TEST_CASE("kernel admissibility")
{
    std::vector<double> heights = {10.0, 100.0};
    if (zeros().size() >= 3701) {
        heights.push_back(zeros().gamma(3701).to_double());
    }
    REQUIRE(heights.size() == 3);
    for (KernelKind kind : {KernelKind::Fejer, KernelKind::JurkatPeyerimhoff}) {
        for (double T : heights) {
            const Kernel k{kind, T};
            CHECK(kernel_value(k, 0.0) == 1.0);
            bool ok = true;
            for (int i = 0; i <= 10000; ++i) {
                const double x = -1.2 * T + 2.4 * T * i / 10000.0;
                const double v = kernel_value(k, x);
                ok = ok && v == kernel_value(k, -x);
                ok = ok && (std::abs(x) <= T ? v >= 0.0 : v == 0.0);
            }
            CHECK(ok);
        }
    }
    CHECK(kernel_value({KernelKind::JurkatPeyerimhoff, 8.0}, 4.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-15));
    CHECK(kernel_value({KernelKind::Fejer, 8.0}, -4.0) == 0.5);
    CHECK(parse_kernel("jp") == KernelKind::JurkatPeyerimhoff);
    CHECK_THROWS_AS(parse_kernel("gauss"), std::invalid_argument);
}

TEST_CASE("single-term Fejer bound")
{
    const Kernel k{KernelKind::Fejer, 100.0};
    const auto a = IndependenceAssumption::uniform({1}, 1, 100.0);
    const BoundReport r = anderson_stark_bounds(BoundFamily::S, 0.0, a, k, s_table());
    const double g1 = zeros().gamma(1).to_double();
    const double want = 2.0 * 0.5 * (1.0 - g1 / 100.0) * res_F_at_gamma(0.0, zeros().gamma(1)).magnitude;
    CHECK(r.amplitude == doctest::Approx(want).epsilon(1e-14));
    REQUIRE(r.terms.size() == 1);
    CHECK(r.terms[0].weight == 0.5);
    CHECK(r.center.intercept.to_double() == doctest::Approx(1.6531).epsilon(1e-4));
}

TEST_CASE("bound structure")
{
    const Kernel k{KernelKind::JurkatPeyerimhoff, zeros().gamma(120).to_double()};
    const auto a = IndependenceAssumption::uniform(prefix(100), 50, k.T);
    for (double alpha : {0.0, 0.3, 0.5, 0.8}) {
        const BoundReport r = anderson_stark_bounds(BoundFamily::S, alpha, a, k, s_table());
        CAPTURE(alpha);
        CHECK((DDouble(r.limsup_bound) + DDouble(r.liminf_bound) - DDouble(2.0) * r.center.intercept)
                  .to_double() == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(r.limsup_bound - r.center.intercept.to_double() ==
              doctest::Approx(r.center.intercept.to_double() - r.liminf_bound));
        for (std::size_t i = 1; i < r.terms.size(); ++i) {
            CHECK(r.terms[i - 1].contribution >= r.terms[i].contribution);
        }
        // uniform N: Ingham amplitude is the amplitude without the N/(N+1) factor
        CHECK(r.ingham_amplitude == doctest::Approx(r.amplitude * 51.0 / 50.0).epsilon(1e-14));
    }
    // strictly increasing in N, below the Ingham limit
    double last = 0.0;
    for (long n : {1L, 2L, 10L, 100L, 3100L}) {
        const BoundReport r =
            anderson_stark_bounds(BoundFamily::S, 0.0, IndependenceAssumption::uniform(prefix(100), n, k.T), k, s_table());
        CHECK(r.amplitude > last);
        CHECK(r.amplitude < r.ingham_amplitude);
        last = r.amplitude;
    }
    // adding a term never lowers the amplitude
    const double a99 = anderson_stark_bounds(BoundFamily::S, 0.0, IndependenceAssumption::uniform(prefix(99), 50, k.T), k,
                                             s_table())
                           .amplitude;
    CHECK(anderson_stark_bounds(BoundFamily::S, 0.0, a, k, s_table()).amplitude >= a99);
}

TEST_CASE("amplitude symmetry and maximum at one half")
{
    const Kernel k{KernelKind::JurkatPeyerimhoff, zeros().gamma(150).to_double()};
    const auto a = IndependenceAssumption::uniform(prefix(140), 3100, k.T);
    std::vector<double> amp;
    for (int i = 0; i <= 10; ++i) {
        amp.push_back(anderson_stark_bounds(BoundFamily::S, i / 10.0, a, k, s_table()).amplitude);
    }
    CHECK(std::abs(amp[0] - amp[10]) <= 1e-12 * amp[0]);
    for (int i = 0; i <= 10; ++i) {
        CAPTURE(i);
        CHECK(std::abs(amp[i] - amp[10 - i]) <= 1e-12 * amp[i]);
        if (i != 5) {
            CHECK(amp[5] > amp[i]);
        }
    }
}

TEST_CASE("greedy selection")
{
    const Kernel k{KernelKind::JurkatPeyerimhoff, 100.0};
    // exhaustive oracle over the zeros below 100, residues from contour means
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t i = 1; i <= zeros().count_up_to(100.0); ++i) {
        const DDouble g = zeros().gamma(i);
        DDComplex sum(0.0);
        for (int j = 0; j < 48; ++j) {
            DDouble sn, cs;
            dd::sincos(dd::two_pi * DDouble(j / 48.0), sn, cs);
            const DDComplex off{DDouble(0.05) * cs, DDouble(0.05) * sn};
            sum += off * transform_F(0.0, DDComplex(DDouble(0.0), g) + off);
        }
        const double score = kernel_value(k, g.to_double()) * dd::abs(sum).to_double() / 48.0;
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    CHECK(zeros().count_up_to(100.0) == 29);
    CHECK(best == 1);
    const auto one = select_zeros_greedy(0.0, BoundFamily::S, s_table(), k, 1, 10);
    REQUIRE(one.indices.size() == 1);
    CHECK(one.indices[0] == best);

    const auto all = select_zeros_greedy(0.0, BoundFamily::S, s_table(), k, 29, 10);
    auto sorted = all.indices;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == prefix(29));

    const auto none = select_zeros_greedy(0.0, BoundFamily::S, s_table(), k, 0, 10);
    CHECK(none.indices.empty());
    CHECK(anderson_stark_bounds(BoundFamily::S, 0.0, none, k, s_table()).amplitude == 0.0);
    CHECK_THROWS_AS(select_zeros_greedy(0.0, BoundFamily::S, s_table(), k, 30, 10), std::invalid_argument);
}

TEST_CASE("ranking by the Liouville residue")
{
    const Kernel k{KernelKind::JurkatPeyerimhoff, 300.0};
    const std::size_t n = zeros().count_up_to(300.0);
    // zeta(2s) / (s zeta(s + 1/2)) shifted so the pole sits at i gamma; contour mean
    std::vector<double> score(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const DDouble g = zeros().gamma(i);
        DDComplex sum(0.0);
        for (int j = 0; j < 32; ++j) {
            DDouble sn, cs;
            dd::sincos(dd::two_pi * DDouble(j / 32.0), sn, cs);
            const DDComplex off{DDouble(0.01) * cs, DDouble(0.01) * sn};
            const DDComplex w = DDComplex(DDouble(0.5), g) + off;
            sum += off * zeta(w * DDouble(2.0)) / (w * zeta(w));
        }
        const double mag = dd::abs(sum).to_double() / 32.0;
        CHECK(std::abs(liouville_residue_magnitude(s_table().at(i)) - mag) <= 1e-10 * mag);
        score[i] = kernel_value(k, g.to_double()) * mag;
    }
    std::vector<std::size_t> want = prefix(n);
    std::stable_sort(want.begin(), want.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    want.resize(40);
    const auto got = select_zeros_greedy(0.0, BoundFamily::S, s_table(), k, 40, 10, GreedyRank::Liouville);
    CHECK(got.indices == want);
    // the Liouville ranking does not depend on alpha
    CHECK(select_zeros_greedy(0.3, BoundFamily::S, s_table(), k, 40, 10, GreedyRank::Liouville).indices == want);
    CHECK(parse_rank("L") == GreedyRank::Liouville);
    CHECK(parse_rank("own") == GreedyRank::Own);
    CHECK_THROWS_AS(parse_rank("x"), std::invalid_argument);
}

TEST_CASE("contract errors")
{
    const Kernel k{KernelKind::Fejer, 20.0};
    CHECK_THROWS_AS(anderson_stark_bounds(BoundFamily::S, 0.0, IndependenceAssumption::uniform({2}, 5, 20.0), k, s_table()),
                    std::invalid_argument);
    CHECK_THROWS_AS(anderson_stark_bounds(BoundFamily::H, 0.0, IndependenceAssumption::uniform({1}, 5, 20.0), k, s_table()),
                    std::invalid_argument);
}

TEST_CASE("serial and parallel tables agree")
{
    const ResidueTable par = ResidueTable::build(zeros(), 80.0, BoundFamily::H, 3);
    const ResidueTable ser = ResidueTable::build_serial(zeros(), 80.0, BoundFamily::H);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 1; i <= par.size(); ++i) {
        CHECK(par.residue(0.0, i).magnitude == ser.residue(0.0, i).magnitude);
    }
    CHECK(par.center_intercept(0.0).to_double() == 0.0);
    CHECK(par.center_intercept(0.75).to_double() == doctest::Approx(0.0793843).epsilon(1e-6));
}

TEST_CASE("ordinate perturbation sensitivity")
{
    const Kernel k{KernelKind::JurkatPeyerimhoff, zeros().gamma(60).to_double()};
    ZeroSet shifted = zeros().first(60);
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> sign(0, 1);
    for (DDouble &g : shifted.gammas) {
        g = g + DDouble(sign(rng) ? 1e-9 : -1e-9);
    }
    const ResidueTable t2 = ResidueTable::build_serial(shifted, 1e9, BoundFamily::S);
    const auto a = IndependenceAssumption::uniform(prefix(50), 3100, k.T);
    const double base = anderson_stark_bounds(BoundFamily::S, 0.0, a, k, s_table()).amplitude;
    const double moved = anderson_stark_bounds(BoundFamily::S, 0.0, a, k, t2).amplitude;
    CHECK(std::abs(base - moved) < 1e-6);
}

TEST_CASE("assumption files and csv")
{
    const std::string path = "oscillation_assumption.txt";
    {
        std::ofstream f(path);
        f << "# gamma prime\n1\n21.022039639 7\n3\n";
    }
    const auto a = load_assumption(path, zeros(), 100, 50.0);
    CHECK(a.indices == std::vector<std::size_t>{1, 2, 3});
    CHECK(a.n_gamma == std::vector<long>{100, 7, 100});
    {
        std::ofstream f(path);
        f << "21.5\n";
    }
    CHECK_THROWS_AS(load_assumption(path, zeros(), 100, 50.0), std::invalid_argument);
    std::remove(path.c_str());

    const BoundReport r = anderson_stark_bounds(BoundFamily::S, 0.0, a, {KernelKind::JurkatPeyerimhoff, 50.0}, s_table());
    const std::string csv = "oscillation_bound.csv";
    write_bound_csv(r, csv);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "gamma,abs_residue,kernel,contribution");
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all.find("conditional on the supplied independence assumption") != std::string::npos);
    std::remove(csv.c_str());
}

TEST_CASE("targets")
{
    CHECK(theorem_targets(0.0).upper == 3.32568);
    CHECK(theorem_targets(0.5).lower == -3.27438);
    CHECK(theorem_targets(0.5).amplitude == 1.67271899);
    CHECK(theorem_targets(0.75).lower == -4.97900);
    CHECK(theorem_targets(1.0).upper == 0.019349);
    // printed pairs straddle the computed center by the printed amplitude
    for (double alpha : {0.0, 0.25, 0.75, 1.0}) {
        const TheoremTarget t = theorem_targets(alpha);
        CHECK((t.lower + t.upper) / 2 == doctest::Approx(t.center).epsilon(1e-5));
    }
    const TheoremTarget g = theorem_targets(0.3);
    CHECK_FALSE(g.printed);
    CHECK(g.upper - g.lower == doctest::Approx(2 * 1.6725193));
    CHECK(h_family_target(0.0).center == 0.0);
    CHECK(h_family_target(0.0).amplitude == 1.700144);
}
