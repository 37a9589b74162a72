#include "oscillax/oscillation.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace oscillax {

double kernel_value(const Kernel &kernel, double x)
{
    const double ax = std::abs(x);
    if (ax > kernel.T) {
        return 0.0;
    }
    const double r = ax / kernel.T;
    if (kernel.kind == KernelKind::Fejer) {
        return 1.0 - r;
    }
    const double pi = 3.14159265358979323846;
    return (1.0 - r) * std::cos(pi * r) + std::sin(pi * r) / pi;
}

KernelKind parse_kernel(const std::string &name)
{
    if (name == "fejer") {
        return KernelKind::Fejer;
    }
    if (name == "jp") {
        return KernelKind::JurkatPeyerimhoff;
    }
    throw std::invalid_argument("unknown kernel '" + name + "' (expected fejer or jp)");
}

std::string kernel_name(KernelKind kind) { return kind == KernelKind::Fejer ? "fejer" : "jp"; }

BoundFamily parse_family(const std::string &name)
{
    if (name == "S" || name == "s") {
        return BoundFamily::S;
    }
    if (name == "H" || name == "h") {
        return BoundFamily::H;
    }
    throw std::invalid_argument("unknown bound family '" + name + "' (expected S or H)");
}

std::string family_name(BoundFamily family) { return family == BoundFamily::S ? "S" : "H"; }

ResidueTable ResidueTable::build(const ZeroSet &zeros, double max_gamma, BoundFamily family, int workers)
{
    if (workers <= 1) {
        return build_serial(zeros, max_gamma, family);
    }
    ResidueTable t;
    t.family_ = family;
    const std::size_t n = zeros.count_up_to(max_gamma);
    t.data_.resize(n);
    std::vector<std::string> errors(n);
    const bool with_h = family == BoundFamily::H;
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        try {
            t.data_[i] = analyze_zero(zeros.gammas[i], with_h);
        } catch (const std::exception &e) {
            errors[i] = e.what();
        }
    }
    for (const std::string &e : errors) {
        if (!e.empty()) {
            throw std::invalid_argument(e);
        }
    }
    return t;
}

ResidueTable ResidueTable::build_serial(const ZeroSet &zeros, double max_gamma, BoundFamily family)
{
    ResidueTable t;
    t.family_ = family;
    const std::size_t n = zeros.count_up_to(max_gamma);
    t.data_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        t.data_.push_back(analyze_zero(zeros.gammas[i], family == BoundFamily::H));
    }
    return t;
}

ResidueTerm ResidueTable::residue(double alpha, std::size_t index) const
{
    const ZeroAnalytics &z = at(index);
    return family_ == BoundFamily::S ? res_F_at_gamma(alpha, z) : res_G_at_gamma(alpha, z);
}

DDouble ResidueTable::center_intercept(double alpha) const
{
    return family_ == BoundFamily::S ? res_F_at_zero(alpha).intercept : res_G_at_zero(alpha);
}

DDouble ResidueTable::center_slope(double alpha) const
{
    return family_ == BoundFamily::S ? res_F_at_zero(alpha).slope : DDouble(0.0);
}

IndependenceAssumption IndependenceAssumption::uniform(std::vector<std::size_t> indices, long n, double T)
{
    IndependenceAssumption a;
    a.n_gamma.assign(indices.size(), n);
    a.indices = std::move(indices);
    a.T = T;
    return a;
}

IndependenceAssumption load_assumption(const std::string &path, const ZeroSet &zeros, long default_n, double T)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open assumption file " + path);
    }
    IndependenceAssumption a;
    a.T = T;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) {
            continue;
        }
        long n = default_n;
        std::string second;
        if (fields >> second) {
            n = std::stol(second);
        }
        const std::string where = path + ":" + std::to_string(line_no) + ": ";
        std::size_t index = 0;
        if (first.find_first_of(".eE") == std::string::npos) {
            index = std::stoul(first);
            if (index == 0 || index > zeros.size()) {
                throw std::invalid_argument(where + "zero index out of range");
            }
        } else {
            const DDouble g = dd::parse(first);
            const auto it = std::lower_bound(zeros.gammas.begin(), zeros.gammas.end(), g - DDouble(1e-6));
            if (it == zeros.gammas.end() || dd::abs(*it - g).to_double() > 1e-6) {
                throw std::invalid_argument(where + "ordinate " + first + " matches no loaded zero");
            }
            index = static_cast<std::size_t>(it - zeros.gammas.begin()) + 1;
        }
        if (n < 1) {
            throw std::invalid_argument(where + "N_gamma must be positive");
        }
        a.indices.push_back(index);
        a.n_gamma.push_back(n);
    }
    return a;
}

BoundReport anderson_stark_bounds(BoundFamily family, double alpha, const IndependenceAssumption &assumption,
                                  const Kernel &kernel, const ResidueTable &table)
{
    if (table.family() != family) {
        throw std::invalid_argument("residue table belongs to the other family");
    }
    if (assumption.n_gamma.size() != assumption.indices.size()) {
        throw std::invalid_argument("one N_gamma per zero is required");
    }
    BoundReport r;
    r.family = family;
    r.alpha = alpha;
    r.kernel = kernel;
    r.center.slope = table.center_slope(alpha);
    r.center.intercept = table.center_intercept(alpha);
    for (std::size_t i = 0; i < assumption.indices.size(); ++i) {
        const std::size_t idx = assumption.indices[i];
        if (idx == 0 || idx > table.size()) {
            throw std::invalid_argument("zero " + std::to_string(idx) + " has no residue data");
        }
        const ResidueTerm res = table.residue(alpha, idx);
        const double g = res.gamma.to_double();
        if (g > assumption.T) {
            throw std::invalid_argument("gamma_" + std::to_string(idx) + " exceeds T");
        }
        BoundTerm t;
        t.index = idx;
        t.gamma = g;
        t.residue = res.magnitude;
        t.kernel = kernel_value(kernel, g);
        const auto n = static_cast<double>(assumption.n_gamma[i]);
        t.weight = n / (n + 1.0);
        t.contribution = 2.0 * t.weight * t.kernel * t.residue;
        r.terms.push_back(t);
    }
    std::stable_sort(r.terms.begin(), r.terms.end(), [](const BoundTerm &a, const BoundTerm &b) {
        return a.contribution > b.contribution || (a.contribution == b.contribution && a.gamma < b.gamma);
    });
    DDouble amp(0.0);
    DDouble ingham(0.0);
    for (const BoundTerm &t : r.terms) {
        amp += DDouble(t.contribution);
        ingham += DDouble(2.0 * t.kernel) * DDouble(t.residue);
    }
    r.amplitude = amp.to_double();
    r.ingham_amplitude = ingham.to_double();
    r.liminf_bound = (r.center.intercept - amp).to_double();
    r.limsup_bound = (r.center.intercept + amp).to_double();
    return r;
}

GreedyRank parse_rank(const std::string &name)
{
    if (name == "own") {
        return GreedyRank::Own;
    }
    if (name == "L" || name == "l") {
        return GreedyRank::Liouville;
    }
    throw std::invalid_argument("unknown ranking '" + name + "' (own or L)");
}

std::string rank_name(GreedyRank rank) { return rank == GreedyRank::Own ? "own" : "L"; }

double liouville_residue_magnitude(const ZeroAnalytics &zero)
{
    return dd::abs(zero.zeta_2rho / (zero.rho * zero.zeta_prime_rho)).to_double();
}

IndependenceAssumption select_zeros_greedy(double alpha, BoundFamily family, const ResidueTable &table,
                                           const Kernel &kernel, std::size_t count, long n, GreedyRank rank)
{
    if (table.family() != family) {
        throw std::invalid_argument("residue table belongs to the other family");
    }
    std::vector<std::size_t> candidates;
    std::vector<double> score;
    for (std::size_t i = 1; i <= table.size(); ++i) {
        const double g = table.at(i).gamma.to_double();
        if (g > kernel.T) {
            break;
        }
        candidates.push_back(i);
    }
    if (candidates.size() < count) {
        throw std::invalid_argument("only " + std::to_string(candidates.size()) + " zeros lie below T, " +
                                    std::to_string(count) + " requested");
    }
    score.resize(table.size() + 1, 0.0);
    for (const std::size_t i : candidates) {
        const double mag = rank == GreedyRank::Own ? table.residue(alpha, i).magnitude
                                                   : liouville_residue_magnitude(table.at(i));
        score[i] = kernel_value(kernel, table.at(i).gamma.to_double()) * mag;
    }
    // ascending index means ascending gamma, so stability gives the tie rule
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    candidates.resize(count);
    return IndependenceAssumption::uniform(std::move(candidates), n, kernel.T);
}

TheoremTarget theorem_targets(double alpha)
{
    TheoremTarget t;
    t.center = res_F_at_zero(alpha).intercept.to_double();
    struct Printed {
        double alpha, lower, upper, amplitude;
    };
    static const Printed printed[] = {
        {0.0, -0.019349, 3.32568, 1.6725193},   {0.25, 1.63369, 4.97900, 1.6726690},
        {0.5, -3.27438, 0.071048, 1.67271899},  {0.75, -4.97900, -1.63369, 1.6726690},
        {1.0, -3.32568, 0.019349, 1.6725193},
    };
    for (const Printed &p : printed) {
        if (p.alpha == alpha) {
            t.lower = p.lower;
            t.upper = p.upper;
            t.amplitude = p.amplitude;
            t.printed = true;
            return t;
        }
    }
    t.amplitude = 1.6725193;
    t.lower = t.center - t.amplitude;
    t.upper = t.center + t.amplitude;
    return t;
}

TheoremTarget h_family_target(double alpha)
{
    TheoremTarget t;
    t.center = res_G_at_zero(alpha).to_double();
    t.amplitude = 1.700144;
    t.lower = t.center - t.amplitude;
    t.upper = t.center + t.amplitude;
    t.printed = alpha == 0.0;
    return t;
}

std::string bound_summary(const BoundReport &r)
{
    char buf[1024];
    std::snprintf(buf, sizeof buf,
                  "family,%s\nalpha,%.17g\nkernel,%s\nT,%.17g\nzeros,%zu\ncenter_slope,%.17g\n"
                  "center_intercept,%.17g\namplitude,%.17g\ningham_amplitude,%.17g\nliminf_bound,%.17g\n"
                  "limsup_bound,%.17g\nnote,conditional on the supplied independence assumption\n",
                  family_name(r.family).c_str(), r.alpha, kernel_name(r.kernel.kind).c_str(), r.kernel.T,
                  r.terms.size(), r.center.slope.to_double(), r.center.intercept.to_double(), r.amplitude,
                  r.ingham_amplitude, r.liminf_bound, r.limsup_bound);
    return buf;
}

void write_bound_csv(const BoundReport &r, const std::string &path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "gamma,abs_residue,kernel,contribution\n";
    char buf[256];
    for (const BoundTerm &t : r.terms) {
        std::snprintf(buf, sizeof buf, "%.12f,%.17g,%.17g,%.17g\n", t.gamma, t.residue, t.kernel, t.contribution);
        out << buf;
    }
    out << "\n" << bound_summary(r);
}

} // namespace oscillax
