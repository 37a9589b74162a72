#pragma once

#include "oscillax/residues.hpp"
#include "oscillax/zeros.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace oscillax {

enum class KernelKind { Fejer, JurkatPeyerimhoff };

struct Kernel {
    KernelKind kind = KernelKind::JurkatPeyerimhoff;
    double T = 1.0;
};

double kernel_value(const Kernel &kernel, double x);
KernelKind parse_kernel(const std::string &name); // "fejer" or "jp"
std::string kernel_name(KernelKind kind);

enum class BoundFamily { S, H };
BoundFamily parse_family(const std::string &name);     // "S" or "H"
std::string family_name(BoundFamily family);

/// Residue data for a prefix of the zero set, computed once per family and
/// reused for every alpha.
class ResidueTable {
public:
    ResidueTable() = default;
    /// Zeros with gamma <= max_gamma; OpenMP over zeros when workers > 1.
    static ResidueTable build(const ZeroSet &zeros, double max_gamma, BoundFamily family, int workers = 1);
    static ResidueTable build_serial(const ZeroSet &zeros, double max_gamma, BoundFamily family);

    BoundFamily family() const { return family_; }
    std::size_t size() const { return data_.size(); }
    const ZeroAnalytics &at(std::size_t index) const { return data_.at(index - 1); } // 1-based
    ResidueTerm residue(double alpha, std::size_t index) const;
    DDouble center_intercept(double alpha) const;
    DDouble center_slope(double alpha) const;

private:
    BoundFamily family_ = BoundFamily::S;
    std::vector<ZeroAnalytics> data_;
};

/// Gamma' as indices into the zero set (1-based) with per-zero N_gamma.
struct IndependenceAssumption {
    std::vector<std::size_t> indices;
    std::vector<long> n_gamma;
    double T = 0.0;

    static IndependenceAssumption uniform(std::vector<std::size_t> indices, long n, double T);
};

/// Reads indices (integers) or ordinates (decimals) one per line, with an
/// optional second column N_gamma; '#' comments. Ordinates must match a
/// loaded zero to 1e-6.
IndependenceAssumption load_assumption(const std::string &path, const ZeroSet &zeros, long default_n, double T);

struct BoundTerm {
    std::size_t index = 0;
    double gamma = 0.0;
    double residue = 0.0;      // |Res|
    double kernel = 0.0;       // k_T(gamma)
    double weight = 0.0;       // N / (N + 1)
    double contribution = 0.0; // 2 weight kernel |Res|
};

struct BoundReport {
    BoundFamily family = BoundFamily::S;
    double alpha = 0.0;
    CenterLine center;
    double amplitude = 0.0;
    double ingham_amplitude = 0.0;  // without the N/(N+1) factors
    double liminf_bound = 0.0;      // intercept - amplitude
    double limsup_bound = 0.0;      // intercept + amplitude
    Kernel kernel;
    std::vector<BoundTerm> terms;   // descending contribution
};

BoundReport anderson_stark_bounds(BoundFamily family, double alpha, const IndependenceAssumption &assumption,
                                  const Kernel &kernel, const ResidueTable &table);

/// Score used to rank zeros: the family's own residue, or the residue
/// zeta(2 rho) / (rho zeta'(rho)) of the Liouville sum L_0.
enum class GreedyRank { Own, Liouville };
GreedyRank parse_rank(const std::string &name); // "own" or "L"
std::string rank_name(GreedyRank rank);

/// |zeta(2 rho) / (rho zeta'(rho))|.
double liouville_residue_magnitude(const ZeroAnalytics &zero);

/// The `count` zeros with gamma <= T maximizing k_T(gamma)|Res|, descending,
/// ties to the smaller gamma; uniform N. Throws std::invalid_argument when
/// fewer than `count` zeros lie in (0, T].
IndependenceAssumption select_zeros_greedy(double alpha, BoundFamily family, const ResidueTable &table,
                                           const Kernel &kernel, std::size_t count, long n,
                                           GreedyRank rank = GreedyRank::Own);

struct TheoremTarget {
    double center = 0.0;
    double amplitude = 0.0;
    double lower = 0.0;   // liminf target
    double upper = 0.0;   // limsup target
    bool printed = false; // constants stated verbatim rather than recomputed from the general line
};

/// Constants the bounds are compared against (S-family), per alpha.
TheoremTarget theorem_targets(double alpha);
/// H-family: center 0 or h(alpha), amplitude 1.700144.
TheoremTarget h_family_target(double alpha);

/// Per-term CSV (gamma,abs_residue,kernel,contribution) then a summary block.
void write_bound_csv(const BoundReport &report, const std::string &path);
std::string bound_summary(const BoundReport &report);

} // namespace oscillax
