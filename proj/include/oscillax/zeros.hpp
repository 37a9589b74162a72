#pragma once

#include "oscillax/ddouble.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace oscillax {

/// Ordinates of nontrivial zeros on the critical line, ascending.
struct ZeroSet {
    std::vector<DDouble> gammas;
    int stated_digits = 0;   // fewest fractional digits over all lines
    std::string source;

    std::size_t size() const { return gammas.size(); }
    bool empty() const { return gammas.empty(); }
    DDouble gamma(std::size_t index) const { return gammas.at(index - 1); } // 1-based
    std::size_t count_up_to(double t) const;
    ZeroSet truncated(double t) const;
    ZeroSet first(std::size_t count) const;
};

inline constexpr int kMinZeroDigits = 9;

/// One ordinate per line (an optional leading index column is ignored);
/// '#' starts a comment. Throws std::runtime_error on unreadable files,
/// malformed or non-increasing entries, or fewer than 9 fractional digits.
ZeroSet load_zeros(const std::string &path);
ZeroSet parse_zeros(const std::string &text, const std::string &source = "<memory>");

struct ZeroCheck {
    double max_abs_zeta = 0.0;
    std::size_t worst_index = 0;  // 1-based
};

/// Largest |zeta(1/2 + i gamma)| over the first `count` ordinates (all when 0).
ZeroCheck validate_zeros(const ZeroSet &zeros, std::size_t count = 0);

} // namespace oscillax
