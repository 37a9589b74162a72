#pragma once

#include "oscillax/ddouble.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oscillax {

/// Which weighted sum over n <= x is meant.
///   PolyaL     (-1)^Omega(n) / n^a
///   OmegaH     (-1)^omega(n) / n^a
///   SunS       (-1)^(n - Omega(n)) / n^a
///   GrosswaldW (-2)^Omega(n)
///   TwistedS   (-1)^(n - Omega(n)) * (d/n)
///   DivCount   [m | n - Omega(n)]
enum class Family { PolyaL, OmegaH, SunS, GrosswaldW, TwistedS, DivCount };

struct SumSpec {
    Family family = Family::SunS;
    double alpha = 0.0;
    /// Discriminant d for TwistedS, modulus m for DivCount, unused otherwise.
    std::int64_t param = 0;

    static SumSpec polya_l(double alpha) { return {Family::PolyaL, alpha, 0}; }
    static SumSpec omega_h(double alpha) { return {Family::OmegaH, alpha, 0}; }
    static SumSpec sun_s(double alpha) { return {Family::SunS, alpha, 0}; }
    static SumSpec grosswald_w() { return {Family::GrosswaldW, 0.0, 0}; }
    static SumSpec twisted_s(std::int64_t d) { return {Family::TwistedS, 0.0, d}; }
    static SumSpec div_count(std::int64_t m) { return {Family::DivCount, 0.0, m}; }

    /// True when terms carry the 1/n^alpha weight with alpha > 0.
    bool fractional() const;
    /// Throws std::invalid_argument when the invariants fail.
    void validate() const;
    /// Short stable label, e.g. "S_0.25", "W", "Sd_-4", "div_3".
    std::string label() const;

    friend bool operator==(const SumSpec &, const SumSpec &) = default;
};

std::string family_name(Family f);
Family parse_family(std::string_view name);
/// Parses labels such as "S", "H", "L", "W", "twisted:-4", "div:3" together with alpha.
SumSpec parse_spec(std::string_view family_text, double alpha);

struct Factorization {
    std::uint64_t n = 1;
    std::vector<std::pair<std::uint64_t, int>> prime_powers;

    int big_omega() const;
    int small_omega() const;
};

/// Trial division against a prime list up to sqrt(limit).
class TrialDivider {
public:
    explicit TrialDivider(std::uint64_t limit);
    Factorization factorize(std::uint64_t n) const;
    std::uint64_t limit() const { return limit_; }

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> primes_;
};

Factorization factorize(std::uint64_t n);
int big_omega(std::uint64_t n);
int small_omega(std::uint64_t n);
int liouville(std::uint64_t n);
/// Kronecker symbol (d/n) for n >= 1; requires d = 0 or 1 (mod 4).
int kronecker(std::int64_t d, std::uint64_t n);

/// Positive and negative contributions kept apart. Integer kind stores
/// 128-bit magnitudes; real kind stores double-double magnitudes.
class ExactAccumulator {
public:
    enum class Kind { Integer, Real };

    explicit ExactAccumulator(Kind kind = Kind::Integer) : kind_(kind) {}

    Kind kind() const { return kind_; }

    void add(std::int64_t term)
    {
        if (term >= 0) {
            pos_int_ += static_cast<unsigned __int128>(term);
        } else {
            neg_int_ += static_cast<unsigned __int128>(-term);
        }
    }

    void add(DDouble term)
    {
        if (term.hi() >= 0.0) {
            pos_real_ += term;
        } else {
            neg_real_ -= term;
        }
    }

    ExactAccumulator &operator+=(const ExactAccumulator &other);
    friend ExactAccumulator operator+(ExactAccumulator a, const ExactAccumulator &b) { return a += b; }

    unsigned __int128 positive_int() const { return pos_int_; }
    unsigned __int128 negative_int() const { return neg_int_; }
    DDouble positive_real() const;
    DDouble negative_real() const;

    __int128 integer_value() const
    {
        return static_cast<__int128>(pos_int_) - static_cast<__int128>(neg_int_);
    }
    /// pos - neg as a double-double (integer kind converted).
    DDouble real_value() const;
    double to_double() const { return real_value().to_double(); }

    /// Exact text forms: decimal integers, or hi:lo round-trip pairs.
    std::string positive_string() const;
    std::string negative_string() const;
    std::string value_string() const;
    static ExactAccumulator from_strings(Kind kind, const std::string &pos, const std::string &neg);

    bool operator==(const ExactAccumulator &other) const;

private:
    Kind kind_;
    unsigned __int128 pos_int_ = 0;
    unsigned __int128 neg_int_ = 0;
    DDouble pos_real_;
    DDouble neg_real_;
};

ExactAccumulator::Kind accumulator_kind(const SumSpec &spec);

/// One summand, exactly: `integer` for integer-valued families, `real` otherwise.
struct OracleTerm {
    std::int64_t integer = 0;
    DDouble real;
};

OracleTerm oracle_term(const SumSpec &spec, std::uint64_t n, const Factorization &f);

struct OracleOptions {
    std::uint64_t limit = 20'000'000;
};

/// Literal summation with per-n trial division. Slow by construction; it is
/// the reference the sieve is checked against.
ExactAccumulator oracle_sum(const SumSpec &spec, std::uint64_t x, const OracleOptions &options = {});

} // namespace oscillax
