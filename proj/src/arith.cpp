#include "oscillax/arith.hpp"

#include "oscillax/primes.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace oscillax {

bool SumSpec::fractional() const
{
    switch (family) {
    case Family::PolyaL:
    case Family::OmegaH:
    case Family::SunS:
        return alpha != 0.0;
    default:
        return false;
    }
}

void SumSpec::validate() const
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("alpha must lie in [0, 1]");
    }
    switch (family) {
    case Family::GrosswaldW:
    case Family::TwistedS:
    case Family::DivCount:
        if (alpha != 0.0) {
            throw std::invalid_argument(family_name(family) + " takes no alpha");
        }
        break;
    default:
        break;
    }
    if (family == Family::TwistedS) {
        const std::int64_t r = ((param % 4) + 4) % 4;
        if (r != 0 && r != 1) {
            throw std::invalid_argument("twisted sum needs d = 0 or 1 (mod 4)");
        }
    }
    if (family == Family::DivCount && param < 2) {
        throw std::invalid_argument("divisibility count needs modulus m >= 2");
    }
}

std::string SumSpec::label() const
{
    char buf[64];
    switch (family) {
    case Family::GrosswaldW:
        return "W";
    case Family::TwistedS:
        std::snprintf(buf, sizeof buf, "Sd_%lld", static_cast<long long>(param));
        return buf;
    case Family::DivCount:
        std::snprintf(buf, sizeof buf, "div_%lld", static_cast<long long>(param));
        return buf;
    default:
        std::snprintf(buf, sizeof buf, "%s_%g", family_name(family).c_str(), alpha);
        return buf;
    }
}

std::string family_name(Family f)
{
    switch (f) {
    case Family::PolyaL:
        return "L";
    case Family::OmegaH:
        return "H";
    case Family::SunS:
        return "S";
    case Family::GrosswaldW:
        return "W";
    case Family::TwistedS:
        return "twisted";
    case Family::DivCount:
        return "div";
    }
    return "?";
}

Family parse_family(std::string_view name)
{
    if (name == "L") {
        return Family::PolyaL;
    }
    if (name == "H") {
        return Family::OmegaH;
    }
    if (name == "S") {
        return Family::SunS;
    }
    if (name == "W") {
        return Family::GrosswaldW;
    }
    if (name == "twisted") {
        return Family::TwistedS;
    }
    if (name == "div") {
        return Family::DivCount;
    }
    throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

SumSpec parse_spec(std::string_view family_text, double alpha)
{
    SumSpec spec;
    const auto colon = family_text.find(':');
    spec.family = parse_family(family_text.substr(0, colon));
    if (spec.family == Family::TwistedS || spec.family == Family::DivCount) {
        if (colon == std::string_view::npos) {
            throw std::invalid_argument("family '" + std::string(family_text) + "' needs a parameter, e.g. div:3");
        }
        spec.param = std::stoll(std::string(family_text.substr(colon + 1)));
        spec.alpha = 0.0;
    } else {
        spec.alpha = spec.family == Family::GrosswaldW ? 0.0 : alpha;
    }
    spec.validate();
    return spec;
}

int Factorization::big_omega() const
{
    int total = 0;
    for (const auto &[p, e] : prime_powers) {
        total += e;
    }
    return total;
}

int Factorization::small_omega() const { return static_cast<int>(prime_powers.size()); }

TrialDivider::TrialDivider(std::uint64_t limit)
    : limit_(limit), primes_(primes_up_to(isqrt(limit) + 1))
{
}

Factorization TrialDivider::factorize(std::uint64_t n) const
{
    if (n == 0) {
        throw std::invalid_argument("factorize: n must be positive");
    }
    if (n > limit_) {
        throw std::out_of_range("factorize: n beyond trial-division limit");
    }
    Factorization f;
    f.n = n;
    std::uint64_t m = n;
    for (const std::uint64_t p : primes_) {
        if (p * p > m) {
            break;
        }
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            f.prime_powers.emplace_back(p, e);
        }
    }
    if (m > 1) {
        f.prime_powers.emplace_back(m, 1);
    }
    return f;
}

Factorization factorize(std::uint64_t n)
{
    if (n == 0) {
        throw std::invalid_argument("factorize: n must be positive");
    }
    Factorization f;
    f.n = n;
    std::uint64_t m = n;
    auto strip = [&](std::uint64_t p) {
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            f.prime_powers.emplace_back(p, e);
        }
    };
    strip(2);
    strip(3);
    for (std::uint64_t p = 5; p * p <= m; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (m > 1) {
        f.prime_powers.emplace_back(m, 1);
    }
    return f;
}

int big_omega(std::uint64_t n) { return factorize(n).big_omega(); }

int small_omega(std::uint64_t n) { return factorize(n).small_omega(); }

int liouville(std::uint64_t n) { return (big_omega(n) & 1) ? -1 : 1; }

namespace {

int jacobi(std::uint64_t a, std::uint64_t n)
{
    // n odd and positive, 0 <= a < n
    int result = 1;
    while (a != 0) {
        const int tz = std::countr_zero(a);
        a >>= tz;
        if ((tz & 1) && (n % 8 == 3 || n % 8 == 5)) {
            result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) {
            result = -result;
        }
        a %= n;
    }
    return n == 1 ? result : 0;
}

} // namespace

int kronecker(std::int64_t d, std::uint64_t n)
{
    const std::int64_t r = ((d % 4) + 4) % 4;
    if (r != 0 && r != 1) {
        throw std::invalid_argument("kronecker: d must be 0 or 1 (mod 4)");
    }
    if (n == 0) {
        throw std::invalid_argument("kronecker: n must be positive");
    }
    int result = 1;
    const int v = std::countr_zero(n);
    n >>= v;
    if (v > 0) {
        if (d % 2 == 0) {
            return 0;
        }
        const std::int64_t d8 = ((d % 8) + 8) % 8;
        const int k2 = (d8 == 1 || d8 == 7) ? 1 : -1;
        if (v & 1) {
            result = k2;
        }
    }
    if (n == 1) {
        return result;
    }
    const __int128 mod = static_cast<__int128>(n);
    const auto a = static_cast<std::uint64_t>(((static_cast<__int128>(d) % mod) + mod) % mod);
    return result * jacobi(a, n);
}

ExactAccumulator &ExactAccumulator::operator+=(const ExactAccumulator &other)
{
    if (other.kind_ != kind_) {
        throw std::invalid_argument("cannot merge accumulators of different kinds");
    }
    pos_int_ += other.pos_int_;
    neg_int_ += other.neg_int_;
    pos_real_ += other.pos_real_;
    neg_real_ += other.neg_real_;
    return *this;
}

DDouble ExactAccumulator::positive_real() const
{
    if (kind_ == Kind::Integer) {
        return DDouble(static_cast<std::uint64_t>(pos_int_));
    }
    return pos_real_;
}

DDouble ExactAccumulator::negative_real() const
{
    if (kind_ == Kind::Integer) {
        return DDouble(static_cast<std::uint64_t>(neg_int_));
    }
    return neg_real_;
}

DDouble ExactAccumulator::real_value() const
{
    if (kind_ == Kind::Integer) {
        const __int128 v = integer_value();
        const auto hi = static_cast<double>(v);
        const auto lo = static_cast<double>(v - static_cast<__int128>(hi));
        return dd::quick_two_sum(hi, lo);
    }
    return pos_real_ - neg_real_;
}

std::string ExactAccumulator::positive_string() const
{
    return kind_ == Kind::Integer ? u128_to_string(pos_int_) : dd::to_exact_string(pos_real_);
}

std::string ExactAccumulator::negative_string() const
{
    return kind_ == Kind::Integer ? u128_to_string(neg_int_) : dd::to_exact_string(neg_real_);
}

std::string ExactAccumulator::value_string() const
{
    return kind_ == Kind::Integer ? i128_to_string(integer_value()) : dd::to_string(real_value(), 32);
}

ExactAccumulator ExactAccumulator::from_strings(Kind kind, const std::string &pos, const std::string &neg)
{
    ExactAccumulator acc(kind);
    if (kind == Kind::Integer) {
        acc.pos_int_ = parse_u128(pos);
        acc.neg_int_ = parse_u128(neg);
    } else {
        acc.pos_real_ = dd::from_exact_string(pos);
        acc.neg_real_ = dd::from_exact_string(neg);
    }
    return acc;
}

bool ExactAccumulator::operator==(const ExactAccumulator &other) const
{
    return kind_ == other.kind_ && pos_int_ == other.pos_int_ && neg_int_ == other.neg_int_ &&
           pos_real_ == other.pos_real_ && neg_real_ == other.neg_real_;
}

ExactAccumulator::Kind accumulator_kind(const SumSpec &spec)
{
    return spec.fractional() ? ExactAccumulator::Kind::Real : ExactAccumulator::Kind::Integer;
}

OracleTerm oracle_term(const SumSpec &spec, std::uint64_t n, const Factorization &f)
{
    const int big = f.big_omega();
    OracleTerm term;
    int sign = 1;
    switch (spec.family) {
    case Family::PolyaL:
        sign = (big & 1) ? -1 : 1;
        break;
    case Family::OmegaH:
        sign = (f.small_omega() & 1) ? -1 : 1;
        break;
    case Family::SunS:
    case Family::TwistedS:
        sign = ((n - static_cast<std::uint64_t>(big)) & 1) ? -1 : 1;
        break;
    case Family::GrosswaldW:
        term.integer = ((big & 1) ? -1 : 1) * (std::int64_t{1} << big);
        return term;
    case Family::DivCount: {
        const auto m = static_cast<std::uint64_t>(spec.param);
        term.integer = ((n - static_cast<std::uint64_t>(big)) % m == 0) ? 1 : 0;
        return term;
    }
    }
    if (spec.family == Family::TwistedS) {
        term.integer = sign * kronecker(spec.param, n);
        return term;
    }
    if (spec.fractional()) {
        const DDouble weight = dd::exp(-DDouble(spec.alpha) * dd::log(DDouble(n)));
        term.real = sign > 0 ? weight : -weight;
    } else {
        term.integer = sign;
    }
    return term;
}

ExactAccumulator oracle_sum(const SumSpec &spec, std::uint64_t x, const OracleOptions &options)
{
    spec.validate();
    if (x > options.limit) {
        throw std::out_of_range("oracle_sum: x exceeds the configured oracle limit");
    }
    ExactAccumulator acc(accumulator_kind(spec));
    if (x == 0) {
        return acc;
    }
    const TrialDivider divider(x);
    for (std::uint64_t n = 1; n <= x; ++n) {
        const OracleTerm t = oracle_term(spec, n, divider.factorize(n));
        if (spec.fractional()) {
            acc.add(t.real);
        } else {
            acc.add(t.integer);
        }
    }
    return acc;
}

} // namespace oscillax
