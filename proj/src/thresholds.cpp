#include "oscillax/sieve.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oscillax {

NormalizationRule NormalizationRule::scaling_only(const SumSpec &spec)
{
    NormalizationRule r;
    switch (spec.family) {
    case Family::GrosswaldW:
    case Family::DivCount:
        r.exponent = -1.0;
        break;
    default:
        r.exponent = spec.alpha - 0.5;
        break;
    }
    return r;
}

double NormalizationRule::apply(std::uint64_t x, double value) const
{
    const double xd = static_cast<double>(x);
    const double lx = std::log(xd);
    double scale = 1.0;
    if (exponent == -0.5) {
        scale = 1.0 / std::sqrt(xd);
    } else if (exponent == -1.0) {
        scale = 1.0 / xd;
    } else if (exponent == 0.5) {
        scale = std::sqrt(xd);
    } else if (exponent != 0.0) {
        scale = std::exp(exponent * lx);
    }
    return apply(lx, scale, value);
}

namespace {

std::int64_t parse_int(std::string_view s)
{
    std::int64_t v = 0;
    const char *b = s.data();
    const char *e = s.data() + s.size();
    if (b != e && *b == '+') {
        ++b;
    }
    const auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || b == e) {
        throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    }
    return v;
}

Rational reduced(std::int64_t num, std::int64_t den)
{
    if (den == 0) {
        throw std::invalid_argument("zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    return {num / (g ? g : 1), den / (g ? g : 1)};
}

} // namespace

Rational Rational::parse(std::string_view text)
{
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        return reduced(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        return {parse_int(text), 1};
    }
    const std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 15) {
        throw std::invalid_argument("too many decimals in '" + std::string(text) + "'");
    }
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) {
        den *= 10;
    }
    std::string digits(text.substr(0, dot));
    const bool negative = !digits.empty() && digits[0] == '-';
    if (digits.empty() || digits == "-" || digits == "+") {
        digits += "0";
    }
    std::int64_t whole = parse_int(digits);
    std::int64_t part = frac.empty() ? 0 : parse_int(frac);
    if (part < 0) {
        throw std::invalid_argument("bad decimal '" + std::string(text) + "'");
    }
    const std::int64_t mag = (whole < 0 ? -whole : whole) * den + part;
    return reduced(negative ? -mag : mag, den);
}

std::string Rational::str() const
{
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Threshold Threshold::parse(std::string_view text)
{
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const auto colon = text.find(':', pos);
        parts.emplace_back(text.substr(pos, colon == std::string_view::npos ? colon : colon - pos));
        if (colon == std::string_view::npos) {
            break;
        }
        pos = colon + 1;
    }
    if (parts.size() < 3 || parts.size() > 4) {
        throw std::invalid_argument("threshold must look like lower:root:1[:from=325]");
    }
    Threshold t;
    t.id = std::string(text);
    if (parts[0] == "lower") {
        t.side = Side::Lower;
    } else if (parts[0] == "upper") {
        t.side = Side::Upper;
    } else {
        throw std::invalid_argument("threshold side must be lower or upper");
    }
    if (parts[1] == "const") {
        t.shape = Shape::Constant;
    } else if (parts[1] == "root") {
        t.shape = Shape::RootScaled;
    } else if (parts[1] == "linear") {
        t.shape = Shape::Linear;
    } else {
        throw std::invalid_argument("threshold shape must be const, root or linear");
    }
    t.coefficient = Rational::parse(parts[2]);
    if (parts.size() == 4) {
        if (parts[3].rfind("from=", 0) != 0) {
            throw std::invalid_argument("threshold suffix must be from=<x>");
        }
        const std::int64_t from = parse_int(std::string_view(parts[3]).substr(5));
        if (from < 1) {
            throw std::invalid_argument("threshold start must be positive");
        }
        t.active_from = static_cast<std::uint64_t>(from);
    }
    return t;
}

std::string Threshold::describe() const
{
    std::string bound = coefficient.str();
    if (shape == Shape::RootScaled) {
        bound += "*x^(1/2-alpha)";
    } else if (shape == Shape::Linear) {
        bound += "*x";
    }
    return std::string(side == Side::Lower ? "value <= " : "value >= ") + bound + " for x >= " +
           std::to_string(active_from);
}

namespace {

using i128 = __int128;

// sign of (a - b) where b = p * sqrt(x); a exact
int compare_with_root(i128 a, std::int64_t p, std::uint64_t x, bool &exact)
{
    if (p == 0) {
        return a > 0 ? 1 : (a < 0 ? -1 : 0);
    }
    if (p > 0 && a <= 0) {
        return -1;
    }
    if (p < 0 && a >= 0) {
        return 1;
    }
    const i128 am = a < 0 ? -a : a;
    const i128 pm = p < 0 ? -static_cast<i128>(p) : static_cast<i128>(p);
    i128 lhs;
    i128 rhs;
    if (__builtin_mul_overflow(am, am, &lhs) || __builtin_mul_overflow(pm * pm, static_cast<i128>(x), &rhs)) {
        exact = false;
        const long double d = static_cast<long double>(a) - static_cast<long double>(p) * std::sqrt((long double)x);
        return d > 0 ? 1 : (d < 0 ? -1 : 0);
    }
    const int mag = lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
    return p > 0 ? mag : -mag;
}

int sign_of(i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

} // namespace

Verdict check_threshold(const Threshold &t, const SumSpec &spec, std::uint64_t x, const ExactAccumulator &value)
{
    Verdict verdict;
    const std::int64_t p = t.coefficient.num;
    const std::int64_t q = t.coefficient.den;
    int cmp = 0; // sign of value - bound(x)

    if (value.kind() == ExactAccumulator::Kind::Integer) {
        i128 lhs;
        if (__builtin_mul_overflow(value.integer_value(), static_cast<i128>(q), &lhs)) {
            throw std::overflow_error("threshold comparison overflow");
        }
        switch (t.shape) {
        case Threshold::Shape::Constant:
            cmp = sign_of(lhs - p);
            break;
        case Threshold::Shape::Linear:
            cmp = sign_of(lhs - static_cast<i128>(p) * static_cast<i128>(x));
            break;
        case Threshold::Shape::RootScaled:
            if (spec.alpha == 0.0) {
                cmp = compare_with_root(lhs, p, x, verdict.exact);
            } else {
                // only the weighted families carry alpha, and those are real-valued
                throw std::logic_error("integer sum with nonzero alpha");
            }
            break;
        }
    } else {
        const DDouble v = value.real_value();
        const DDouble c = DDouble(static_cast<double>(p)) / DDouble(static_cast<double>(q));
        DDouble bound = c;
        const DDouble xd(x);
        if (t.shape == Threshold::Shape::Linear) {
            bound = c * xd;
        } else if (t.shape == Threshold::Shape::RootScaled) {
            const double e = 0.5 - spec.alpha;
            if (e == 0.5) {
                bound = c * dd::sqrt(xd);
            } else if (e == -0.5) {
                bound = c / dd::sqrt(xd);
            } else if (e != 0.0) {
                bound = c * dd::exp(DDouble(e) * dd::log(xd));
            }
        }
        const DDouble diff = v - bound;
        // accumulated rounding of x double-double additions on the parts
        const double scale = value.positive_real().to_double() + value.negative_real().to_double();
        const double margin = 4e-32 * static_cast<double>(x) * scale + 1e-30 * std::abs(bound.to_double());
        if (std::abs(diff.to_double()) <= margin) {
            verdict.exact = false;
            verdict.violated = true;
            return verdict;
        }
        cmp = diff.hi() > 0 ? 1 : -1;
    }

    verdict.violated = t.side == Threshold::Side::Lower ? cmp <= 0 : cmp >= 0;
    return verdict;
}

void ThresholdTrace::append(const ThresholdTrace &later, std::size_t cap)
{
    violations += later.violations;
    inexact += later.inexact;
    if (later.violations > 0) {
        last = later.last;
    }
    truncated = truncated || later.truncated;
    for (const CrossingPoint &pt : later.points) {
        if (points.size() < cap) {
            points.push_back(pt);
        } else {
            truncated = true;
            break;
        }
    }
}

void Extremum::offer(std::uint64_t at, double v, bool is_max)
{
    if (!valid() || (is_max ? v > value : v < value)) {
        x = at;
        value = v;
        ties = 1;
    } else if (v == value) {
        ++ties;
    }
}

void Extremum::merge(const Extremum &later, bool is_max)
{
    if (!later.valid()) {
        return;
    }
    if (!valid() || (is_max ? later.value > value : later.value < value)) {
        *this = later;
    } else if (later.value == value) {
        ties += later.ties;
    }
}

} // namespace oscillax
