#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace oscillax {

/// Double-double real: the unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
/// Roughly 31-32 significant decimal digits; arithmetic follows the QD
/// library algorithms (Hida, Li, Bailey).
class DDouble {
public:
    constexpr DDouble() = default;
    constexpr DDouble(double x) : hi_(x), lo_(0.0) {}
    constexpr DDouble(double hi, double lo) : hi_(hi), lo_(lo) {}
    DDouble(int x) : hi_(static_cast<double>(x)), lo_(0.0) {}
    DDouble(std::int64_t x);
    DDouble(std::uint64_t x);

    constexpr double hi() const { return hi_; }
    constexpr double lo() const { return lo_; }
    explicit operator double() const { return hi_ + lo_; }
    double to_double() const { return hi_ + lo_; }

    friend DDouble operator-(DDouble a) { return {-a.hi_, -a.lo_}; }

    friend DDouble operator+(DDouble a, DDouble b);
    friend DDouble operator+(DDouble a, double b);
    friend DDouble operator+(double a, DDouble b) { return b + a; }
    friend DDouble operator-(DDouble a, DDouble b) { return a + (-b); }
    friend DDouble operator-(DDouble a, double b) { return a + (-b); }
    friend DDouble operator-(double a, DDouble b) { return (-b) + a; }
    friend DDouble operator*(DDouble a, DDouble b);
    friend DDouble operator*(DDouble a, double b);
    friend DDouble operator*(double a, DDouble b) { return b * a; }
    friend DDouble operator/(DDouble a, DDouble b);
    friend DDouble operator/(DDouble a, double b) { return a / DDouble(b); }
    friend DDouble operator/(double a, DDouble b) { return DDouble(a) / b; }

    DDouble &operator+=(DDouble b) { return *this = *this + b; }
    DDouble &operator-=(DDouble b) { return *this = *this - b; }
    DDouble &operator*=(DDouble b) { return *this = *this * b; }
    DDouble &operator/=(DDouble b) { return *this = *this / b; }

    friend bool operator==(DDouble a, DDouble b) { return a.hi_ == b.hi_ && a.lo_ == b.lo_; }
    friend bool operator<(DDouble a, DDouble b) { return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_); }
    friend bool operator>(DDouble a, DDouble b) { return b < a; }
    friend bool operator<=(DDouble a, DDouble b) { return !(b < a); }
    friend bool operator>=(DDouble a, DDouble b) { return !(a < b); }

private:
    double hi_ = 0.0;
    double lo_ = 0.0;
};

namespace dd {

inline DDouble two_sum(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DDouble quick_two_sum(double a, double b)
{
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DDouble two_prod(double a, double b)
{
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

DDouble sqr(DDouble a);
DDouble sqrt(DDouble a);
DDouble exp(DDouble a);
DDouble log(DDouble a);
DDouble sin(DDouble a);
DDouble cos(DDouble a);
void sincos(DDouble a, DDouble &s, DDouble &c);
DDouble atan2(DDouble y, DDouble x);
DDouble pow(DDouble base, DDouble exponent);
DDouble ldexp(DDouble a, int e);
DDouble floor(DDouble a);
DDouble round(DDouble a);
DDouble abs(DDouble a);

/// Reduces x modulo 2*pi into [-pi, pi].
DDouble reduce_two_pi(DDouble x);

/// Parses a decimal literal (optional sign, fraction and exponent).
/// Throws std::invalid_argument on malformed text.
DDouble parse(std::string_view text);

/// Decimal rendering with `digits` significant digits.
std::string to_string(DDouble a, int digits = 32);

/// hi and lo as shortest round-trip decimal, joined by ':'. Exact to restore.
std::string to_exact_string(DDouble a);
DDouble from_exact_string(std::string_view text);

// Constants
extern const DDouble pi;
extern const DDouble two_pi;
extern const DDouble half_pi;
extern const DDouble ln2;
extern const DDouble euler_gamma;
extern const DDouble sqrt2;

/// Unit roundoff of the format.
inline constexpr double eps = 4.93038065763132e-32;

} // namespace dd

/// Complex number over DDouble.
struct DDComplex {
    DDouble re;
    DDouble im;

    constexpr DDComplex() = default;
    constexpr DDComplex(DDouble r) : re(r), im(0.0) {}
    constexpr DDComplex(double r) : re(r), im(0.0) {}
    constexpr DDComplex(DDouble r, DDouble i) : re(r), im(i) {}

    friend DDComplex operator+(DDComplex a, DDComplex b) { return {a.re + b.re, a.im + b.im}; }
    friend DDComplex operator-(DDComplex a, DDComplex b) { return {a.re - b.re, a.im - b.im}; }
    friend DDComplex operator-(DDComplex a) { return {-a.re, -a.im}; }
    friend DDComplex operator*(DDComplex a, DDComplex b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend DDComplex operator*(DDComplex a, DDouble b) { return {a.re * b, a.im * b}; }
    friend DDComplex operator*(DDouble a, DDComplex b) { return b * a; }
    friend DDComplex operator/(DDComplex a, DDComplex b);
    friend DDComplex operator/(DDComplex a, DDouble b) { return {a.re / b, a.im / b}; }

    DDComplex &operator+=(DDComplex b) { return *this = *this + b; }
    DDComplex &operator-=(DDComplex b) { return *this = *this - b; }
    DDComplex &operator*=(DDComplex b) { return *this = *this * b; }
    DDComplex &operator/=(DDComplex b) { return *this = *this / b; }
};

namespace dd {

inline DDComplex conj(DDComplex z) { return {z.re, -z.im}; }
DDouble norm(DDComplex z);
DDouble abs(DDComplex z);
DDouble arg(DDComplex z);
DDComplex exp(DDComplex z);
DDComplex log(DDComplex z);
DDComplex sqrt(DDComplex z);
DDComplex sin(DDComplex z);
/// base^z for a positive real base given through its logarithm.
DDComplex pow_from_log(DDouble log_base, DDComplex z);

} // namespace dd

} // namespace oscillax
