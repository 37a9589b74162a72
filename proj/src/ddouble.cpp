#include "oscillax/ddouble.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace oscillax {

DDouble::DDouble(std::int64_t x)
{
    hi_ = static_cast<double>(x);
    lo_ = static_cast<double>(static_cast<__int128>(x) - static_cast<__int128>(hi_));
}

DDouble::DDouble(std::uint64_t x)
{
    hi_ = static_cast<double>(x);
    lo_ = static_cast<double>(static_cast<__int128>(x) - static_cast<__int128>(hi_));
}

DDouble operator+(DDouble a, DDouble b)
{
    DDouble s = dd::two_sum(a.hi_, b.hi_);
    DDouble t = dd::two_sum(a.lo_, b.lo_);
    double e = s.lo() + t.hi();
    s = dd::quick_two_sum(s.hi(), e);
    e = s.lo() + t.lo();
    return dd::quick_two_sum(s.hi(), e);
}

DDouble operator+(DDouble a, double b)
{
    DDouble s = dd::two_sum(a.hi_, b);
    return dd::quick_two_sum(s.hi(), s.lo() + a.lo_);
}

DDouble operator*(DDouble a, DDouble b)
{
    DDouble p = dd::two_prod(a.hi_, b.hi_);
    const double e = p.lo() + (a.hi_ * b.lo_ + a.lo_ * b.hi_);
    return dd::quick_two_sum(p.hi(), e);
}

DDouble operator*(DDouble a, double b)
{
    DDouble p = dd::two_prod(a.hi_, b);
    return dd::quick_two_sum(p.hi(), p.lo() + a.lo_ * b);
}

DDouble operator/(DDouble a, DDouble b)
{
    const double q1 = a.hi_ / b.hi_;
    DDouble r = a - b * q1;
    const double q2 = r.hi() / b.hi_;
    r = r - b * q2;
    const double q3 = r.hi() / b.hi_;
    return dd::quick_two_sum(q1, q2) + q3;
}

DDComplex operator/(DDComplex a, DDComplex b)
{
    const DDouble den = dd::norm(b);
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

namespace dd {

const DDouble pi{3.141592653589793, 1.2246467991473532e-16};
const DDouble two_pi{6.283185307179586, 2.4492935982947064e-16};
const DDouble half_pi{1.5707963267948966, 6.123233995736766e-17};
const DDouble ln2{0.6931471805599453, 2.3190468138462996e-17};
const DDouble euler_gamma{0.5772156649015329, -4.942915152430645e-18};
const DDouble sqrt2{1.4142135623730951, -9.667293313452913e-17};

namespace {

const std::array<DDouble, 6> inv_fact = [] {
    std::array<DDouble, 6> t{};
    DDouble f = 2.0;
    for (int i = 0; i < 6; ++i) {
        f = f * static_cast<double>(i + 3);
        t[i] = DDouble(1.0) / f;
    }
    return t;
}();

DDouble mul_pwr2(DDouble a, double b) { return {a.hi() * b, a.lo() * b}; }

DDouble sin_taylor(DDouble t)
{
    if (t.hi() == 0.0) {
        return t;
    }
    const DDouble t2 = -sqr(t);
    DDouble sum = t;
    DDouble term = t;
    for (int i = 1; i < 40; ++i) {
        term = term * t2 / static_cast<double>((2 * i) * (2 * i + 1));
        sum += term;
        if (std::abs(term.hi()) <= eps * std::abs(sum.hi())) {
            break;
        }
    }
    return sum;
}

} // namespace

DDouble sqr(DDouble a)
{
    DDouble p = two_prod(a.hi(), a.hi());
    const double e = p.lo() + 2.0 * a.hi() * a.lo() + a.lo() * a.lo();
    return quick_two_sum(p.hi(), e);
}

DDouble sqrt(DDouble a)
{
    if (a.hi() == 0.0) {
        return 0.0;
    }
    if (a.hi() < 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double x = 1.0 / std::sqrt(a.hi());
    const double ax = a.hi() * x;
    return DDouble(ax) + (a - sqr(DDouble(ax))).hi() * (x * 0.5);
}

DDouble ldexp(DDouble a, int e) { return {std::ldexp(a.hi(), e), std::ldexp(a.lo(), e)}; }

DDouble floor(DDouble a)
{
    double hi = std::floor(a.hi());
    double lo = 0.0;
    if (hi == a.hi()) {
        lo = std::floor(a.lo());
        return quick_two_sum(hi, lo);
    }
    return {hi, lo};
}

DDouble round(DDouble a) { return floor(a + 0.5); }

DDouble abs(DDouble a) { return a.hi() < 0.0 ? -a : a; }

DDouble exp(DDouble a)
{
    constexpr double k = 512.0;
    constexpr double inv_k = 1.0 / k;
    if (a.hi() <= -709.0) {
        return 0.0;
    }
    if (a.hi() >= 709.0) {
        return std::numeric_limits<double>::infinity();
    }
    if (a.hi() == 0.0 && a.lo() == 0.0) {
        return 1.0;
    }
    const double m = std::floor(a.hi() / ln2.hi() + 0.5);
    const DDouble r = mul_pwr2(a - ln2 * m, inv_k);
    DDouble p = sqr(r);
    DDouble s = r + mul_pwr2(p, 0.5);
    p *= r;
    DDouble t = p * inv_fact[0];
    int i = 0;
    do {
        s += t;
        p *= r;
        ++i;
        t = p * inv_fact[i];
    } while (std::abs(t.hi()) > inv_k * eps && i < 5);
    s += t;
    for (int j = 0; j < 9; ++j) {
        s = mul_pwr2(s, 2.0) + sqr(s);
    }
    s += 1.0;
    return ldexp(s, static_cast<int>(m));
}

DDouble log(DDouble a)
{
    if (a.hi() <= 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (a.hi() == 1.0 && a.lo() == 0.0) {
        return 0.0;
    }
    DDouble x = std::log(a.hi());
    x = x + a * exp(-x) - 1.0;
    return x;
}

DDouble reduce_two_pi(DDouble x)
{
    if (std::abs(x.hi()) <= pi.hi()) {
        return x;
    }
    const DDouble z = round(x / two_pi);
    return x - two_pi * z;
}

void sincos(DDouble a, DDouble &s, DDouble &c)
{
    if (a.hi() == 0.0 && a.lo() == 0.0) {
        s = 0.0;
        c = 1.0;
        return;
    }
    const DDouble r = reduce_two_pi(a);
    const double q = std::floor(r.hi() / half_pi.hi() + 0.5);
    const DDouble t = r - half_pi * q;
    const int j = static_cast<int>(q);
    const DDouble st = sin_taylor(t);
    const DDouble ct = sqrt(DDouble(1.0) - sqr(st));
    switch (j) {
    case 0:
        s = st;
        c = ct;
        break;
    case 1:
        s = ct;
        c = -st;
        break;
    case -1:
        s = -ct;
        c = st;
        break;
    default: // +-2
        s = -st;
        c = -ct;
        break;
    }
}

DDouble sin(DDouble a)
{
    DDouble s, c;
    sincos(a, s, c);
    return s;
}

DDouble cos(DDouble a)
{
    DDouble s, c;
    sincos(a, s, c);
    return c;
}

DDouble atan2(DDouble y, DDouble x)
{
    if (x.hi() == 0.0 && x.lo() == 0.0) {
        if (y.hi() == 0.0) {
            return 0.0;
        }
        return y.hi() > 0.0 ? half_pi : -half_pi;
    }
    if (y.hi() == 0.0 && y.lo() == 0.0) {
        return x.hi() > 0.0 ? DDouble(0.0) : pi;
    }
    const DDouble r = sqrt(sqr(x) + sqr(y));
    const DDouble xx = x / r;
    const DDouble yy = y / r;
    DDouble z = std::atan2(y.hi(), x.hi());
    DDouble sz, cz;
    sincos(z, sz, cz);
    if (std::abs(xx.hi()) > std::abs(yy.hi())) {
        z += (yy - sz) / cz;
    } else {
        z -= (xx - cz) / sz;
    }
    return z;
}

DDouble pow(DDouble base, DDouble exponent) { return exp(exponent * log(base)); }

namespace {

DDouble pow10(int e)
{
    DDouble result = 1.0;
    DDouble b = 10.0;
    int n = e < 0 ? -e : e;
    while (n > 0) {
        if (n & 1) {
            result *= b;
        }
        b = sqr(b);
        n >>= 1;
    }
    return e < 0 ? DDouble(1.0) / result : result;
}

} // namespace

DDouble parse(std::string_view text)
{
    std::size_t i = 0;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) {
        ++i;
    }
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    DDouble mantissa = 0.0;
    int digits = 0;
    int frac_digits = 0;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch >= '0' && ch <= '9') {
            mantissa = mantissa * 10.0 + static_cast<double>(ch - '0');
            ++digits;
            if (seen_point) {
                ++frac_digits;
            }
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (digits == 0) {
        throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
    }
    int exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        const std::string rest(text.substr(i));
        char *end = nullptr;
        const long e = std::strtol(rest.c_str(), &end, 10);
        if (end == rest.c_str()) {
            throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
        }
        exponent = static_cast<int>(e);
        i += static_cast<std::size_t>(end - rest.c_str());
    }
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) {
        ++i;
    }
    if (i != text.size()) {
        throw std::invalid_argument("trailing characters in '" + std::string(text) + "'");
    }
    const int scale = exponent - frac_digits;
    DDouble value = scale >= 0 ? mantissa * pow10(scale) : mantissa / pow10(-scale);
    return negative ? -value : value;
}

std::string to_string(DDouble a, int digits)
{
    if (std::isnan(a.hi())) {
        return "nan";
    }
    if (std::isinf(a.hi())) {
        return a.hi() > 0 ? "inf" : "-inf";
    }
    if (a.hi() == 0.0) {
        return "0";
    }
    std::string out;
    if (a.hi() < 0.0) {
        out.push_back('-');
        a = -a;
    }
    int e = static_cast<int>(std::floor(std::log10(a.hi())));
    DDouble x = e >= 0 ? a / pow10(e) : a * pow10(-e);
    if (x.hi() >= 10.0) {
        x = x / 10.0;
        ++e;
    } else if (x.hi() < 1.0) {
        x = x * 10.0;
        --e;
    }
    std::string mant;
    for (int k = 0; k < digits + 1; ++k) {
        int d = static_cast<int>(std::floor(x.hi()));
        if (d < 0) {
            d = 0;
        }
        if (d > 9) {
            d = 9;
        }
        mant.push_back(static_cast<char>('0' + d));
        x = (x - static_cast<double>(d)) * 10.0;
    }
    // round on the guard digit
    if (mant.back() >= '5') {
        int k = digits - 1;
        while (k >= 0) {
            if (mant[k] == '9') {
                mant[k] = '0';
                --k;
            } else {
                ++mant[k];
                break;
            }
        }
        if (k < 0) {
            mant.insert(mant.begin(), '1');
            ++e;
        }
    }
    mant.resize(digits);
    out.push_back(mant[0]);
    out.push_back('.');
    out.append(mant, 1, std::string::npos);
    out += "e" + std::to_string(e);
    return out;
}

std::string to_exact_string(DDouble a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g:%.17g", a.hi(), a.lo());
    return buf;
}

DDouble from_exact_string(std::string_view text)
{
    const auto colon = text.find(':');
    const std::string hi(text.substr(0, colon));
    const std::string lo = colon == std::string_view::npos ? "0" : std::string(text.substr(colon + 1));
    char *end = nullptr;
    const double h = std::strtod(hi.c_str(), &end);
    if (end == hi.c_str() || *end != '\0') {
        throw std::invalid_argument("bad double-double text '" + std::string(text) + "'");
    }
    const double l = std::strtod(lo.c_str(), &end);
    if (end == lo.c_str() || *end != '\0') {
        throw std::invalid_argument("bad double-double text '" + std::string(text) + "'");
    }
    return {h, l};
}

DDouble norm(DDComplex z) { return sqr(z.re) + sqr(z.im); }

DDouble abs(DDComplex z) { return sqrt(norm(z)); }

DDouble arg(DDComplex z) { return atan2(z.im, z.re); }

DDComplex exp(DDComplex z)
{
    const DDouble m = exp(z.re);
    DDouble s, c;
    sincos(z.im, s, c);
    return {m * c, m * s};
}

DDComplex log(DDComplex z) { return {mul_pwr2(log(norm(z)), 0.5), atan2(z.im, z.re)}; }

DDComplex sqrt(DDComplex z)
{
    if (z.re.hi() == 0.0 && z.im.hi() == 0.0) {
        return {};
    }
    const DDouble t = sqrt(mul_pwr2(abs(z) + abs(z.re), 0.5));
    if (z.re.hi() >= 0.0) {
        return {t, z.im / mul_pwr2(t, 2.0)};
    }
    return {abs(z.im) / mul_pwr2(t, 2.0), z.im.hi() < 0.0 ? -t : t};
}

DDComplex sin(DDComplex z)
{
    DDouble s, c;
    sincos(z.re, s, c);
    const DDouble ep = exp(z.im);
    const DDouble em = DDouble(1.0) / ep;
    const DDouble ch = mul_pwr2(ep + em, 0.5);
    const DDouble sh = mul_pwr2(ep - em, 0.5);
    return {s * ch, c * sh};
}

DDComplex pow_from_log(DDouble log_base, DDComplex z) { return exp(z * log_base); }

} // namespace dd

} // namespace oscillax
