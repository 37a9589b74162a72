#include "oscillax/primes.hpp"

#include <cmath>
#include <stdexcept>

namespace oscillax {

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit)
{
    std::vector<std::uint32_t> primes;
    if (limit < 2) {
        return primes;
    }
    if (limit > 0xFFFFFFFFull) {
        throw std::invalid_argument("primes_up_to: limit exceeds 32-bit range");
    }
    // odd-only sieve
    const std::uint64_t half = (limit - 1) / 2;
    std::vector<bool> composite(half + 1, false);
    primes.push_back(2);
    for (std::uint64_t i = 1; i <= half; ++i) {
        if (composite[i]) {
            continue;
        }
        const std::uint64_t p = 2 * i + 1;
        primes.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p) {
            composite[j] = true;
        }
    }
    return primes;
}

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > n) {
        --r;
    }
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r;
}

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1;
    b %= m;
    while (e > 0) {
        if (e & 1) {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_u64(std::uint64_t n)
{
    if (n < 2) {
        return false;
    }
    static constexpr std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (const auto p : small) {
        if (n % p == 0) {
            return n == p;
        }
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (const auto a : small) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) {
            continue;
        }
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) {
            return false;
        }
    }
    return true;
}

std::string u128_to_string(unsigned __int128 v)
{
    if (v == 0) {
        return "0";
    }
    std::string s;
    while (v > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return s;
}

std::string i128_to_string(__int128 v)
{
    if (v < 0) {
        return "-" + u128_to_string(static_cast<unsigned __int128>(-(v + 1)) + 1);
    }
    return u128_to_string(static_cast<unsigned __int128>(v));
}

unsigned __int128 parse_u128(const std::string &text)
{
    if (text.empty()) {
        throw std::invalid_argument("empty integer text");
    }
    unsigned __int128 v = 0;
    for (const char ch : text) {
        if (ch < '0' || ch > '9') {
            throw std::invalid_argument("bad integer text '" + text + "'");
        }
        v = v * 10 + static_cast<unsigned>(ch - '0');
    }
    return v;
}

__int128 parse_i128(const std::string &text)
{
    if (!text.empty() && text[0] == '-') {
        return -static_cast<__int128>(parse_u128(text.substr(1)));
    }
    return static_cast<__int128>(parse_u128(text));
}

} // namespace oscillax
