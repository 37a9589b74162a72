#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oscillax {

/// All primes p <= limit, ascending (plain sieve of Eratosthenes).
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

/// Deterministic Miller-Rabin, valid for every 64-bit input.
bool is_prime_u64(std::uint64_t n);

/// floor(sqrt(n)) without floating-point rounding surprises.
std::uint64_t isqrt(std::uint64_t n);

std::string u128_to_string(unsigned __int128 v);
std::string i128_to_string(__int128 v);
unsigned __int128 parse_u128(const std::string &text);
__int128 parse_i128(const std::string &text);

} // namespace oscillax
