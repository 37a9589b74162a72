#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace oscillax {

/// What a table (or a sieve scratch cell) records for n.
///   ParityNMinusOmega    (n - Omega(n)) mod 2      2 bits
///   ParityOmegaDistinct  omega(n) mod 2            2 bits
///   OmegaValue           Omega(n)                  4 bits
enum class TableMode : std::uint16_t { ParityNMinusOmega = 1, ParityOmegaDistinct = 2, OmegaValue = 3 };

int bits_per_entry(TableMode mode);
std::string mode_name(TableMode mode);
TableMode parse_mode(const std::string &name);

namespace wheel30 {

inline constexpr std::uint8_t residues[8] = {1, 7, 11, 13, 17, 19, 23, 29};
/// Position of r in `residues`, or -1 when gcd(r, 30) > 1.
inline constexpr std::int8_t position[30] = {-1, 0,  -1, -1, -1, -1, -1, 1,  -1, -1, -1, 2,  -1, 3,  -1,
                                             -1, -1, 4,  -1, 5,  -1, -1, -1, 6,  -1, -1, -1, -1, -1, 7};

inline bool coprime(std::uint64_t n) { return position[n % 30] >= 0; }

/// Smallest k' >= k with gcd(k', 30) = 1.
inline std::uint64_t next_coprime(std::uint64_t k)
{
    while (!coprime(k)) {
        ++k;
    }
    return k;
}

} // namespace wheel30

/// Bit-packed store over the integers n <= M with gcd(n, 30) = 1, eight
/// residues per block of 30. Immutable once built; share it read-only.
class FactorTable {
public:
    static constexpr std::uint32_t magic = 0x5458534f; // "OSXT" little-endian
    static constexpr std::uint16_t format_version = 1;

    FactorTable() = default;
    FactorTable(std::uint64_t limit, TableMode mode);

    std::uint64_t limit() const { return limit_; }
    TableMode mode() const { return mode_; }
    std::uint64_t entry_count() const { return entries_; }
    std::size_t payload_bytes() const { return payload_.size(); }
    std::span<const std::uint8_t> payload() const { return payload_; }

    static std::uint64_t index_of(std::uint64_t n) { return (n / 30) * 8 + wheel30::position[n % 30]; }

    /// Decoded value for n <= limit() coprime to 30 (parity bit, or Omega).
    unsigned value(std::uint64_t n) const
    {
        const std::uint64_t i = index_of(n);
        if (bits_ == 2) {
            return ((payload_[i >> 2] >> ((i & 3) * 2)) & 3u) - 1u;
        }
        return (payload_[i >> 1] >> ((i & 1) * 4)) & 15u;
    }

    /// Raw stored cell. Parity modes: 0 unknown, 1 even, 2 odd. OmegaValue: Omega.
    unsigned raw(std::uint64_t index) const
    {
        if (bits_ == 2) {
            return (payload_[index >> 2] >> ((index & 3) * 2)) & 3u;
        }
        return (payload_[index >> 1] >> ((index & 1) * 4)) & 15u;
    }

    void store(std::uint64_t n, unsigned value);

    /// Hash of (format version, mode, limit).
    std::string fingerprint() const;

    void save(const std::filesystem::path &path) const;
    static FactorTable load(const std::filesystem::path &path);
    /// Reads only the header; throws on a malformed file.
    static std::pair<std::uint64_t, TableMode> peek(const std::filesystem::path &path);

    friend bool operator==(const FactorTable &, const FactorTable &) = default;

private:
    std::uint64_t limit_ = 0;
    TableMode mode_ = TableMode::ParityNMinusOmega;
    int bits_ = 2;
    std::uint64_t entries_ = 0;
    std::vector<std::uint8_t> payload_;
};

struct TableBuildOptions {
    /// Prefix [1, seed] computed by trial division before doubling starts.
    std::uint64_t seed_limit = 3000;
    /// Each round extends [1, y] to [1, growth*y]; cofactors stay inside the
    /// known prefix as long as growth <= 7.
    unsigned growth = 2;
    std::uint64_t memory_budget_bytes = std::uint64_t{4} << 30;
};

/// Bootstrapped construction: once [1, y] is known, [y+1, growth*y] is sieved
/// with primes up to sqrt(growth*y) and cofactors are read back from [1, y].
FactorTable build_base_table(std::uint64_t limit, TableMode mode, const TableBuildOptions &options = {});

} // namespace oscillax
