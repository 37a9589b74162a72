#include "oscillax/factor_table.hpp"

#include "oscillax/arith.hpp"
#include "oscillax/primes.hpp"
#include "sieve_kernel.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace oscillax {

int bits_per_entry(TableMode mode) { return mode == TableMode::OmegaValue ? 4 : 2; }

std::string mode_name(TableMode mode)
{
    switch (mode) {
    case TableMode::ParityNMinusOmega:
        return "parity-n-minus-omega";
    case TableMode::ParityOmegaDistinct:
        return "parity-omega-distinct";
    case TableMode::OmegaValue:
        return "omega-value";
    }
    return "?";
}

TableMode parse_mode(const std::string &name)
{
    for (const TableMode m : {TableMode::ParityNMinusOmega, TableMode::ParityOmegaDistinct, TableMode::OmegaValue}) {
        if (mode_name(m) == name) {
            return m;
        }
    }
    throw std::invalid_argument("unknown table mode '" + name + "'");
}

FactorTable::FactorTable(std::uint64_t limit, TableMode mode)
    : limit_(limit), mode_(mode), bits_(bits_per_entry(mode)), entries_(8 * ((limit + 29) / 30))
{
    payload_.assign(static_cast<std::size_t>((entries_ * bits_ + 7) / 8), 0);
}

void FactorTable::store(std::uint64_t n, unsigned value)
{
    const std::uint64_t i = index_of(n);
    if (bits_ == 2) {
        if (value > 1) {
            throw std::invalid_argument("parity entry must be 0 or 1");
        }
        auto &cell = payload_[i >> 2];
        const unsigned shift = (i & 3) * 2;
        cell = static_cast<std::uint8_t>((cell & ~(3u << shift)) | ((value + 1) << shift));
    } else {
        if (value > 15) {
            throw std::overflow_error("Omega entry does not fit in four bits");
        }
        auto &cell = payload_[i >> 1];
        const unsigned shift = (i & 1) * 4;
        cell = static_cast<std::uint8_t>((cell & ~(15u << shift)) | (value << shift));
    }
}

std::string FactorTable::fingerprint() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(magic, 4);
    mix(format_version, 2);
    mix(static_cast<std::uint16_t>(mode_), 2);
    mix(limit_, 8);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

void put_le(std::array<unsigned char, 16> &hdr, std::size_t at, std::uint64_t v, int bytes)
{
    for (int i = 0; i < bytes; ++i) {
        hdr[at + i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    }
}

std::uint64_t get_le(const std::array<unsigned char, 16> &hdr, std::size_t at, int bytes)
{
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        v |= static_cast<std::uint64_t>(hdr[at + i]) << (8 * i);
    }
    return v;
}

// header layout: magic u32 | version u16 | M u64 | mode u16
std::pair<std::uint64_t, TableMode> read_header(std::istream &in)
{
    std::array<unsigned char, 16> hdr{};
    if (!in.read(reinterpret_cast<char *>(hdr.data()), hdr.size())) {
        throw std::runtime_error("table file: truncated header");
    }
    if (get_le(hdr, 0, 4) != FactorTable::magic) {
        throw std::runtime_error("table file: bad magic");
    }
    if (get_le(hdr, 4, 2) != FactorTable::format_version) {
        throw std::runtime_error("table file: unsupported version");
    }
    const std::uint64_t limit = get_le(hdr, 6, 8);
    const auto mode = static_cast<std::uint16_t>(get_le(hdr, 14, 2));
    if (mode < 1 || mode > 3) {
        throw std::runtime_error("table file: bad mode");
    }
    return {limit, static_cast<TableMode>(mode)};
}

} // namespace

void FactorTable::save(const std::filesystem::path &path) const
{
    std::array<unsigned char, 16> hdr{};
    put_le(hdr, 0, magic, 4);
    put_le(hdr, 4, format_version, 2);
    put_le(hdr, 6, limit_, 8);
    put_le(hdr, 14, static_cast<std::uint16_t>(mode_), 2);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out.write(reinterpret_cast<const char *>(hdr.data()), hdr.size());
        out.write(reinterpret_cast<const char *>(payload_.data()), static_cast<std::streamsize>(payload_.size()));
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::pair<std::uint64_t, TableMode> FactorTable::peek(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_header(in);
}

FactorTable FactorTable::load(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    const auto [limit, mode] = read_header(in);
    FactorTable t(limit, mode);
    if (!in.read(reinterpret_cast<char *>(t.payload_.data()), static_cast<std::streamsize>(t.payload_.size()))) {
        throw std::runtime_error("table file: truncated payload");
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw std::runtime_error("table file: trailing bytes");
    }
    return t;
}

namespace {

template <int Bits>
void extend(FactorTable &table, std::uint64_t known, std::uint64_t upto, const std::vector<std::uint32_t> &primes,
            std::uint64_t prime_limit)
{
    constexpr std::uint64_t chunk = std::uint64_t{1} << 22;
    detail::StateArray<Bits> st;
    detail::KernelStats stats;
    for (std::uint64_t lo = known + 1; lo <= upto; lo += chunk) {
        const std::uint64_t hi = std::min(upto, lo + chunk - 1);
        detail::KernelInput in;
        in.a = lo;
        in.b = hi;
        in.table = &table;
        in.lookup_limit = known;
        in.primes = primes;
        in.prime_limit = prime_limit;
        in.coprime_only = true;
        detail::resolve_interval(in, st, stats);
        for (std::uint64_t n = wheel30::next_coprime(lo); n <= hi; n = wheel30::next_coprime(n + 1)) {
            table.store(n, st.value(n - lo));
        }
    }
}

} // namespace

FactorTable build_base_table(std::uint64_t limit, TableMode mode, const TableBuildOptions &options)
{
    if (limit < 30) {
        throw std::invalid_argument("table limit must be at least 30");
    }
    if (options.growth < 2 || options.growth > 7) {
        throw std::invalid_argument("table growth factor must lie in [2, 7]");
    }
    const std::uint64_t payload = (8 * ((limit + 29) / 30) * bits_per_entry(mode) + 7) / 8;
    if (payload > options.memory_budget_bytes) {
        throw std::length_error("table of " + std::to_string(payload) + " bytes exceeds the memory budget");
    }

    FactorTable table(limit, mode);
    const std::uint64_t seed = std::min(limit, std::max<std::uint64_t>(options.seed_limit, 30));
    for (std::uint64_t n = 1; n <= seed; n = wheel30::next_coprime(n + 1)) {
        const Factorization f = factorize(n);
        detail::Counts c{static_cast<unsigned>(f.big_omega()), static_cast<unsigned>(f.small_omega())};
        table.store(n, detail::finish(mode, n, c));
    }

    const std::uint64_t prime_limit = isqrt(limit) + 1;
    const std::vector<std::uint32_t> primes = primes_up_to(prime_limit);
    for (std::uint64_t known = seed; known < limit;) {
        const std::uint64_t upto = known > limit / options.growth ? limit : known * options.growth;
        if (mode == TableMode::OmegaValue) {
            extend<8>(table, known, upto, primes, prime_limit);
        } else {
            extend<2>(table, known, upto, primes, prime_limit);
        }
        known = upto;
    }
    return table;
}

} // namespace oscillax
