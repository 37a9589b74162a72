#pragma once
// Shared resolution kernel for table construction and interval sieving.

#include "oscillax/factor_table.hpp"
#include "oscillax/primes.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace oscillax::detail {

/// Per-integer scratch. Cell state 0 means unknown, otherwise value + 1.
/// Bits == 2 holds parity values; Bits == 8 holds Omega.
template <int Bits>
class StateArray {
    static_assert(Bits == 2 || Bits == 8);

public:
    void reset(std::size_t count)
    {
        count_ = count;
        cells_.assign(Bits == 2 ? (count + 3) / 4 : count, 0);
    }
    std::size_t size() const { return count_; }

    unsigned state(std::size_t i) const
    {
        if constexpr (Bits == 2) {
            return (cells_[i >> 2] >> ((i & 3) * 2)) & 3u;
        } else {
            return cells_[i];
        }
    }
    bool known(std::size_t i) const { return state(i) != 0; }
    unsigned value(std::size_t i) const { return state(i) - 1; }

    void set_value(std::size_t i, unsigned v)
    {
        if constexpr (Bits == 2) {
            cells_[i >> 2] = static_cast<std::uint8_t>(cells_[i >> 2] | ((v + 1) << ((i & 3) * 2)));
        } else {
            cells_[i] = static_cast<std::uint8_t>(v + 1);
        }
    }

private:
    std::size_t count_ = 0;
    std::vector<std::uint8_t> cells_;
};

struct Counts {
    unsigned big = 0;
    unsigned distinct = 0;
};

inline unsigned finish(TableMode mode, std::uint64_t n, Counts c)
{
    switch (mode) {
    case TableMode::ParityNMinusOmega:
        return static_cast<unsigned>((n + c.big) & 1);
    case TableMode::ParityOmegaDistinct:
        return c.distinct & 1u;
    case TableMode::OmegaValue:
        return c.big;
    }
    return 0;
}

/// Adds what the table knows about an odd cofactor c to the running counts.
/// Only the field the mode cares about is meaningful.
inline void absorb(TableMode mode, unsigned table_value, Counts &c)
{
    switch (mode) {
    case TableMode::ParityNMinusOmega:
        c.big += (1u + table_value) & 1u;
        break;
    case TableMode::ParityOmegaDistinct:
        c.distinct += table_value;
        break;
    case TableMode::OmegaValue:
        c.big += table_value;
        break;
    }
}

struct KernelStats {
    std::uint64_t phase1_resolved = 0;
    std::uint64_t phase2_resolved = 0;
    std::uint64_t trial_divisions = 0;
    std::uint64_t residual_resolved = 0;
    bool phase1_empty = false;
};

struct SmoothPart {
    std::uint64_t s;
    Counts counts;
};

/// All 2^i 3^j 5^k <= limit, ascending.
inline std::vector<SmoothPart> smooth_parts(std::uint64_t limit)
{
    std::vector<SmoothPart> out;
    for (std::uint64_t a = 1, i = 0; a <= limit; ++i) {
        for (std::uint64_t b = a, j = 0; b <= limit; ++j) {
            for (std::uint64_t c = b, k = 0; c <= limit; ++k) {
                out.push_back({c, {static_cast<unsigned>(i + j + k),
                                   static_cast<unsigned>((i > 0) + (j > 0) + (k > 0))}});
                if (c > limit / 5) {
                    break;
                }
                c *= 5;
            }
            if (b > limit / 3) {
                break;
            }
            b *= 3;
        }
        if (a > limit / 2) {
            break;
        }
        a *= 2;
    }
    std::sort(out.begin(), out.end(), [](const SmoothPart &x, const SmoothPart &y) { return x.s < y.s; });
    return out;
}

struct KernelInput {
    std::uint64_t a = 1;
    std::uint64_t b = 1;
    const FactorTable *table = nullptr;
    /// Table entries are trusted for n <= lookup_limit only.
    std::uint64_t lookup_limit = 0;
    /// Ascending primes covering [7, sqrt(b)] (smaller primes are ignored).
    std::span<const std::uint32_t> primes;
    /// The bound the prime list was generated up to.
    std::uint64_t prime_limit = 0;
    /// Only n coprime to 30 are resolved (table construction).
    bool coprime_only = false;
    bool verify_residual = false;
    const std::vector<SmoothPart> *smooth = nullptr;
};

/// Resolves every cell of [a, b] (index n - a) into `st`.
template <int Bits>
void resolve_interval(const KernelInput &in, StateArray<Bits> &st, KernelStats &stats)
{
    const std::uint64_t a = in.a;
    const std::uint64_t b = in.b;
    const TableMode mode = in.table->mode();
    const FactorTable &table = *in.table;
    const std::uint64_t M = in.lookup_limit;
    st.reset(b - a + 1);

    const std::uint64_t root = isqrt(b);
    const std::uint64_t split = b / M;
    stats.phase1_empty = split >= root;

    auto lookup = [&](std::uint64_t c, Counts &cnt) { absorb(mode, table.value(c), cnt); };

    // primes <= root, starting at 7
    auto first = std::lower_bound(in.primes.begin(), in.primes.end(), 7u);
    auto last = std::max(first, std::upper_bound(in.primes.begin(), in.primes.end(), root));
    if (in.prime_limit < root) {
        throw std::invalid_argument("resolve_interval: prime list does not reach sqrt(b)");
    }

    auto strip_small = [](std::uint64_t &c, Counts &cnt) {
        for (const std::uint64_t q : {2u, 3u, 5u}) {
            if (c % q == 0) {
                ++cnt.distinct;
                do {
                    c /= q;
                    ++cnt.big;
                } while (c % q == 0);
            }
        }
    };

    for (auto it = last; it != first;) {
        --it;
        const std::uint64_t p = *it;
        const bool phase1 = p > split;
        // multiples n = p*k in [a, b]
        std::uint64_t k = (a + p - 1) / p;
        const std::uint64_t k_end = b / p;
        if (in.coprime_only) {
            k = wheel30::next_coprime(k);
        }
        while (k <= k_end) {
            const std::uint64_t n = p * k;
            const std::size_t idx = n - a;
            if (!st.known(idx)) {
                Counts cnt{1, 1};
                std::uint64_t c = k;
                while (c % p == 0) {
                    c /= p;
                    ++cnt.big;
                }
                if (!in.coprime_only) {
                    strip_small(c, cnt);
                }
                if (c <= M) {
                    lookup(c, cnt);
                } else {
                    // only possible for p <= b/M; the remaining factors are
                    // either <= p or one prime above sqrt(b)
                    for (auto q = first; q != it && c > M; ++q) {
                        const std::uint64_t qq = *q;
                        if (qq * qq > c) {
                            break;
                        }
                        ++stats.trial_divisions;
                        if (c % qq == 0) {
                            ++cnt.distinct;
                            do {
                                c /= qq;
                                ++cnt.big;
                            } while (c % qq == 0);
                        }
                    }
                    if (c <= M) {
                        lookup(c, cnt);
                    } else {
                        ++cnt.big;
                        ++cnt.distinct;
                    }
                }
                st.set_value(idx, finish(mode, n, cnt));
                if (phase1) {
                    ++stats.phase1_resolved;
                } else {
                    ++stats.phase2_resolved;
                }
            }
            if (in.coprime_only) {
                k = wheel30::next_coprime(k + 1);
            } else {
                ++k;
            }
        }
    }

    // residual cells are s*q with s 5-smooth and q = 1 or prime
    auto residual = [&](const SmoothPart &sp) {
        std::uint64_t q = (a + sp.s - 1) / sp.s;
        const std::uint64_t q_end = b / sp.s;
        q = wheel30::next_coprime(q);
        while (q <= q_end) {
            const std::uint64_t n = sp.s * q;
            const std::size_t idx = n - a;
            if (!st.known(idx)) {
                Counts cnt = sp.counts;
                if (q > 1) {
                    if (in.verify_residual && !is_prime_u64(q)) {
                        throw std::logic_error("residual cofactor is composite; prime list too short");
                    }
                    ++cnt.big;
                    ++cnt.distinct;
                }
                st.set_value(idx, finish(mode, n, cnt));
                ++stats.residual_resolved;
            }
            q = wheel30::next_coprime(q + 1);
        }
    };
    if (in.coprime_only) {
        residual(SmoothPart{1, {}});
    } else {
        for (const SmoothPart &sp : *in.smooth) {
            if (sp.s > b) {
                break;
            }
            residual(sp);
        }
    }
}

} // namespace oscillax::detail
