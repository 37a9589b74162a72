#pragma once

#include "oscillax/sieve.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace oscillax {

enum class ConjectureStatus {
    Pass,
    Fail,
    /// Onset not stated and the direction never settles inside the range.
    Undetermined,
};

std::string status_name(ConjectureStatus s);

struct ConjectureResult {
    std::string id;
    std::string statement;
    /// First x the statement is claimed for (the stated onset), if known.
    std::optional<std::uint64_t> from;
    ConjectureStatus status = ConjectureStatus::Pass;
    std::optional<std::uint64_t> first_violation; // at or after `from`
    std::uint64_t violations = 0;                 // at or after `from`
    /// Divisibility only: last violating x in [1, X] plus one.
    std::optional<std::uint64_t> empirical_onset;
    /// Violations before `from` (up to 32), informational.
    std::vector<std::uint64_t> early_violations;
};

struct ConjectureReport {
    std::uint64_t limit = 0;
    std::vector<ConjectureResult> results;

    bool any_failure() const;
};

struct ConjectureOptions {
    int workers = 1;
    std::uint64_t block_size = 1 << 22;
};

/// Stated onsets s(m); m = 4 runs in the opposite direction.
std::optional<std::uint64_t> divisibility_onset(int m);

/// Sun's bounds on S_0, S_1, W, the seventeen divisibility proportions
/// (m = 3..18, 20) and the twisted signs for d = -4, -7, -3, 5, all on [1, X]
/// in one sieve pass. X = 0 gives an empty report.
ConjectureReport verify_conjectures(std::uint64_t limit, const ConjectureOptions &options = {});

} // namespace oscillax
