#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "concap/netsim.hpp"

namespace concap {

struct FuzzOptions {
    long long trials = 0;
    std::uint64_t seed = 0;
    int generations = 12; // per trial
};

struct FuzzViolation {
    long long trial = -1;
    std::string reason;
    std::string config_json; // the offending scenario, reproducible verbatim
};

struct FuzzSummary {
    long long trials_run = 0;
    std::optional<FuzzViolation> violation;
};

// Random scenario for trial index `trial` under the given master seed.
ScenarioConfig fuzz_scenario(std::uint64_t seed, long long trial, int generations);

// Runs trials until done or the first invariant violation. trials < 1 is a
// usage error (SizeViolation).
FuzzSummary run_fuzz(const FuzzOptions& opts);

} // namespace concap
