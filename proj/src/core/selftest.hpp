// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace leo3 {

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs the library's invariant suite (pulse integral exactness, noise
/// statistics, zero-coupling exactness, trace/hermiticity bounds, oracle
/// agreement, unraveling-vs-master-equation consistency, determinism) at
/// sizes chosen to finish in tens of seconds.
std::vector<PropertyResult> run_validation_suite(std::uint64_t seed, int threads);

}  // namespace leo3
