// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

#include "core/types.hpp"

namespace leo3 {

// All randomness in the library flows from one user seed through named
// streams: stream(seed, label, index). Streams are independent of worker
// count and evaluation order, so parallel runs draw identical numbers.
//
// The generator is a fixed xoshiro256** so that sequences do not depend on
// the standard library implementation. Distributions are hand-rolled for
// the same reason.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label, std::uint64_t index);

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01();

    /// Uniform on [-1, 1].
    double uniform_sym();

    /// Standard normal (Box-Muller, pair-cached).
    double normal();

    /// Circular complex Gaussian with E[|z|^2] = 1, E[z^2] = 0.
    Complex complex_normal();

private:
    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// 64-bit FNV-1a. Used for stream labels and config hashing.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace leo3
