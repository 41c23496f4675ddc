// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "core/config.hpp"

namespace leo3 {

struct RunnerOptions {
    std::optional<std::uint64_t> seed_override;
    std::optional<double> dt_override;
    int threads = 0;  ///< <= 0 means hardware concurrency
};

struct DispatchResult {
    int exit_code = 0;
    std::string report;  ///< human-readable summary, one finding per line
};

/// Known commands: simulate, diagram, scan-phi0, scan-ratio, random-ensemble,
/// noisy-ensemble, equivalence-check, validate, version.
///
/// Writes the declared CSV artifacts plus a run.json sidecar into `out_dir`
/// (created if missing). Every artifact carries the config hash and seed; the
/// only non-reproducible field is the timestamp, isolated in run.json. On
/// failure a machine-readable error.json is written and the exit code is
/// nonzero.
DispatchResult dispatch(const std::string& command, const RunConfig& config,
                        const RunnerOptions& options, const std::string& out_dir);

}  // namespace leo3
