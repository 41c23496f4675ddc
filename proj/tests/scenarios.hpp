// SPDX-License-Identifier: Apache-2.0
//
// Shared benchmark scenarios for the test suites.
#pragma once

#include "core/experiments.hpp"
#include "core/propagator.hpp"

namespace leo3::test {

// V-type benchmark: level gaps (1, 0.8), couplings (1, 0.5), exponential
// environment with Gamma = gamma = 1, Omega = 0.5, protected superposition
// of the two upper levels.
inline const SystemSpec kBenchSystem{SystemKind::VType, {1.0, 0.8, 0.0}, {1.0, 0.5}};
inline const EnvSpec kBenchEnv{1.0, 1.0, 0.5};
inline const RegularPulseSpec kBenchPulse{0.02, 0.012, 1.0};  // duty 0.6

// Degenerate-upper-level variant used for the parameter diagram and the
// V/lambda matched pair.
inline const SystemSpec kDegenerateV{SystemKind::VType, {0.5, 0.5, -0.5}, {1.0, 0.5}};
inline const SystemSpec kLambdaBench{SystemKind::LambdaType, {0.5, -0.5, -0.5}, {0.5, 1.0}};

// Parameters that drive the coefficient Riccati equation to a finite-time
// escape (real positive drive plus strong positive feedback).
inline const SystemSpec kBlowupSystem{SystemKind::VType, {0.0, 0.0, 0.0}, {5.0, 0.0}};
inline const EnvSpec kBlowupEnv{100.0, 0.01, 0.0};

inline FidelityCurve run_me(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                            const PulseProgram& pulse, const SimGrid& grid,
                            MeDiagnostics* diag = nullptr) {
    const auto coeffs = integrate_coeffs(system, env, pulse, grid);
    const Vec3 psi = psi0.normalized();
    const auto result = me_propagate(psi * psi.adjoint(), system, env,
                                     LeoStructure::for_kind(system.kind), pulse, coeffs, grid);
    if (diag) *diag = result.diag;
    return me_fidelity(psi, result);
}

}  // namespace leo3::test
