// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/coeffs.hpp"
#include "core/noise_path.hpp"
#include "core/pulse.hpp"
#include "core/schedule.hpp"
#include "core/system.hpp"
#include "core/types.hpp"

namespace leo3 {

// Both propagation routes integrate in the rotating frame of
// H_sys + c(t) * diag(projector). The frame change is exact (the pulse
// integral C(t) is piecewise linear and known in closed form), which removes
// the pulse term from the generator entirely: the decay operators pick up
// channel phases exp(-i [gap_k t + C(t)]) and the integrator never sees the
// amplitude jumps. With zero environment coupling the generator vanishes
// identically, so survival fidelity stays exactly 1.

/// Fidelity vs time; stderr is empty for deterministic (master equation)
/// runs and filled for ensemble averages.
struct FidelityCurve {
    std::vector<double> t;
    std::vector<double> fidelity;
    std::vector<double> stderr;

    double final_value() const { return fidelity.empty() ? 0.0 : fidelity.back(); }
    double final_stderr() const { return stderr.empty() ? 0.0 : stderr.back(); }
};

enum class Frame { Rotating, Lab };

struct MeDiagnostics {
    double max_trace_error = 0.0;
    double max_hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;
};

/// Rotating-frame density matrices at the grid nodes.
struct MeResult {
    SimGrid grid;
    std::vector<Mat3> rho;
    MeDiagnostics diag;
};

/// Exact master equation
///   d rho/dt = -i [H + c(t) P, rho] + [L, rho O^dag] + [O rho, L^dag]
/// integrated in the rotating frame (see above). Trace is conserved to
/// rounding; a Hermiticity drift beyond 1e-8 aborts as an integrator fault.
MeResult me_propagate(const Mat3& rho0, const SystemSpec& system, const EnvSpec& env,
                      const LeoStructure& leo, const PulseProgram& pulse,
                      const CoeffSeries& coeffs, const SimGrid& grid);

/// F(t) = sqrt(<psi0| rho(t) |psi0>) on the stored rotating-frame series.
FidelityCurve me_fidelity(const Vec3& psi0, const MeResult& result);

/// Lab-frame variant (debugging aid): undoes the frame rotation first.
FidelityCurve me_fidelity_lab(const Vec3& psi0, const MeResult& result, const SystemSpec& system,
                              const LeoStructure& leo, const PulseProgram& pulse);

/// One linear quantum-state-diffusion trajectory
///   d psi/dt = [-i H - i c(t) P + L z*_t - L^dag O(t)] psi
/// driven by the conjugate of `noise`, whose node value is held across the
/// step. Returns Schrodinger-frame states at the grid nodes (unnormalized;
/// the linear unraveling averages to the density matrix without
/// per-trajectory normalization).
std::vector<Vec3> propagate_trajectory(const Vec3& psi0, const SystemSpec& system,
                                       const EnvSpec& env, const LeoStructure& leo,
                                       const PulseProgram& pulse, const CoeffSeries& coeffs,
                                       const NoisePath& noise, const SimGrid& grid);

/// Applies the rotating-frame phases to a stored trajectory.
std::vector<Vec3> to_rotating_frame(std::span<const Vec3> states, const SystemSpec& system,
                                    const LeoStructure& leo, const PulseProgram& pulse,
                                    const SimGrid& grid);

/// F(t) = sqrt(M[ |<psi0|psi_t>|^2 ]) over rotating-frame trajectories, with
/// the standard error of the mean pushed through the square root (delta
/// method).
FidelityCurve qsd_fidelity(const Vec3& psi0, std::span<const std::vector<Vec3>> trajectories,
                           const SimGrid& grid);

struct QsdEnsembleResult {
    FidelityCurve fidelity;
    std::vector<double> mean_norm;    ///< ensemble mean of <psi|psi> per node
    std::vector<double> norm_stderr;
    std::size_t n_trajectories = 0;
};

/// Streams `n_traj` trajectories (noise stream = (seed, path index)) and
/// reduces fidelity statistics in fixed index order; bit-stable for a given
/// seed and worker count.
QsdEnsembleResult qsd_ensemble_fidelity(const Vec3& psi0, const SystemSpec& system,
                                        const EnvSpec& env, const LeoStructure& leo,
                                        const PulseProgram& pulse, const CoeffSeries& coeffs,
                                        const SimGrid& grid, std::size_t n_traj,
                                        std::uint64_t seed, int threads);

struct EquivalencePair {
    FidelityCurve v_curve;
    FidelityCurve lambda_curve;
};

/// Runs the matched pair of scenarios for which the two level structures
/// give identical fidelity: V-type with omega = (1/2, 1/2, -1/2) and
/// psi0 = (|1> + |2>)/sqrt(2), lambda-type with omega = (1/2, -1/2, -1/2)
/// and psi0 = |1>, all couplings equal to mu.
EquivalencePair v_lambda_equivalent_fidelity(const EnvSpec& env, const PulseProgram& pulse,
                                             const SimGrid& grid, double mu);

/// Scalar reduction of that symmetric pair: both fidelities equal |h(t)|
/// where dh/dt = -2 mu^2 g h and g obeys the scalar Riccati equation
/// dg/dt = Gamma gamma / 2 + [-gamma + i (1 - Omega + c(t))] g + 2 mu^2 g^2.
FidelityCurve equivalence_riccati_fidelity(const EnvSpec& env, const PulseProgram& pulse,
                                           const SimGrid& grid, double mu);

}  // namespace leo3
