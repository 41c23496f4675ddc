// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/propagator.hpp"

namespace leo3 {

/// Integrator step rule: dt = min(delta/20, tau/100, 0.01). Every
/// deterministic readout can be re-run at dt/2 ("confirm") and the maximum
/// fidelity drift over shared nodes recorded; drifts beyond 1e-4 indicate a
/// step-size problem.
double auto_dt(double tau, double delta);

struct RunOptions {
    std::optional<double> dt;  ///< overrides the auto rule when set
    int threads = 0;           ///< <= 0 means hardware concurrency
    bool confirm_dt = true;
};

inline constexpr double kDtConfirmTolerance = 1e-4;

/// One deterministic master-equation run with diagnostics and optional
/// step-halving confirmation.
struct MeReadout {
    FidelityCurve curve;
    MeDiagnostics diag;
    double dt = 0.0;
    double dt_confirm_drift = 0.0;
};

MeReadout me_readout(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                     const PulseProgram& pulse, double horizon, const RunOptions& opts);

/// Scalar field of readout fidelities over one or two swept parameters.
struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<std::vector<double>> axis_values;

    struct Cell {
        std::vector<double> params;
        double fidelity = 0.0;
        bool ok = false;
        std::string status;  // "ok" or the failure reason
        double dt_confirm_drift = 0.0;
    };
    std::vector<Cell> cells;  // row-major over the axis grids

    const Cell* find(const std::vector<double>& params, double tol = 1e-12) const;
};

/// Fidelity at t_read over a (duration, dark-time) grid; the period of each
/// cell is delta + dark. Cell failures are recorded in the cell status and
/// do not stop the sweep.
SweepResult delta_tau_diagram(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                              double phi0, double t_read, const std::vector<double>& delta_grid,
                              const std::vector<double>& dark_grid, const RunOptions& opts = {});

/// Fidelity at t_read vs duty ratio r = delta/tau at fixed period and area.
SweepResult ratio_scan(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0, double phi0,
                       double tau, const std::vector<double>& ratios, double t_read,
                       const RunOptions& opts = {});

struct ThresholdEstimate {
    double r_c = 0.0;
    double f_sat = 0.0;
    double epsilon = 0.0;
};

/// Plateau rule: f_sat is the best fidelity among scanned ratios in
/// [0.8, 1.0]; r_c is the smallest scanned ratio whose fidelity reaches
/// f_sat - epsilon.
ThresholdEstimate detect_threshold(const SweepResult& scan, double epsilon = 0.01);

/// Fidelity at t_read vs pulse area phi0 at fixed geometry.
SweepResult phi0_scan(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                      const RegularPulseSpec& geometry, const std::vector<double>& phi0_values,
                      double t_read, const RunOptions& opts = {});

/// Pointwise mean fidelity over an ensemble of pulse realizations, each
/// propagated with the deterministic master equation (exactness per
/// realization isolates the pulse-randomness effect).
struct EnsembleCurve {
    FidelityCurve mean;  ///< with pointwise standard errors
    std::size_t n_total = 0;
    std::size_t n_failed = 0;
    std::vector<std::string> failures;
    double dt_confirm_drift = 0.0;
};

EnsembleCurve random_pulse_ensemble(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                                    const RegularPulseSpec& base, double a_tau, double a_phi,
                                    double horizon, std::size_t n_realizations, std::uint64_t seed,
                                    const RunOptions& opts = {});

struct NoisyEnsembleResult {
    EnsembleCurve noisy;
    FidelityCurve regular;          ///< undressed reference
    double deviation = 0.0;         ///< regular F(T) - noisy mean F(T)
    double max_pointwise_dev = 0.0; ///< max_t |mean(t) - regular(t)|
};

NoisyEnsembleResult noisy_pulse_ensemble(const SystemSpec& system, const EnvSpec& env,
                                         const Vec3& psi0, const RegularPulseSpec& base,
                                         const NoiseDressing& dressing, double horizon,
                                         std::size_t n_realizations, std::uint64_t seed,
                                         const RunOptions& opts = {});

struct NvPreset {
    double gap_ghz = 0.0;
    bool level_crossing = false;
    std::string note;
};

/// Ground-state spin-1 level gap of a nitrogen-vacancy center under an axial
/// field: gap = 2.88 GHz - 0.1 GHz * (B_z / mT), levels (m_s = 0, -1, +1).
/// Warns when the gap closes (B_z >= 28.8 mT).
NvPreset nv_level_preset(double b_z_mt);

}  // namespace leo3
