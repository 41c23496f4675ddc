// SPDX-License-Identifier: Apache-2.0
#include "core/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace leo3 {

namespace {

int resolve_threads(const RunOptions& opts) {
    return opts.threads > 0 ? opts.threads : default_thread_count();
}

FidelityCurve me_curve(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                       const PulseProgram& pulse, const SimGrid& grid,
                       MeDiagnostics* diag = nullptr) {
    const auto coeffs = integrate_coeffs(system, env, pulse, grid);
    const Vec3 psi = psi0.normalized();
    const auto result = me_propagate(psi * psi.adjoint(), system, env,
                                     LeoStructure::for_kind(system.kind), pulse, coeffs, grid);
    if (diag) *diag = result.diag;
    return me_fidelity(psi, result);
}

/// Maximum fidelity difference over the nodes two grids share when one step
/// is exactly half the other.
double curve_drift(const FidelityCurve& coarse, const FidelityCurve& fine) {
    double drift = 0.0;
    for (std::size_t i = 0; i < coarse.fidelity.size(); ++i) {
        const std::size_t j = 2 * i;
        if (j >= fine.fidelity.size()) break;
        drift = std::max(drift, std::abs(coarse.fidelity[i] - fine.fidelity[j]));
    }
    return drift;
}

std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index) {
    return RngStream(seed, "ensemble.realization", index).next_u64();
}

}  // namespace

double auto_dt(double tau, double delta) {
    return std::min({delta / 20.0, tau / 100.0, 0.01});
}

MeReadout me_readout(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                     const PulseProgram& pulse, double horizon, const RunOptions& opts) {
    MeReadout out;
    out.dt = opts.dt.value_or(auto_dt(pulse.base_tau(), pulse.base_delta()));
    const SimGrid grid = SimGrid::from_horizon(horizon, out.dt);
    out.curve = me_curve(system, env, psi0, pulse, grid, &out.diag);
    if (opts.confirm_dt) {
        const SimGrid fine = SimGrid{0.5 * out.dt, 2 * grid.steps};
        out.dt_confirm_drift = curve_drift(out.curve, me_curve(system, env, psi0, pulse, fine));
    }
    return out;
}

const SweepResult::Cell* SweepResult::find(const std::vector<double>& params, double tol) const {
    for (const auto& cell : cells) {
        if (cell.params.size() != params.size()) continue;
        bool match = true;
        for (std::size_t i = 0; i < params.size(); ++i)
            if (std::abs(cell.params[i] - params[i]) > tol) match = false;
        if (match) return &cell;
    }
    return nullptr;
}

namespace {

/// Shared sweep driver: each cell realizes its own pulse and runs one
/// deterministic readout; failures land in the cell status.
SweepResult run_sweep(std::vector<std::string> axis_names,
                      std::vector<std::vector<double>> axis_values,
                      const std::vector<std::vector<double>>& cell_params,
                      const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                      double t_read, const RunOptions& opts,
                      const std::function<RegularPulseSpec(const std::vector<double>&)>& to_pulse) {
    SweepResult sweep;
    sweep.axis_names = std::move(axis_names);
    sweep.axis_values = std::move(axis_values);
    sweep.cells.resize(cell_params.size());

    parallel_for(cell_params.size(), resolve_threads(opts), [&](std::size_t i) {
        auto& cell = sweep.cells[i];
        cell.params = cell_params[i];
        try {
            const RegularPulseSpec spec = to_pulse(cell.params);
            RunOptions cell_opts = opts;
            cell_opts.threads = 1;  // cells are already parallel
            const double dt = opts.dt.value_or(auto_dt(spec.tau, spec.delta));
            const SimGrid grid = SimGrid::from_horizon(t_read, dt);
            const PulseProgram pulse = realize_regular(spec, grid.horizon());
            cell_opts.dt = dt;
            const MeReadout readout = me_readout(system, env, psi0, pulse, t_read, cell_opts);
            cell.fidelity = readout.curve.final_value();
            cell.dt_confirm_drift = readout.dt_confirm_drift;
            cell.ok = true;
            cell.status = "ok";
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.status = e.what();
            cell.fidelity = std::numeric_limits<double>::quiet_NaN();
        }
    });
    return sweep;
}

}  // namespace

SweepResult delta_tau_diagram(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                              double phi0, double t_read, const std::vector<double>& delta_grid,
                              const std::vector<double>& dark_grid, const RunOptions& opts) {
    std::vector<std::vector<double>> params;
    params.reserve(delta_grid.size() * dark_grid.size());
    for (double delta : delta_grid)
        for (double dark : dark_grid) params.push_back({delta, dark});
    return run_sweep({"delta", "dark"}, {delta_grid, dark_grid}, params, system, env, psi0, t_read,
                     opts, [&](const std::vector<double>& p) {
                         if (!(p[0] > 0.0)) throw ValidationError({"diagram delta must be > 0"});
                         if (p[1] < 0.0) throw ValidationError({"diagram dark time must be >= 0"});
                         return RegularPulseSpec{p[0] + p[1], p[0], phi0};
                     });
}

SweepResult ratio_scan(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0, double phi0,
                       double tau, const std::vector<double>& ratios, double t_read,
                       const RunOptions& opts) {
    if (ratios.empty()) throw ValidationError({"ratio scan needs a nonempty ratio grid"});
    std::vector<std::vector<double>> params;
    params.reserve(ratios.size());
    for (double r : ratios) params.push_back({r});
    return run_sweep({"ratio"}, {ratios}, params, system, env, psi0, t_read, opts,
                     [&](const std::vector<double>& p) {
                         if (!(p[0] > 0.0) || p[0] > 1.0)
                             throw ValidationError({"duty ratio must lie in (0, 1]"});
                         return RegularPulseSpec{tau, p[0] * tau, phi0};
                     });
}

ThresholdEstimate detect_threshold(const SweepResult& scan, double epsilon) {
    if (!(epsilon > 0.0)) throw ValidationError({"threshold epsilon must be > 0"});
    if (scan.axis_names.size() != 1 || scan.axis_names[0] != "ratio")
        throw ValidationError({"threshold detection expects a ratio scan"});

    std::vector<const SweepResult::Cell*> ok_cells;
    for (const auto& c : scan.cells)
        if (c.ok) ok_cells.push_back(&c);
    if (ok_cells.empty()) throw ValidationError({"threshold detection on an empty scan"});
    std::sort(ok_cells.begin(), ok_cells.end(),
              [](auto* a, auto* b) { return a->params[0] < b->params[0]; });

    ThresholdEstimate est;
    est.epsilon = epsilon;
    bool have_sat = false;
    for (const auto* c : ok_cells)
        if (c->params[0] >= 0.8 - 1e-12 && c->params[0] <= 1.0 + 1e-12) {
            est.f_sat = have_sat ? std::max(est.f_sat, c->fidelity) : c->fidelity;
            have_sat = true;
        }
    if (!have_sat)
        throw ValidationError({"threshold detection needs scanned ratios in [0.8, 1.0]"});

    for (const auto* c : ok_cells) {
        if (c->fidelity >= est.f_sat - epsilon) {
            est.r_c = c->params[0];
            return est;
        }
    }
    est.r_c = ok_cells.back()->params[0];
    return est;
}

SweepResult phi0_scan(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                      const RegularPulseSpec& geometry, const std::vector<double>& phi0_values,
                      double t_read, const RunOptions& opts) {
    std::vector<std::vector<double>> params;
    params.reserve(phi0_values.size());
    for (double v : phi0_values) params.push_back({v});
    return run_sweep({"phi0"}, {phi0_values}, params, system, env, psi0, t_read, opts,
                     [&](const std::vector<double>& p) {
                         if (p[0] < 0.0) throw ValidationError({"phi0 must be >= 0"});
                         return RegularPulseSpec{geometry.tau, geometry.delta, p[0]};
                     });
}

namespace {

EnsembleCurve ensemble_mean(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                            double horizon, double dt, std::size_t n, const RunOptions& opts,
                            const std::function<PulseProgram(std::size_t, double)>& make_pulse) {
    if (n < 2) throw ValidationError({"ensemble needs at least 2 realizations"});
    const SimGrid grid = SimGrid::from_horizon(horizon, dt);
    const std::size_t nodes = grid.nodes();

    std::vector<std::vector<double>> curves(n);
    std::vector<std::string> errors(n);
    parallel_for(n, resolve_threads(opts), [&](std::size_t i) {
        try {
            const PulseProgram pulse = make_pulse(i, grid.horizon());
            curves[i] = me_curve(system, env, psi0, pulse, grid).fidelity;
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    EnsembleCurve out;
    out.n_total = n;
    out.mean.t.resize(nodes);
    out.mean.fidelity.assign(nodes, 0.0);
    out.mean.stderr.assign(nodes, 0.0);
    std::size_t good = 0;
    for (std::size_t i = 0; i < n; ++i) {  // fixed realization order
        if (curves[i].empty()) {
            out.n_failed++;
            out.failures.push_back("realization " + std::to_string(i) + ": " + errors[i]);
            continue;
        }
        good++;
        for (std::size_t j = 0; j < nodes; ++j) out.mean.fidelity[j] += curves[i][j];
    }
    if (good == 0) throw ValidationError({"every ensemble realization failed"});
    for (std::size_t j = 0; j < nodes; ++j) {
        out.mean.t[j] = grid.time(j);
        out.mean.fidelity[j] /= static_cast<double>(good);
    }
    if (good > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            if (curves[i].empty()) continue;
            for (std::size_t j = 0; j < nodes; ++j) {
                const double d = curves[i][j] - out.mean.fidelity[j];
                out.mean.stderr[j] += d * d;
            }
        }
        const auto g = static_cast<double>(good);
        for (std::size_t j = 0; j < nodes; ++j)
            out.mean.stderr[j] = std::sqrt(out.mean.stderr[j] / (g - 1.0) / g);
    }
    return out;
}

}  // namespace

EnsembleCurve random_pulse_ensemble(const SystemSpec& system, const EnvSpec& env, const Vec3& psi0,
                                    const RegularPulseSpec& base, double a_tau, double a_phi,
                                    double horizon, std::size_t n_realizations, std::uint64_t seed,
                                    const RunOptions& opts) {
    const double dt = opts.dt.value_or(auto_dt(base.tau, base.delta));
    const auto make = [&](std::size_t i, double h) {
        RandomPulseSpec spec{base, a_tau, a_phi, realization_seed(seed, i)};
        return realize_random(spec, h);
    };
    EnsembleCurve out =
        ensemble_mean(system, env, psi0, horizon, dt, n_realizations, opts, make);
    if (opts.confirm_dt) {
        RunOptions fine = opts;
        fine.confirm_dt = false;
        fine.dt = 0.5 * dt;
        const EnsembleCurve refined = ensemble_mean(system, env, psi0, horizon, 0.5 * dt,
                                                    n_realizations, fine, make);
        out.dt_confirm_drift = curve_drift(out.mean, refined.mean);
    }
    return out;
}

NoisyEnsembleResult noisy_pulse_ensemble(const SystemSpec& system, const EnvSpec& env,
                                         const Vec3& psi0, const RegularPulseSpec& base,
                                         const NoiseDressing& dressing, double horizon,
                                         std::size_t n_realizations, std::uint64_t seed,
                                         const RunOptions& opts) {
    const double dt = opts.dt.value_or(auto_dt(base.tau, base.delta));
    const auto make = [&](std::size_t i, double h) {
        NoiseDressing d = dressing;
        d.seed = realization_seed(seed, i);
        return apply_noise(realize_regular(base, h), d);
    };

    NoisyEnsembleResult result;
    result.noisy = ensemble_mean(system, env, psi0, horizon, dt, n_realizations, opts, make);
    if (opts.confirm_dt) {
        RunOptions fine = opts;
        fine.confirm_dt = false;
        fine.dt = 0.5 * dt;
        const EnsembleCurve refined = ensemble_mean(system, env, psi0, horizon, 0.5 * dt,
                                                    n_realizations, fine, make);
        result.noisy.dt_confirm_drift = curve_drift(result.noisy.mean, refined.mean);
    }

    const SimGrid grid = SimGrid::from_horizon(horizon, dt);
    result.regular = me_curve(system, env, psi0, realize_regular(base, grid.horizon()), grid);
    result.deviation = result.regular.final_value() - result.noisy.mean.final_value();
    for (std::size_t j = 0; j < result.regular.fidelity.size(); ++j)
        result.max_pointwise_dev =
            std::max(result.max_pointwise_dev,
                     std::abs(result.regular.fidelity[j] - result.noisy.mean.fidelity[j]));
    return result;
}

NvPreset nv_level_preset(double b_z_mt) {
    if (!(b_z_mt >= 0.0) || !std::isfinite(b_z_mt))
        throw ValidationError({"magnetic field must be finite and >= 0"});
    NvPreset preset;
    preset.gap_ghz = 2.88 - 0.1 * b_z_mt;
    preset.level_crossing = preset.gap_ghz <= 0.0;
    preset.note =
        "levels (m_s = 0, -1, +1); gap between m_s = 0 and m_s = -1 in GHz; "
        "map GHz to the frequency unit (omega = 1) when building a system";
    if (preset.level_crossing)
        preset.note += "; warning: level crossing, the gap closes at B_z >= 28.8 mT";
    return preset;
}

}  // namespace leo3
