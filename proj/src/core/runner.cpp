// SPDX-License-Identifier: Apache-2.0
#include "core/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/selftest.hpp"
#include "core/version.hpp"

namespace leo3 {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Workspace {
    RunConfig config;
    RunnerOptions options;
    fs::path out;
    std::string hash;
    std::uint64_t seed = 0;
    json stats;
    std::vector<std::string> artifacts;
    std::string report;

    RunOptions run_options() const {
        RunOptions o;
        o.dt = options.dt_override ? options.dt_override : config.grid.dt;
        o.threads = options.threads;
        o.confirm_dt = true;
        return o;
    }

    void note(const std::string& line) {
        report += line;
        report += '\n';
    }

    std::ofstream open(const std::string& name) {
        fs::create_directories(out);
        std::ofstream os(out / name, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file " + (out / name).string());
        os << "# config_hash=" << hash << " seed=" << seed << "\n";
        artifacts.push_back(name);
        return os;
    }

    void write_curve(const std::string& name, const FidelityCurve& curve) {
        auto os = open(name);
        os << "t,fidelity,stderr\n";
        for (std::size_t i = 0; i < curve.t.size(); ++i) {
            os << num(curve.t[i]) << ',' << num(curve.fidelity[i]) << ',';
            if (!curve.stderr.empty()) os << num(curve.stderr[i]);
            os << '\n';
        }
    }

    void write_sweep(const std::string& name, const SweepResult& sweep) {
        auto os = open(name);
        for (const auto& axis : sweep.axis_names) os << axis << ',';
        os << "fidelity,status\n";
        for (const auto& cell : sweep.cells) {
            for (double p : cell.params) os << num(p) << ',';
            os << (cell.ok ? num(cell.fidelity) : "") << ',' << (cell.ok ? "ok" : cell.status)
               << '\n';
        }
    }

    void write_sidecar(const std::string& command) {
        fs::create_directories(out);
        json j;
        j["command"] = command;
        j["artifact_version"] = kArtifactVersion;
        j["config"] = json::parse(serialize_config(config));
        j["config_hash"] = hash;
        j["seed"] = seed;
        j["stats"] = stats;
        j["artifacts"] = artifacts;
        j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::system_clock::now().time_since_epoch())
                             .count();
        std::ofstream os(out / "run.json", std::ios::binary);
        os << j.dump(2) << '\n';
    }
};

double max_drift(const SweepResult& sweep) {
    double d = 0.0;
    for (const auto& c : sweep.cells)
        if (c.ok) d = std::max(d, c.dt_confirm_drift);
    return d;
}

void cmd_simulate(Workspace& ws) {
    const auto& cfg = ws.config;
    const double dt = ws.options.dt_override.value_or(cfg.resolved_dt());
    const SimGrid grid = SimGrid::from_horizon(cfg.grid.horizon, dt);

    PulseProgram pulse =
        cfg.pulse.variant == PulseVariant::Regular
            ? realize_regular(cfg.pulse.regular(), grid.horizon())
            : realize_random({cfg.pulse.regular(), cfg.pulse.a_tau, cfg.pulse.a_phi, ws.seed},
                             grid.horizon());
    if (cfg.pulse.noise) pulse = apply_noise(pulse, cfg.dressing(ws.seed));

    const Vec3 psi0 = cfg.initial_state();
    const auto coeffs = integrate_coeffs(cfg.system, cfg.env, pulse, grid);
    const auto leo = LeoStructure::for_kind(cfg.system.kind);

    FidelityCurve curve;
    if (cfg.method == Method::MasterEquation) {
        const Vec3 psi = psi0.normalized();
        const auto result =
            me_propagate(psi * psi.adjoint(), cfg.system, cfg.env, leo, pulse, coeffs, grid);
        curve = me_fidelity(psi, result);
        ws.stats["max_trace_error"] = result.diag.max_trace_error;
        ws.stats["max_hermiticity_error"] = result.diag.max_hermiticity_error;
        ws.stats["min_eigenvalue"] = result.diag.min_eigenvalue;
    } else {
        const auto ens = qsd_ensemble_fidelity(psi0, cfg.system, cfg.env, leo, pulse, coeffs, grid,
                                               cfg.ensemble.n_traj, ws.seed,
                                               ws.run_options().threads);
        curve = ens.fidelity;
        ws.stats["n_trajectories"] = ens.n_trajectories;
        ws.stats["final_mean_norm"] = ens.mean_norm.back();
    }
    ws.stats["dt"] = dt;
    ws.write_curve("fidelity.csv", curve);
    if (cfg.export_pulse) {
        auto os = ws.open("pulse.csv");
        pulse.write_csv(os);
    }
    if (cfg.export_coeffs) {
        auto os = ws.open("coeffs.csv");
        coeffs.write_csv(os, pulse);
    }
    ws.note("simulate: " + std::string(to_string(cfg.system.kind)) + "-type, method " +
            (cfg.method == Method::MasterEquation ? "me" : "qsd") + ", horizon " +
            num(grid.horizon()) + ", final fidelity " + num(curve.final_value()));
}

void cmd_diagram(Workspace& ws) {
    const auto& d = ws.config.diagram;
    const auto sweep =
        delta_tau_diagram(ws.config.system, ws.config.env, ws.config.initial_state(), d.phi0,
                          d.t_read, d.delta_grid(), d.dark_grid(), ws.run_options());
    ws.write_sweep("diagram.csv", sweep);
    ws.stats["cells"] = sweep.cells.size();
    ws.stats["max_dt_confirm_drift"] = max_drift(sweep);
    ws.note("diagram: " + std::to_string(sweep.cells.size()) + " cells at t_read " +
            num(d.t_read));
}

void cmd_scan_phi0(Workspace& ws) {
    const auto& s = ws.config.scan_phi0;
    const auto sweep = phi0_scan(ws.config.system, ws.config.env, ws.config.initial_state(),
                                 ws.config.pulse.regular(), s.values, s.t_read, ws.run_options());
    ws.write_sweep("phi0_scan.csv", sweep);
    ws.stats["max_dt_confirm_drift"] = max_drift(sweep);
    std::string line = "scan-phi0 at t=" + num(s.t_read) + ":";
    for (const auto& cell : sweep.cells)
        line += " F(" + num(cell.params[0]) + ")=" + (cell.ok ? num(cell.fidelity) : "failed");
    ws.note(line);
}

void cmd_scan_ratio(Workspace& ws) {
    const auto& s = ws.config.scan_ratio;
    const auto sweep = ratio_scan(ws.config.system, ws.config.env, ws.config.initial_state(),
                                  ws.config.pulse.phi0, ws.config.pulse.tau, s.ratios, s.t_read,
                                  ws.run_options());
    const auto threshold = detect_threshold(sweep, s.epsilon);
    ws.write_sweep("ratio_scan.csv", sweep);
    ws.stats["r_c"] = threshold.r_c;
    ws.stats["f_sat"] = threshold.f_sat;
    ws.stats["epsilon"] = threshold.epsilon;
    ws.stats["max_dt_confirm_drift"] = max_drift(sweep);
    ws.note("scan-ratio: plateau fidelity " + num(threshold.f_sat) + ", threshold r_c = " +
            num(threshold.r_c));
}

void cmd_random_ensemble(Workspace& ws) {
    const auto& cfg = ws.config;
    const auto ens = random_pulse_ensemble(cfg.system, cfg.env, cfg.initial_state(),
                                           cfg.pulse.regular(), cfg.pulse.a_tau, cfg.pulse.a_phi,
                                           cfg.grid.horizon, cfg.ensemble.n_realizations, ws.seed,
                                           ws.run_options());
    ws.write_curve("ensemble.csv", ens.mean);
    ws.stats["n_realizations"] = ens.n_total;
    ws.stats["n_failed"] = ens.n_failed;
    ws.stats["dt_confirm_drift"] = ens.dt_confirm_drift;
    ws.note("random-ensemble: n=" + std::to_string(ens.n_total) + " (failed " +
            std::to_string(ens.n_failed) + "), final mean fidelity " +
            num(ens.mean.final_value()) + " +- " + num(ens.mean.final_stderr()));
}

void cmd_noisy_ensemble(Workspace& ws) {
    const auto& cfg = ws.config;
    if (!cfg.pulse.noise)
        throw ValidationError({"noisy-ensemble requires a pulse.noise block in the config"});
    const auto result = noisy_pulse_ensemble(cfg.system, cfg.env, cfg.initial_state(),
                                             cfg.pulse.regular(), cfg.dressing(ws.seed),
                                             cfg.grid.horizon, cfg.ensemble.n_realizations,
                                             ws.seed, ws.run_options());
    ws.write_curve("noisy.csv", result.noisy.mean);
    ws.write_curve("regular.csv", result.regular);
    ws.stats["n_realizations"] = result.noisy.n_total;
    ws.stats["n_failed"] = result.noisy.n_failed;
    ws.stats["deviation_at_final_time"] = result.deviation;
    ws.stats["final_stderr"] = result.noisy.mean.final_stderr();
    ws.stats["max_pointwise_deviation"] = result.max_pointwise_dev;
    ws.stats["dt_confirm_drift"] = result.noisy.dt_confirm_drift;
    ws.note("noisy-ensemble: deviation from the regular sequence at the final time " +
            num(result.deviation) + " (stderr " + num(result.noisy.mean.final_stderr()) + ")");
}

void cmd_equivalence(Workspace& ws) {
    const auto& cfg = ws.config;
    const double dt = ws.options.dt_override.value_or(cfg.resolved_dt());
    const SimGrid grid = SimGrid::from_horizon(cfg.equivalence.horizon, dt);
    const auto pulse = realize_regular(cfg.pulse.regular(), grid.horizon());
    const auto pair = v_lambda_equivalent_fidelity(cfg.env, pulse, grid, cfg.equivalence.mu);
    const auto scalar = equivalence_riccati_fidelity(cfg.env, pulse, grid, cfg.equivalence.mu);

    double pair_dev = 0.0, scalar_dev = 0.0;
    for (std::size_t i = 0; i < pair.v_curve.fidelity.size(); ++i) {
        pair_dev = std::max(pair_dev, std::abs(pair.v_curve.fidelity[i] -
                                               pair.lambda_curve.fidelity[i]));
        scalar_dev = std::max(scalar_dev,
                              std::abs(pair.v_curve.fidelity[i] - scalar.fidelity[i]));
    }

    auto os = ws.open("equivalence.csv");
    os << "t,fidelity_v,fidelity_lambda,fidelity_scalar\n";
    for (std::size_t i = 0; i < pair.v_curve.t.size(); ++i)
        os << num(pair.v_curve.t[i]) << ',' << num(pair.v_curve.fidelity[i]) << ','
           << num(pair.lambda_curve.fidelity[i]) << ',' << num(scalar.fidelity[i]) << '\n';

    ws.stats["max_pair_deviation"] = pair_dev;
    ws.stats["max_scalar_deviation"] = scalar_dev;
    ws.note("equivalence-check: max |F_V - F_lambda| = " + num(pair_dev) +
            ", max |F_V - F_scalar| = " + num(scalar_dev));
}

int cmd_validate(Workspace& ws) {
    const auto results = run_validation_suite(ws.seed, ws.run_options().threads);
    json props = json::array();
    bool all_pass = true;
    for (const auto& r : results) {
        ws.note(std::string(r.pass ? "PASS  " : "FAIL  ") + r.name + " (" + r.detail + ")");
        props.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        all_pass = all_pass && r.pass;
    }
    ws.stats["properties"] = props;
    ws.note(all_pass ? "validate: all properties hold" : "validate: FAILURES present");
    return all_pass ? 0 : 1;
}

}  // namespace

DispatchResult dispatch(const std::string& command, const RunConfig& config,
                        const RunnerOptions& options, const std::string& out_dir) {
    DispatchResult result;
    Workspace ws{config, options, fs::path(out_dir), "", 0, json::object(), {}, ""};
    if (options.seed_override) {
        ws.config.seed = *options.seed_override;
        ws.config.seed_given = true;
    }
    ws.seed = ws.config.seed;
    ws.hash = config_hash(ws.config);

    try {
        if (command == "version") {
            result.report = std::string("leo3 ") + kArtifactVersion + " (config schema " +
                            std::to_string(kConfigSchemaVersion) + ")\n";
            return result;
        }
        if (command == "simulate")
            cmd_simulate(ws);
        else if (command == "diagram")
            cmd_diagram(ws);
        else if (command == "scan-phi0")
            cmd_scan_phi0(ws);
        else if (command == "scan-ratio")
            cmd_scan_ratio(ws);
        else if (command == "random-ensemble")
            cmd_random_ensemble(ws);
        else if (command == "noisy-ensemble")
            cmd_noisy_ensemble(ws);
        else if (command == "equivalence-check")
            cmd_equivalence(ws);
        else if (command == "validate")
            result.exit_code = cmd_validate(ws);
        else
            throw ValidationError({"unknown command '" + command + "'"});

        ws.write_sidecar(command);
        result.report += ws.report;
        return result;
    } catch (const std::exception& e) {
        json err;
        err["error"] = {{"command", command},
                        {"message", e.what()},
                        {"config_hash", ws.hash},
                        {"seed", ws.seed}};
        std::error_code ignore;
        fs::create_directories(ws.out, ignore);
        std::ofstream os(ws.out / "error.json", std::ios::binary);
        if (os) os << err.dump(2) << '\n';
        result.exit_code = dynamic_cast<const ValidationError*>(&e) ? 2 : 3;
        result.report = std::string("error: ") + e.what() + "\n";
        return result;
    }
}

}  // namespace leo3
