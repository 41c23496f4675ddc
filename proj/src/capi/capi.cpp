// SPDX-License-Identifier: Apache-2.0
#include "leo3/leo3.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "core/config.hpp"
#include "core/experiments.hpp"
#include "core/propagator.hpp"
#include "core/runner.hpp"
#include "core/version.hpp"

struct leo3_sim {
    leo3::RunConfig config;
    leo3::RunnerOptions options;
    std::string last_error;
};

struct leo3_curve {
    leo3::FidelityCurve curve;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

leo3_status classify(const std::exception& e) {
    return dynamic_cast<const leo3::ValidationError*>(&e) ? LEO3_ERR_VALIDATION
                                                          : LEO3_ERR_RUNTIME;
}

}  // namespace

extern "C" {

const char* leo3_version(void) { return leo3::kArtifactVersion; }

int leo3_schema_version(void) { return leo3::kConfigSchemaVersion; }

leo3_status leo3_config_validate_json(const char* json_text, char** errors_out) {
    if (errors_out) *errors_out = nullptr;
    if (!json_text) return LEO3_ERR_INVALID_ARG;
    try {
        leo3::parse_config(json_text);
        return LEO3_OK;
    } catch (const leo3::ValidationError& e) {
        if (errors_out) {
            std::string text;
            for (const auto& issue : e.issues()) {
                text += issue;
                text += '\n';
            }
            *errors_out = dup_string(text);
        }
        return LEO3_ERR_VALIDATION;
    } catch (const std::exception& e) {
        if (errors_out) *errors_out = dup_string(e.what());
        return LEO3_ERR_RUNTIME;
    }
}

leo3_sim* leo3_sim_create(const char* json_text, char** error_out) {
    if (error_out) *error_out = nullptr;
    if (!json_text) {
        if (error_out) *error_out = dup_string("json_text must not be NULL");
        return nullptr;
    }
    try {
        auto* sim = new leo3_sim{leo3::parse_config(json_text), {}, {}};
        return sim;
    } catch (const std::exception& e) {
        if (error_out) *error_out = dup_string(e.what());
        return nullptr;
    }
}

void leo3_sim_destroy(leo3_sim* sim) { delete sim; }

const char* leo3_sim_last_error(const leo3_sim* sim) {
    return sim ? sim->last_error.c_str() : "";
}

leo3_status leo3_sim_override_seed(leo3_sim* sim, uint64_t seed) {
    if (!sim) return LEO3_ERR_INVALID_ARG;
    sim->options.seed_override = seed;
    return LEO3_OK;
}

leo3_status leo3_sim_override_dt(leo3_sim* sim, double dt) {
    if (!sim) return LEO3_ERR_INVALID_ARG;
    if (!(dt > 0.0)) {
        sim->last_error = "dt override must be > 0";
        return LEO3_ERR_VALIDATION;
    }
    sim->options.dt_override = dt;
    return LEO3_OK;
}

leo3_status leo3_sim_override_threads(leo3_sim* sim, int threads) {
    if (!sim) return LEO3_ERR_INVALID_ARG;
    sim->options.threads = threads;
    return LEO3_OK;
}

leo3_status leo3_sim_dispatch(leo3_sim* sim, const char* command, const char* out_dir,
                              char** report_out) {
    if (report_out) *report_out = nullptr;
    if (!sim || !command || !out_dir) return LEO3_ERR_INVALID_ARG;
    try {
        const auto result = leo3::dispatch(command, sim->config, sim->options, out_dir);
        if (report_out) *report_out = dup_string(result.report);
        if (result.exit_code == 0) return LEO3_OK;
        sim->last_error = result.report;
        return result.exit_code == 2 ? LEO3_ERR_VALIDATION : LEO3_ERR_RUNTIME;
    } catch (const std::exception& e) {
        sim->last_error = e.what();
        if (report_out) *report_out = dup_string(sim->last_error);
        return classify(e);
    }
}

leo3_status leo3_sim_run_fidelity(leo3_sim* sim, leo3_curve** curve_out) {
    if (!sim || !curve_out) return LEO3_ERR_INVALID_ARG;
    *curve_out = nullptr;
    try {
        leo3::RunConfig cfg = sim->config;
        if (sim->options.seed_override) {
            cfg.seed = *sim->options.seed_override;
            cfg.seed_given = true;
        }
        const double dt = sim->options.dt_override.value_or(cfg.resolved_dt());
        const leo3::SimGrid grid = leo3::SimGrid::from_horizon(cfg.grid.horizon, dt);

        leo3::PulseProgram pulse =
            cfg.pulse.variant == leo3::PulseVariant::Regular
                ? leo3::realize_regular(cfg.pulse.regular(), grid.horizon())
                : leo3::realize_random(
                      {cfg.pulse.regular(), cfg.pulse.a_tau, cfg.pulse.a_phi, cfg.seed},
                      grid.horizon());
        if (cfg.pulse.noise) pulse = leo3::apply_noise(pulse, cfg.dressing(cfg.seed));

        const auto coeffs = leo3::integrate_coeffs(cfg.system, cfg.env, pulse, grid);
        const auto leo = leo3::LeoStructure::for_kind(cfg.system.kind);
        const leo3::Vec3 psi = cfg.initial_state().normalized();

        leo3::FidelityCurve curve;
        if (cfg.method == leo3::Method::MasterEquation) {
            const auto result = leo3::me_propagate(psi * psi.adjoint(), cfg.system, cfg.env, leo,
                                                   pulse, coeffs, grid);
            curve = leo3::me_fidelity(psi, result);
        } else {
            curve = leo3::qsd_ensemble_fidelity(psi, cfg.system, cfg.env, leo, pulse, coeffs, grid,
                                                cfg.ensemble.n_traj, cfg.seed,
                                                sim->options.threads)
                        .fidelity;
        }
        *curve_out = new leo3_curve{std::move(curve)};
        return LEO3_OK;
    } catch (const std::exception& e) {
        sim->last_error = e.what();
        return classify(e);
    }
}

size_t leo3_curve_length(const leo3_curve* curve) {
    return curve ? curve->curve.t.size() : 0;
}

leo3_status leo3_curve_point(const leo3_curve* curve, size_t index, double* t_out,
                             double* fidelity_out, double* stderr_out) {
    if (!curve || index >= curve->curve.t.size()) return LEO3_ERR_INVALID_ARG;
    if (t_out) *t_out = curve->curve.t[index];
    if (fidelity_out) *fidelity_out = curve->curve.fidelity[index];
    if (stderr_out)
        *stderr_out = curve->curve.stderr.empty() ? 0.0 : curve->curve.stderr[index];
    return LEO3_OK;
}

void leo3_curve_destroy(leo3_curve* curve) { delete curve; }

leo3_status leo3_nv_level_gap(double b_z_mt, double* gap_ghz_out, int* warn_crossing_out) {
    try {
        const auto preset = leo3::nv_level_preset(b_z_mt);
        if (gap_ghz_out) *gap_ghz_out = preset.gap_ghz;
        if (warn_crossing_out) *warn_crossing_out = preset.level_crossing ? 1 : 0;
        return LEO3_OK;
    } catch (const std::exception&) {
        return LEO3_ERR_VALIDATION;
    }
}

void leo3_string_free(char* text) { std::free(text); }

}  // extern "C"
