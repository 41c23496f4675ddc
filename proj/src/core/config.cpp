// SPDX-License-Identifier: Apache-2.0
#include "core/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "core/rng.hpp"

namespace leo3 {

using nlohmann::json;

ScanRatioConfig::ScanRatioConfig() {
    for (int i = 1; i <= 20; ++i) ratios.push_back(0.05 * i);
}

std::vector<double> DiagramConfig::delta_grid() const {
    std::vector<double> grid(n_delta);
    for (std::size_t i = 0; i < n_delta; ++i)
        grid[i] = n_delta == 1 ? delta_min
                               : delta_min + (delta_max - delta_min) *
                                                 static_cast<double>(i) /
                                                 static_cast<double>(n_delta - 1);
    return grid;
}

std::vector<double> DiagramConfig::dark_grid() const {
    std::vector<double> grid(n_dark);
    for (std::size_t i = 0; i < n_dark; ++i)
        grid[i] = n_dark == 1 ? dark_min
                              : dark_min + (dark_max - dark_min) * static_cast<double>(i) /
                                               static_cast<double>(n_dark - 1);
    return grid;
}

bool RunConfig::operator==(const RunConfig& other) const {
    return system.kind == other.system.kind && system.omega == other.system.omega &&
           system.couplings == other.system.couplings && env.Gamma == other.env.Gamma &&
           env.gamma == other.env.gamma && env.Omega == other.env.Omega &&
           psi0 == other.psi0 && pulse == other.pulse && grid == other.grid &&
           method == other.method && ensemble == other.ensemble && diagram == other.diagram &&
           scan_phi0 == other.scan_phi0 && scan_ratio == other.scan_ratio &&
           equivalence == other.equivalence && seed == other.seed &&
           seed_given == other.seed_given && output == other.output &&
           export_coeffs == other.export_coeffs && export_pulse == other.export_pulse;
}

Vec3 RunConfig::initial_state() const {
    if (!psi0) return default_initial_state(system.kind);
    const auto& a = *psi0;
    return Vec3(Complex(a[0], a[1]), Complex(a[2], a[3]), Complex(a[4], a[5]));
}

double RunConfig::resolved_dt() const {
    return grid.dt ? *grid.dt : auto_dt(pulse.tau, pulse.delta);
}

NoiseDressing RunConfig::dressing(std::uint64_t seed_value) const {
    if (!pulse.noise) throw ValidationError({"config has no pulse.noise block"});
    const auto& n = *pulse.noise;
    return NoiseDressing{n.mode, n.w, n.dist, n.resample_interval.value_or(pulse.delta / 10.0),
                         seed_value};
}

namespace {

struct Reader {
    std::vector<std::string>& errors;

    void fail(const std::string& msg) { errors.push_back(msg); }

    void check_keys(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
        for (const auto& item : obj.items()) {
            bool known = false;
            for (const char* k : allowed)
                if (item.key() == k) known = true;
            if (!known) fail("unknown key '" + item.key() + "' in " + path);
        }
    }

    bool number(const json& obj, const std::string& path, const char* key, double& out) {
        if (!obj.contains(key)) return false;
        if (!obj[key].is_number()) {
            fail(path + "." + key + " must be a number");
            return false;
        }
        out = obj[key].get<double>();
        return true;
    }

    bool unsigned_int(const json& obj, const std::string& path, const char* key,
                      std::uint64_t& out) {
        if (!obj.contains(key)) return false;
        if (!obj[key].is_number_unsigned()) {
            fail(path + "." + key + " must be a non-negative integer");
            return false;
        }
        out = obj[key].get<std::uint64_t>();
        return true;
    }

    bool size(const json& obj, const std::string& path, const char* key, std::size_t& out) {
        std::uint64_t v = 0;
        if (!unsigned_int(obj, path, key, v)) return false;
        out = static_cast<std::size_t>(v);
        return true;
    }

    bool boolean(const json& obj, const std::string& path, const char* key, bool& out) {
        if (!obj.contains(key)) return false;
        if (!obj[key].is_boolean()) {
            fail(path + "." + key + " must be a boolean");
            return false;
        }
        out = obj[key].get<bool>();
        return true;
    }

    bool text(const json& obj, const std::string& path, const char* key, std::string& out) {
        if (!obj.contains(key)) return false;
        if (!obj[key].is_string()) {
            fail(path + "." + key + " must be a string");
            return false;
        }
        out = obj[key].get<std::string>();
        return true;
    }

    bool number_array(const json& obj, const std::string& path, const char* key,
                      std::vector<double>& out) {
        if (!obj.contains(key)) return false;
        if (!obj[key].is_array()) {
            fail(path + "." + key + " must be an array of numbers");
            return false;
        }
        std::vector<double> v;
        for (const auto& e : obj[key]) {
            if (!e.is_number()) {
                fail(path + "." + key + " must contain numbers only");
                return false;
            }
            v.push_back(e.get<double>());
        }
        out = std::move(v);
        return true;
    }

    /// Accepts a number or the literal string "auto".
    void number_or_auto(const json& obj, const std::string& path, const char* key,
                        std::optional<double>& out) {
        if (!obj.contains(key)) return;
        if (obj[key].is_string()) {
            if (obj[key].get<std::string>() != "auto")
                fail(path + "." + key + " must be a number or \"auto\"");
            else
                out.reset();
            return;
        }
        double v = 0.0;
        if (number(obj, path, key, v)) out = v;
    }

    void collect(const std::function<void()>& validator) {
        try {
            validator();
        } catch (const ValidationError& e) {
            for (const auto& issue : e.issues()) errors.push_back(issue);
        }
    }
};

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError({std::string("malformed JSON: ") + e.what()});
    }
    if (!j.is_object()) throw ValidationError({"config root must be a JSON object"});

    std::vector<std::string> errors;
    Reader r{errors};
    RunConfig cfg;

    r.check_keys(j, "config",
                 {"schema_version", "system", "env", "psi0", "pulse", "grid", "method", "ensemble",
                  "diagram", "scan_phi0", "scan_ratio", "equivalence", "seed", "output",
                  "export_coeffs", "export_pulse"});

    std::uint64_t schema = kConfigSchemaVersion;
    if (r.unsigned_int(j, "config", "schema_version", schema) &&
        schema != kConfigSchemaVersion)
        r.fail("schema_version " + std::to_string(schema) + " is not supported (expected " +
               std::to_string(kConfigSchemaVersion) + ")");

    if (j.contains("system")) {
        const auto& s = j["system"];
        if (!s.is_object()) {
            r.fail("system must be an object");
        } else {
            r.check_keys(s, "system", {"kind", "omega", "couplings"});
            std::string kind;
            if (r.text(s, "system", "kind", kind)) {
                if (kind == "V")
                    cfg.system.kind = SystemKind::VType;
                else if (kind == "lambda")
                    cfg.system.kind = SystemKind::LambdaType;
                else
                    r.fail("system.kind must be \"V\" or \"lambda\"");
            }
            std::vector<double> omega, couplings;
            if (r.number_array(s, "system", "omega", omega)) {
                if (omega.size() != 3)
                    r.fail("system.omega must have exactly 3 entries");
                else
                    std::copy(omega.begin(), omega.end(), cfg.system.omega.begin());
            }
            if (r.number_array(s, "system", "couplings", couplings)) {
                if (couplings.size() != 2)
                    r.fail("system.couplings must have exactly 2 entries");
                else
                    std::copy(couplings.begin(), couplings.end(), cfg.system.couplings.begin());
            }
        }
    }

    if (j.contains("env")) {
        const auto& e = j["env"];
        if (!e.is_object()) {
            r.fail("env must be an object");
        } else {
            r.check_keys(e, "env", {"Gamma", "gamma", "Omega"});
            r.number(e, "env", "Gamma", cfg.env.Gamma);
            r.number(e, "env", "gamma", cfg.env.gamma);
            r.number(e, "env", "Omega", cfg.env.Omega);
        }
    }

    if (j.contains("psi0")) {
        std::vector<double> v;
        if (r.number_array(j, "config", "psi0", v)) {
            if (v.size() != 6) {
                r.fail("psi0 must have 6 entries (re, im for each of the 3 levels)");
            } else {
                std::array<double, 6> a{};
                std::copy(v.begin(), v.end(), a.begin());
                cfg.psi0 = a;
                double norm = 0.0;
                for (double x : a) norm += x * x;
                if (!(norm > 0.0) || !std::isfinite(norm))
                    r.fail("psi0 must be a nonzero finite state");
            }
        }
    }

    if (j.contains("pulse")) {
        const auto& p = j["pulse"];
        if (!p.is_object()) {
            r.fail("pulse must be an object");
        } else {
            r.check_keys(p, "pulse",
                         {"variant", "tau", "delta", "phi0", "a_tau", "a_phi", "noise"});
            std::string variant;
            if (r.text(p, "pulse", "variant", variant)) {
                if (variant == "regular")
                    cfg.pulse.variant = PulseVariant::Regular;
                else if (variant == "random")
                    cfg.pulse.variant = PulseVariant::Random;
                else
                    r.fail("pulse.variant must be \"regular\" or \"random\"");
            }
            r.number(p, "pulse", "tau", cfg.pulse.tau);
            r.number(p, "pulse", "delta", cfg.pulse.delta);
            r.number(p, "pulse", "phi0", cfg.pulse.phi0);
            r.number(p, "pulse", "a_tau", cfg.pulse.a_tau);
            r.number(p, "pulse", "a_phi", cfg.pulse.a_phi);
            if (p.contains("noise")) {
                const auto& n = p["noise"];
                if (!n.is_object()) {
                    r.fail("pulse.noise must be an object");
                } else {
                    r.check_keys(n, "pulse.noise", {"mode", "w", "dist", "resample_interval"});
                    NoiseConfig nc;
                    std::string mode, dist;
                    if (r.text(n, "pulse.noise", "mode", mode)) {
                        if (mode == "global")
                            nc.mode = NoiseMode::Global;
                        else if (mode == "local")
                            nc.mode = NoiseMode::Local;
                        else
                            r.fail("pulse.noise.mode must be \"global\" or \"local\"");
                    }
                    if (r.text(n, "pulse.noise", "dist", dist)) {
                        if (dist == "gaussian")
                            nc.dist = NoiseDist::Gaussian;
                        else if (dist == "uniform")
                            nc.dist = NoiseDist::Uniform;
                        else
                            r.fail("pulse.noise.dist must be \"gaussian\" or \"uniform\"");
                    }
                    r.number(n, "pulse.noise", "w", nc.w);
                    r.number_or_auto(n, "pulse.noise", "resample_interval",
                                     nc.resample_interval);
                    cfg.pulse.noise = nc;
                }
            }
        }
    }

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (!g.is_object()) {
            r.fail("grid must be an object");
        } else {
            r.check_keys(g, "grid", {"horizon", "dt"});
            r.number(g, "grid", "horizon", cfg.grid.horizon);
            r.number_or_auto(g, "grid", "dt", cfg.grid.dt);
        }
    }

    std::string method;
    if (r.text(j, "config", "method", method)) {
        if (method == "me")
            cfg.method = Method::MasterEquation;
        else if (method == "qsd")
            cfg.method = Method::Qsd;
        else
            r.fail("method must be \"me\" or \"qsd\"");
    }

    if (j.contains("ensemble")) {
        const auto& e = j["ensemble"];
        if (!e.is_object()) {
            r.fail("ensemble must be an object");
        } else {
            r.check_keys(e, "ensemble", {"n_traj", "n_realizations"});
            r.size(e, "ensemble", "n_traj", cfg.ensemble.n_traj);
            r.size(e, "ensemble", "n_realizations", cfg.ensemble.n_realizations);
        }
    }

    if (j.contains("diagram")) {
        const auto& d = j["diagram"];
        if (!d.is_object()) {
            r.fail("diagram must be an object");
        } else {
            r.check_keys(d, "diagram",
                         {"delta_min", "delta_max", "n_delta", "dark_min", "dark_max", "n_dark",
                          "t_read", "phi0"});
            r.number(d, "diagram", "delta_min", cfg.diagram.delta_min);
            r.number(d, "diagram", "delta_max", cfg.diagram.delta_max);
            r.size(d, "diagram", "n_delta", cfg.diagram.n_delta);
            r.number(d, "diagram", "dark_min", cfg.diagram.dark_min);
            r.number(d, "diagram", "dark_max", cfg.diagram.dark_max);
            r.size(d, "diagram", "n_dark", cfg.diagram.n_dark);
            r.number(d, "diagram", "t_read", cfg.diagram.t_read);
            r.number(d, "diagram", "phi0", cfg.diagram.phi0);
        }
    }

    if (j.contains("scan_phi0")) {
        const auto& s = j["scan_phi0"];
        if (!s.is_object()) {
            r.fail("scan_phi0 must be an object");
        } else {
            r.check_keys(s, "scan_phi0", {"values", "t_read"});
            r.number_array(s, "scan_phi0", "values", cfg.scan_phi0.values);
            r.number(s, "scan_phi0", "t_read", cfg.scan_phi0.t_read);
        }
    }

    if (j.contains("scan_ratio")) {
        const auto& s = j["scan_ratio"];
        if (!s.is_object()) {
            r.fail("scan_ratio must be an object");
        } else {
            r.check_keys(s, "scan_ratio", {"ratios", "t_read", "epsilon"});
            r.number_array(s, "scan_ratio", "ratios", cfg.scan_ratio.ratios);
            r.number(s, "scan_ratio", "t_read", cfg.scan_ratio.t_read);
            r.number(s, "scan_ratio", "epsilon", cfg.scan_ratio.epsilon);
        }
    }

    if (j.contains("equivalence")) {
        const auto& e = j["equivalence"];
        if (!e.is_object()) {
            r.fail("equivalence must be an object");
        } else {
            r.check_keys(e, "equivalence", {"mu", "horizon"});
            r.number(e, "equivalence", "mu", cfg.equivalence.mu);
            r.number(e, "equivalence", "horizon", cfg.equivalence.horizon);
        }
    }

    cfg.seed_given = r.unsigned_int(j, "config", "seed", cfg.seed);
    r.text(j, "config", "output", cfg.output);
    r.boolean(j, "config", "export_coeffs", cfg.export_coeffs);
    r.boolean(j, "config", "export_pulse", cfg.export_pulse);

    // Domain validation (every nested spec), collected into the same list.
    r.collect([&] { cfg.system.validate(); });
    r.collect([&] { cfg.env.validate(); });
    r.collect([&] { cfg.pulse.regular().validate(); });
    r.collect([&] {
        if (cfg.pulse.variant == PulseVariant::Random)
            RandomPulseSpec{cfg.pulse.regular(), cfg.pulse.a_tau, cfg.pulse.a_phi, 0}.validate();
    });
    r.collect([&] {
        if (cfg.pulse.noise) cfg.dressing(0).validate(cfg.pulse.delta);
    });
    r.collect([&] {
        if (!(cfg.grid.horizon > 0.0) || !std::isfinite(cfg.grid.horizon))
            throw ValidationError({"grid.horizon must be finite and > 0"});
        if (cfg.grid.dt && (!(*cfg.grid.dt > 0.0) || !std::isfinite(*cfg.grid.dt)))
            throw ValidationError({"grid.dt must be finite and > 0"});
    });
    r.collect([&] {
        if (cfg.ensemble.n_traj < 2)
            throw ValidationError({"ensemble.n_traj must be at least 2"});
        if (cfg.ensemble.n_realizations < 2)
            throw ValidationError({"ensemble.n_realizations must be at least 2"});
    });

    const bool stochastic = cfg.method == Method::Qsd ||
                            cfg.pulse.variant == PulseVariant::Random ||
                            cfg.pulse.noise.has_value();
    if (stochastic && !cfg.seed_given)
        r.fail("seed is required for stochastic runs (qsd method, random pulses, or noise "
               "dressing)");

    if (!errors.empty()) throw ValidationError(std::move(errors));
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["system"] = {{"kind", to_string(cfg.system.kind)},
                   {"omega", cfg.system.omega},
                   {"couplings", cfg.system.couplings}};
    j["env"] = {{"Gamma", cfg.env.Gamma}, {"gamma", cfg.env.gamma}, {"Omega", cfg.env.Omega}};
    if (cfg.psi0) j["psi0"] = *cfg.psi0;
    json pulse = {{"variant", cfg.pulse.variant == PulseVariant::Regular ? "regular" : "random"},
                  {"tau", cfg.pulse.tau},
                  {"delta", cfg.pulse.delta},
                  {"phi0", cfg.pulse.phi0},
                  {"a_tau", cfg.pulse.a_tau},
                  {"a_phi", cfg.pulse.a_phi}};
    if (cfg.pulse.noise) {
        const auto& n = *cfg.pulse.noise;
        json noise = {{"mode", n.mode == NoiseMode::Global ? "global" : "local"},
                      {"w", n.w},
                      {"dist", n.dist == NoiseDist::Gaussian ? "gaussian" : "uniform"}};
        if (n.resample_interval)
            noise["resample_interval"] = *n.resample_interval;
        else
            noise["resample_interval"] = "auto";
        pulse["noise"] = noise;
    }
    j["pulse"] = pulse;
    j["grid"] = {{"horizon", cfg.grid.horizon}};
    if (cfg.grid.dt)
        j["grid"]["dt"] = *cfg.grid.dt;
    else
        j["grid"]["dt"] = "auto";
    j["method"] = cfg.method == Method::MasterEquation ? "me" : "qsd";
    j["ensemble"] = {{"n_traj", cfg.ensemble.n_traj},
                     {"n_realizations", cfg.ensemble.n_realizations}};
    j["diagram"] = {{"delta_min", cfg.diagram.delta_min}, {"delta_max", cfg.diagram.delta_max},
                    {"n_delta", cfg.diagram.n_delta},     {"dark_min", cfg.diagram.dark_min},
                    {"dark_max", cfg.diagram.dark_max},   {"n_dark", cfg.diagram.n_dark},
                    {"t_read", cfg.diagram.t_read},       {"phi0", cfg.diagram.phi0}};
    j["scan_phi0"] = {{"values", cfg.scan_phi0.values}, {"t_read", cfg.scan_phi0.t_read}};
    j["scan_ratio"] = {{"ratios", cfg.scan_ratio.ratios},
                       {"t_read", cfg.scan_ratio.t_read},
                       {"epsilon", cfg.scan_ratio.epsilon}};
    j["equivalence"] = {{"mu", cfg.equivalence.mu}, {"horizon", cfg.equivalence.horizon}};
    if (cfg.seed_given) j["seed"] = cfg.seed;
    j["output"] = cfg.output;
    j["export_coeffs"] = cfg.export_coeffs;
    j["export_pulse"] = cfg.export_pulse;
    return j.dump(2);
}

std::string config_hash(const RunConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(serialize_config(cfg))));
    return buf;
}

}  // namespace leo3
