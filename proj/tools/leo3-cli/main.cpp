// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Links only the public C API.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "leo3/leo3.h"

namespace {

struct SimHandle {
    leo3_sim* sim = nullptr;
    ~SimHandle() { leo3_sim_destroy(sim); }
};

int fail(const std::string& message, leo3_status status) {
    std::cerr << "error: " << message;
    if (!message.empty() && message.back() != '\n') std::cerr << '\n';
    return static_cast<int>(status);
}

std::string take(char* text) {
    std::string out = text ? text : "";
    leo3_string_free(text);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"leo3 - three-level open-system simulator with leakage-elimination pulses"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    double dt = 0.0;
    bool dt_set = false;
    int threads = 0;

    const auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "JSON config file");
        if (needs_config) opt->required();
        cmd->add_option("--out", out_dir, "output directory (default: out)");
        cmd->add_option("--seed", seed, "override the config seed")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--dt", dt, "override the integrator step")
            ->each([&](const std::string&) { dt_set = true; });
        cmd->add_option("--threads", threads, "worker threads (default: hardware)");
    };

    const char* commands[] = {"simulate",        "diagram",        "scan-phi0",
                              "scan-ratio",      "random-ensemble", "noisy-ensemble",
                              "equivalence-check", "validate"};
    const char* descriptions[] = {
        "fidelity dynamics for one configured scenario",
        "fidelity over a (duration, dark-time) grid",
        "readout fidelity vs pulse area",
        "readout fidelity vs duty ratio, with threshold detection",
        "ensemble average over randomized pulse sequences",
        "ensemble average over noise-dressed pulse sequences",
        "matched V-type / lambda-type pair plus its scalar reduction",
        "run the library invariant suite"};
    for (std::size_t i = 0; i < std::size(commands); ++i)
        add_common(app.add_subcommand(commands[i], descriptions[i]),
                   std::string(commands[i]) != "validate");
    app.add_subcommand("version", "print artifact and config-schema versions");

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    if (command == "version") {
        std::printf("leo3 %s (config schema %d)\n", leo3_version(), leo3_schema_version());
        return 0;
    }

    std::string config_text = "{}";
    if (!config_path.empty()) {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) return fail("cannot read config file " + config_path, LEO3_ERR_RUNTIME);
        std::ostringstream ss;
        ss << in.rdbuf();
        config_text = ss.str();
    }

    char* error = nullptr;
    SimHandle handle;
    handle.sim = leo3_sim_create(config_text.c_str(), &error);
    if (!handle.sim) return fail(take(error), LEO3_ERR_VALIDATION);

    if (seed_set) leo3_sim_override_seed(handle.sim, seed);
    if (threads > 0) leo3_sim_override_threads(handle.sim, threads);
    if (dt_set) {
        const leo3_status rc = leo3_sim_override_dt(handle.sim, dt);
        if (rc != LEO3_OK) return fail(leo3_sim_last_error(handle.sim), rc);
    }

    char* report = nullptr;
    const leo3_status rc = leo3_sim_dispatch(handle.sim, command.c_str(), out_dir.c_str(),
                                             &report);
    const std::string text = take(report);
    if (!text.empty()) std::cout << text;
    if (rc != LEO3_OK && text.empty())
        std::cerr << "error: " << leo3_sim_last_error(handle.sim) << '\n';
    return static_cast<int>(rc);
}
