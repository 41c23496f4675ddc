// SPDX-License-Identifier: Apache-2.0
#include "core/selftest.hpp"

#include <cmath>
#include <cstdio>

#include "core/experiments.hpp"
#include "core/propagator.hpp"
#include "core/rng.hpp"

namespace leo3 {

namespace {

struct Suite {
    std::vector<PropertyResult> results;
    std::uint64_t seed;
    int threads;

    void check(const std::string& name, bool pass, const std::string& detail) {
        results.push_back({name, pass, detail});
    }

    template <class Fn>
    void property(const std::string& name, Fn&& fn) {
        try {
            fn(name);
        } catch (const std::exception& e) {
            check(name, false, std::string("exception: ") + e.what());
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const SystemSpec kDemoSystem{SystemKind::VType, {1.0, 0.8, 0.0}, {1.0, 0.5}};
const EnvSpec kDemoEnv{1.0, 1.0, 0.5};
const RegularPulseSpec kDemoPulse{0.02, 0.012, 1.0};

}  // namespace

std::vector<PropertyResult> run_validation_suite(std::uint64_t seed, int threads) {
    Suite s{{}, seed, threads};

    s.property("pulse segment exactness", [&](const std::string& name) {
        const auto program = realize_regular(kDemoPulse, 40.0);
        double worst = 0.0;
        for (int n = 1; n <= 50; ++n) {
            const double err = std::abs(program.integral_to(n * kDemoPulse.tau) -
                                        n * kDemoPulse.phi0) /
                               static_cast<double>(n);
            worst = std::max(worst, err);
        }
        s.check(name, worst <= 1e-12, "max per-period error " + fmt(worst));
    });

    s.property("noise dressing preserves the mean pulse integral", [&](const std::string& name) {
        const double horizon = 8.0;
        const auto program = realize_regular(kDemoPulse, horizon);
        const double reference = program.integral_to(horizon);
        const NoiseDressing base{NoiseMode::Global, 1.0, NoiseDist::Gaussian,
                                 kDemoPulse.delta / 10.0, 0};
        const std::size_t n = 1000;
        double sum = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            NoiseDressing d = base;
            d.seed = RngStream(seed, "selftest.noise", i).next_u64();
            const double v = apply_noise(program, d).integral_to(horizon);
            sum += v;
            sq += v * v;
        }
        const double mean = sum / n;
        const double sem = std::sqrt(std::max(0.0, (sq - n * mean * mean) / (n - 1.0)) / n);
        const double dev = std::abs(mean - reference);
        s.check(name, dev <= 3.0 * sem + 1e-12,
                "deviation " + fmt(dev) + " vs 3*SEM " + fmt(3.0 * sem));
    });

    s.property("colored noise covariance matches the kernel", [&](const std::string& name) {
        const SimGrid grid = SimGrid::from_horizon(20.0, 0.01);
        std::vector<NoisePath> paths(3000);
        for (std::size_t i = 0; i < paths.size(); ++i)
            paths[i] = generate_ou_path(kDemoEnv, grid, seed, i);
        bool pass = true;
        std::string detail;
        for (double lag : {0.0, 0.5, 1.0, 2.0}) {
            const auto est = empirical_covariance(paths, lag);
            const Complex expected = kDemoEnv.alpha(lag, 0.0);
            const bool ok =
                std::abs(est.mean.real() - expected.real()) <= 3.0 * est.stderr_re + 1e-12 &&
                std::abs(est.mean.imag() - expected.imag()) <= 3.0 * est.stderr_im + 1e-12;
            if (!ok) pass = false;
            detail += "lag " + fmt(lag) + (ok ? " ok; " : " FAIL; ");
        }
        for (double lag : {0.0, 1.0}) {
            const auto est = empirical_pseudo_covariance(paths, lag);
            const bool ok = std::abs(est.mean.real()) <= 3.0 * est.stderr_re + 1e-12 &&
                            std::abs(est.mean.imag()) <= 3.0 * est.stderr_im + 1e-12;
            if (!ok) pass = false;
            detail += "pseudo " + fmt(lag) + (ok ? " ok; " : " FAIL; ");
        }
        s.check(name, pass, detail);
    });

    s.property("zero coupling keeps fidelity at one exactly", [&](const std::string& name) {
        const EnvSpec closed{0.0, 1.0, 0.5};
        const SimGrid grid =
            SimGrid::from_horizon(10.0, auto_dt(kDemoPulse.tau, kDemoPulse.delta));
        const auto pulse = realize_regular(kDemoPulse, grid.horizon());
        const auto coeffs = integrate_coeffs(kDemoSystem, closed, pulse, grid);
        double worst = 0.0;
        for (const auto& w : coeffs.node_values)
            worst = std::max({worst, std::abs(w[0]), std::abs(w[1])});

        const Vec3 psi = default_initial_state(kDemoSystem.kind);
        const auto me = me_propagate(psi * psi.adjoint(), kDemoSystem, closed,
                                     LeoStructure::for_kind(kDemoSystem.kind), pulse, coeffs, grid);
        const auto curve = me_fidelity(psi, me);
        for (double f : curve.fidelity) worst = std::max(worst, std::abs(f - 1.0));

        const auto qsd = qsd_ensemble_fidelity(psi, kDemoSystem, closed,
                                               LeoStructure::for_kind(kDemoSystem.kind), pulse,
                                               coeffs, grid, 8, seed, threads);
        for (double f : qsd.fidelity.fidelity) worst = std::max(worst, std::abs(f - 1.0));
        s.check(name, worst == 0.0, "worst deviation " + fmt(worst));
    });

    s.property("master equation conserves trace and hermiticity", [&](const std::string& name) {
        RunOptions opts;
        opts.threads = threads;
        opts.confirm_dt = true;
        const SimGrid grid = SimGrid::from_horizon(40.0, auto_dt(kDemoPulse.tau, kDemoPulse.delta));
        const auto pulse = realize_regular(kDemoPulse, grid.horizon());
        const auto readout = me_readout(kDemoSystem, kDemoEnv,
                                        default_initial_state(kDemoSystem.kind), pulse, 40.0, opts);
        const bool pass = readout.diag.max_trace_error <= 1e-8 &&
                          readout.diag.max_hermiticity_error <= 1e-10 &&
                          readout.diag.min_eigenvalue >= -1e-6 &&
                          std::abs(readout.curve.fidelity.front() - 1.0) <= 1e-12 &&
                          readout.dt_confirm_drift <= kDtConfirmTolerance;
        s.check(name, pass,
                "trace " + fmt(readout.diag.max_trace_error) + ", herm " +
                    fmt(readout.diag.max_hermiticity_error) + ", min eig " +
                    fmt(readout.diag.min_eigenvalue) + ", dt drift " +
                    fmt(readout.dt_confirm_drift));
    });

    s.property("fidelity is invariant under a global level shift", [&](const std::string& name) {
        SystemSpec shifted = kDemoSystem;
        for (auto& w : shifted.omega) w += 1.0;
        const SimGrid grid =
            SimGrid::from_horizon(10.0, auto_dt(kDemoPulse.tau, kDemoPulse.delta));
        const auto pulse = realize_regular(kDemoPulse, grid.horizon());
        const Vec3 psi = default_initial_state(kDemoSystem.kind);
        const auto a = me_fidelity(psi, me_propagate(psi * psi.adjoint(), kDemoSystem, kDemoEnv,
                                                     LeoStructure::for_kind(kDemoSystem.kind),
                                                     pulse,
                                                     integrate_coeffs(kDemoSystem, kDemoEnv, pulse,
                                                                      grid),
                                                     grid));
        const auto b = me_fidelity(psi, me_propagate(psi * psi.adjoint(), shifted, kDemoEnv,
                                                     LeoStructure::for_kind(shifted.kind), pulse,
                                                     integrate_coeffs(shifted, kDemoEnv, pulse,
                                                                      grid),
                                                     grid));
        double worst = 0.0;
        for (std::size_t i = 0; i < a.fidelity.size(); ++i)
            worst = std::max(worst, std::abs(a.fidelity[i] - b.fidelity[i]));
        s.check(name, worst <= 1e-10, "max curve difference " + fmt(worst));
    });

    s.property("closed coefficient ODEs match the 2-D quadrature", [&](const std::string& name) {
        const SimGrid grid = SimGrid::from_horizon(3.0, 0.0005);
        const auto pulse =
            realize_regular({kDemoPulse.tau, kDemoPulse.delta, 0.0}, grid.horizon());
        const auto fast = integrate_coeffs(kDemoSystem, kDemoEnv, pulse, grid);
        const auto slow = grid_oracle_coeffs(kDemoSystem, kDemoEnv, pulse, grid);
        double scale = 0.0, worst = 0.0;
        for (std::size_t i = 0; i < fast.node_values.size(); ++i)
            for (int k = 0; k < 2; ++k) {
                scale = std::max(scale, std::abs(fast.node_values[i][k]));
                worst = std::max(worst,
                                 std::abs(fast.node_values[i][k] - slow.node_values[i][k]));
            }
        s.check(name, worst <= 1e-3 * scale,
                "max deviation " + fmt(worst) + " vs bound " + fmt(1e-3 * scale));
    });

    s.property("trajectory ensemble agrees with the master equation",
               [&](const std::string& name) {
                   const SimGrid grid = SimGrid::from_horizon(
                       10.0, auto_dt(kDemoPulse.tau, kDemoPulse.delta));
                   const auto pulse = realize_regular(kDemoPulse, grid.horizon());
                   const auto coeffs = integrate_coeffs(kDemoSystem, kDemoEnv, pulse, grid);
                   const Vec3 psi = default_initial_state(kDemoSystem.kind);
                   const auto leo = LeoStructure::for_kind(kDemoSystem.kind);
                   const auto me = me_fidelity(
                       psi, me_propagate(psi * psi.adjoint(), kDemoSystem, kDemoEnv, leo, pulse,
                                         coeffs, grid));
                   const auto qsd = qsd_ensemble_fidelity(psi, kDemoSystem, kDemoEnv, leo, pulse,
                                                          coeffs, grid, 400, seed, threads);
                   double worst_excess = 0.0;
                   for (std::size_t i = 0; i < me.fidelity.size(); ++i) {
                       const double tol =
                           std::max(0.01, 3.0 * qsd.fidelity.stderr[i]);
                       worst_excess = std::max(worst_excess,
                                               std::abs(me.fidelity[i] -
                                                        qsd.fidelity.fidelity[i]) -
                                                   tol);
                   }
                   s.check(name, worst_excess <= 0.0,
                           "worst excess over tolerance " + fmt(worst_excess));
               });

    s.property("V and lambda scenarios give identical fidelity", [&](const std::string& name) {
        const SimGrid grid =
            SimGrid::from_horizon(10.0, auto_dt(kDemoPulse.tau, kDemoPulse.delta));
        const auto pulse = realize_regular(kDemoPulse, grid.horizon());
        const auto pair = v_lambda_equivalent_fidelity(kDemoEnv, pulse, grid, M_SQRT1_2);
        const auto scalar = equivalence_riccati_fidelity(kDemoEnv, pulse, grid, M_SQRT1_2);
        double worst = 0.0;
        for (std::size_t i = 0; i < pair.v_curve.fidelity.size(); ++i) {
            worst = std::max(worst, std::abs(pair.v_curve.fidelity[i] -
                                             pair.lambda_curve.fidelity[i]));
            worst = std::max(worst,
                             std::abs(pair.v_curve.fidelity[i] - scalar.fidelity[i]));
        }
        s.check(name, worst <= 1e-6, "max deviation " + fmt(worst));
    });

    s.property("seeded realizations are deterministic", [&](const std::string& name) {
        const RandomPulseSpec spec{kDemoPulse, 0.4, 0.9, seed};
        const bool pulses = realize_random(spec, 10.0) == realize_random(spec, 10.0);
        const SimGrid grid = SimGrid::from_horizon(5.0, 0.01);
        const auto a = generate_ou_path(kDemoEnv, grid, seed, 7);
        const auto b = generate_ou_path(kDemoEnv, grid, seed, 7);
        const bool noise = a.samples == b.samples;
        s.check(name, pulses && noise,
                std::string(pulses ? "pulse ok" : "pulse MISMATCH") + ", " +
                    (noise ? "noise ok" : "noise MISMATCH"));
    });

    return s.results;
}

}  // namespace leo3
