// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/coeffs.hpp"
#include "scenarios.hpp"

using namespace leo3;
using namespace leo3::test;

namespace {

double relative_deviation(const CoeffSeries& a, const CoeffSeries& b) {
    double scale = 0.0, worst = 0.0;
    REQUIRE(a.node_values.size() == b.node_values.size());
    for (std::size_t i = 0; i < a.node_values.size(); ++i)
        for (int k = 0; k < 2; ++k) {
            scale = std::max(scale, std::abs(a.node_values[i][k]));
            worst = std::max(worst, std::abs(a.node_values[i][k] - b.node_values[i][k]));
        }
    REQUIRE(scale > 0.0);
    return worst / scale;
}

PulseProgram quiet_pulse(double horizon) {
    return realize_regular({kBenchPulse.tau, kBenchPulse.delta, 0.0}, horizon);
}

}  // namespace

TEST_CASE("coefficients start at zero with the stated initial slope") {
    const SimGrid grid = SimGrid::from_horizon(0.1, 0.001);
    const auto coeffs = integrate_coeffs(kBenchSystem, kBenchEnv, quiet_pulse(grid.horizon()),
                                         grid);
    CHECK(coeffs.node_values[0][0] == Complex(0.0));
    CHECK(coeffs.node_values[0][1] == Complex(0.0));
    // dW_k/dt at zero is Gamma gamma g_k / 2 = (0.5, 0.25)
    const double h = grid.dt;
    CHECK(std::abs(coeffs.node_values[1][0] / h - Complex(0.5, 0.0)) < 5e-3);
    CHECK(std::abs(coeffs.node_values[1][1] / h - Complex(0.25, 0.0)) < 5e-3);
}

TEST_CASE("zero environment coupling pins the coefficients at zero") {
    const SimGrid grid = SimGrid::from_horizon(5.0, 0.001);
    const EnvSpec closed{0.0, 1.0, 0.5};
    const auto pulse = realize_regular(kBenchPulse, grid.horizon());
    const auto coeffs = integrate_coeffs(kBenchSystem, closed, pulse, grid);
    for (const auto& w : coeffs.node_values) {
        CHECK(std::abs(w[0]) <= 1e-12);
        CHECK(std::abs(w[1]) <= 1e-12);
    }
}

TEST_CASE("closed ODE matches the 2-D grid quadrature without a pulse") {
    const SimGrid grid = SimGrid::from_horizon(5.0, 0.001);
    const auto pulse = quiet_pulse(grid.horizon());
    const auto fast = integrate_coeffs(kBenchSystem, kBenchEnv, pulse, grid);
    const auto slow = grid_oracle_coeffs(kBenchSystem, kBenchEnv, pulse, grid);
    CHECK(relative_deviation(fast, slow) <= 1e-3);
    CHECK(slow.node_values[0][0] == Complex(0.0));
}

TEST_CASE("closed ODE matches the 2-D grid quadrature under the benchmark pulse") {
    const SimGrid grid = SimGrid::from_horizon(3.0, 0.0005);
    const auto pulse = realize_regular(kBenchPulse, grid.horizon());
    const auto fast = integrate_coeffs(kBenchSystem, kBenchEnv, pulse, grid);
    const auto slow = grid_oracle_coeffs(kBenchSystem, kBenchEnv, pulse, grid);
    CHECK(relative_deviation(fast, slow) <= 1e-3);
}

TEST_CASE("closed ODE matches the 2-D grid quadrature for a lambda system") {
    const SimGrid grid = SimGrid::from_horizon(5.0, 0.001);
    const auto pulse = realize_regular({0.1, 0.06, 0.5}, grid.horizon());
    const auto fast = integrate_coeffs(kLambdaBench, kBenchEnv, pulse, grid);
    const auto slow = grid_oracle_coeffs(kLambdaBench, kBenchEnv, pulse, grid);
    CHECK(relative_deviation(fast, slow) <= 1e-3);
}

TEST_CASE("step halving converges at fourth order for constant drive") {
    // full-duty pulse: c(t) is a global constant
    const RegularPulseSpec always_on{0.5, 0.5, 0.5};
    const auto run = [&](double dt) {
        const SimGrid grid = SimGrid::from_horizon(2.0, dt);
        return integrate_coeffs(kBenchSystem, kBenchEnv,
                                realize_regular(always_on, grid.horizon()), grid);
    };
    const auto reference = run(0.00125);
    const auto error = [&](const CoeffSeries& s) {
        double worst = 0.0;
        const std::size_t stride = (reference.node_values.size() - 1) / (s.node_values.size() - 1);
        for (std::size_t i = 0; i < s.node_values.size(); ++i)
            for (int k = 0; k < 2; ++k)
                worst = std::max(worst, std::abs(s.node_values[i][k] -
                                                 reference.node_values[i * stride][k]));
        return worst;
    };
    const double e1 = error(run(0.02));
    const double e2 = error(run(0.01));
    CHECK(e1 / e2 > 8.0);
    CHECK(e1 / e2 < 32.0);
}

TEST_CASE("step halving decreases the error for a piecewise drive") {
    const auto run = [&](double dt) {
        const SimGrid grid = SimGrid::from_horizon(2.0, dt);
        return integrate_coeffs(kBenchSystem, kBenchEnv,
                                realize_regular(kBenchPulse, grid.horizon()), grid);
    };
    const auto reference = run(0.0001);
    const auto error = [&](const CoeffSeries& s) {
        double worst = 0.0;
        const std::size_t stride = (reference.node_values.size() - 1) / (s.node_values.size() - 1);
        for (std::size_t i = 0; i < s.node_values.size(); ++i)
            for (int k = 0; k < 2; ++k)
                worst = std::max(worst, std::abs(s.node_values[i][k] -
                                                 reference.node_values[i * stride][k]));
        return worst;
    };
    const double e1 = error(run(0.0008));
    const double e2 = error(run(0.0004));
    CHECK(e2 < e1);
}

TEST_CASE("stronger pulse areas suppress the coefficients monotonically") {
    double previous = std::numeric_limits<double>::infinity();
    for (const double phi0 : {0.0, 0.4, 0.7, 1.0}) {
        const SimGrid grid = SimGrid::from_horizon(10.0, 0.0002);
        const auto pulse =
            realize_regular({kBenchPulse.tau, kBenchPulse.delta, phi0}, grid.horizon());
        const auto coeffs = integrate_coeffs(kBenchSystem, kBenchEnv, pulse, grid);
        const double avg = coeffs.mean_abs(0);
        CHECK(avg <= previous * (1.0 + 1e-9));
        previous = avg;
    }
}

TEST_CASE("pulse integral diagnostic") {
    const SimGrid grid = SimGrid::from_horizon(5.0, 0.001);

    SUBCASE("no pulse: dressed coefficients equal the raw ones") {
        const auto pulse = quiet_pulse(grid.horizon());
        const auto coeffs = integrate_coeffs(kBenchSystem, kBenchEnv, pulse, grid);
        const auto diag = pulse_integral_diagnostic(coeffs, pulse);
        for (std::size_t i = 0; i < coeffs.node_values.size(); ++i) {
            CHECK(diag.pulse_integral[i] == 0.0);
            CHECK(diag.dressed[i][0] == coeffs.node_values[i][0]);
        }
        CHECK(diag.max_abs[0] == coeffs.max_abs(0));
    }

    SUBCASE("integral checkpoints and dressed magnitude ordering") {
        const auto pulse = realize_regular(kBenchPulse, grid.horizon());
        const auto coeffs = integrate_coeffs(kBenchSystem, kBenchEnv, pulse, grid);
        const auto diag = pulse_integral_diagnostic(coeffs, pulse);
        const auto node = [&](double t) {
            return static_cast<std::size_t>(std::llround(t / grid.dt));
        };
        for (int n = 1; n <= 4; ++n)
            CHECK(diag.pulse_integral[node(n * kBenchPulse.tau)] ==
                  doctest::Approx(n * kBenchPulse.phi0).epsilon(1e-12));

        // dressing is a phase: |dressed| == |raw|
        for (std::size_t i = 0; i < coeffs.node_values.size(); i += 100)
            CHECK(std::abs(diag.dressed[i][0]) ==
                  doctest::Approx(std::abs(coeffs.node_values[i][0])));
    }

    SUBCASE("larger area gives a smaller averaged coefficient") {
        const auto strong = realize_regular(kBenchPulse, grid.horizon());
        const auto weak = realize_regular({kBenchPulse.tau, kBenchPulse.delta, 0.4},
                                          grid.horizon());
        const auto f_strong = integrate_coeffs(kBenchSystem, kBenchEnv, strong, grid);
        const auto f_weak = integrate_coeffs(kBenchSystem, kBenchEnv, weak, grid);
        CHECK(f_strong.mean_abs(0) < f_weak.mean_abs(0));
    }
}

TEST_CASE("riccati escape aborts with the escape time") {
    const SimGrid grid = SimGrid::from_horizon(2.0, 0.001);
    const auto pulse = realize_regular({0.5, 0.05, 0.0}, grid.horizon());
    try {
        integrate_coeffs(kBlowupSystem, kBlowupEnv, pulse, grid);
        FAIL("expected a blow-up");
    } catch (const IntegrationBlowup& e) {
        CHECK(e.time() > 0.0);
        CHECK(e.time() <= 1.0);
    }
}

TEST_CASE("grids that cannot resolve the pulse are rejected") {
    const SimGrid grid = SimGrid::from_horizon(5.0, 0.01);  // dt > delta/10 = 0.0012
    const auto pulse = realize_regular(kBenchPulse, grid.horizon());
    CHECK_THROWS_AS(integrate_coeffs(kBenchSystem, kBenchEnv, pulse, grid), ValidationError);
    CHECK_THROWS_AS(grid_oracle_coeffs(kBenchSystem, kBenchEnv, pulse, grid), ValidationError);
}

TEST_CASE("hermite evaluation is consistent with stored node values") {
    const SimGrid grid = SimGrid::from_horizon(1.0, 0.001);
    const auto pulse = realize_regular(kBenchPulse, grid.horizon());
    const auto coeffs = integrate_coeffs(kBenchSystem, kBenchEnv, pulse, grid);
    for (std::size_t i = 0; i < grid.nodes(); i += 100) {
        const auto w = coeffs.eval(grid.time(i));
        CHECK(std::abs(w[0] - coeffs.node_values[i][0]) < 1e-12);
        CHECK(std::abs(w[1] - coeffs.node_values[i][1]) < 1e-12);
    }
    // interior points interpolate smoothly between neighbors
    const auto mid = coeffs.eval(0.5 * (grid.time(10) + grid.time(11)));
    CHECK(std::isfinite(mid[0].real()));
    const double lo = std::min(std::abs(coeffs.node_values[10][0]),
                               std::abs(coeffs.node_values[11][0]));
    const double hi = std::max(std::abs(coeffs.node_values[10][0]),
                               std::abs(coeffs.node_values[11][0]));
    CHECK(std::abs(mid[0]) >= lo - 1e-6);
    CHECK(std::abs(mid[0]) <= hi + 1e-6);
}
