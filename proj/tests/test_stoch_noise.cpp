// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/noise_path.hpp"

using namespace leo3;

namespace {

const EnvSpec kEnv{1.0, 1.0, 0.5};

std::vector<NoisePath> make_paths(const EnvSpec& env, const SimGrid& grid, std::size_t count,
                                  std::uint64_t seed) {
    std::vector<NoisePath> paths(count);
    for (std::size_t i = 0; i < count; ++i) paths[i] = generate_ou_path(env, grid, seed, i);
    return paths;
}

}  // namespace

TEST_CASE("zero coupling gives the zero path") {
    const SimGrid grid = SimGrid::from_horizon(5.0, 0.01);
    const auto path = generate_ou_path({0.0, 1.0, 0.5}, grid, 9, 0);
    for (const auto& z : path.samples) CHECK(z == Complex(0.0, 0.0));
}

TEST_CASE("path generation is a pure function of (seed, index)") {
    const SimGrid grid = SimGrid::from_horizon(5.0, 0.01);
    CHECK(generate_ou_path(kEnv, grid, 11, 3).samples ==
          generate_ou_path(kEnv, grid, 11, 3).samples);
    CHECK_FALSE(generate_ou_path(kEnv, grid, 11, 4).samples ==
                generate_ou_path(kEnv, grid, 11, 3).samples);
}

TEST_CASE("stationary single-time variance matches the kernel at zero lag") {
    const SimGrid grid = SimGrid::from_horizon(8.0, 0.01);
    const auto paths = make_paths(kEnv, grid, 4000, 21);
    const auto est = empirical_covariance(paths, 0.0);
    CHECK(std::abs(est.mean.real() - 0.5) <= 3.0 * est.stderr_re);
    CHECK(std::abs(est.mean.imag()) <= 3.0 * est.stderr_im);

    // stationarity: first- and second-half variances agree statistically
    double first = 0.0, second = 0.0;
    const std::size_t half = grid.nodes() / 2;
    for (const auto& p : paths) {
        for (std::size_t n = 0; n < half; ++n) first += std::norm(p.samples[n]);
        for (std::size_t n = half; n < grid.nodes(); ++n) second += std::norm(p.samples[n]);
    }
    first /= static_cast<double>(paths.size() * half);
    second /= static_cast<double>(paths.size() * (grid.nodes() - half));
    CHECK(std::abs(first - second) < 0.05);
}

TEST_CASE("lagged covariance reproduces the exponential kernel") {
    const SimGrid grid = SimGrid::from_horizon(8.0, 0.01);
    const auto paths = make_paths(kEnv, grid, 10000, 33);
    const auto est = empirical_covariance(paths, 1.0);
    const Complex expected = kEnv.alpha(1.0, 0.0);  // 0.5 e^{-1} e^{-0.5 i}
    CHECK(std::abs(est.mean.real() - expected.real()) <= 3.0 * est.stderr_re);
    CHECK(std::abs(est.mean.imag() - expected.imag()) <= 3.0 * est.stderr_im);
}

TEST_CASE("pseudo-covariance vanishes (circular noise)") {
    const SimGrid grid = SimGrid::from_horizon(8.0, 0.01);
    const auto paths = make_paths(kEnv, grid, 4000, 55);
    for (const double lag : {0.0, 0.5, 1.0, 2.0}) {
        const auto est = empirical_pseudo_covariance(paths, lag);
        CHECK(std::abs(est.mean.real()) <= 3.0 * est.stderr_re);
        CHECK(std::abs(est.mean.imag()) <= 3.0 * est.stderr_im);
    }
}

TEST_CASE("covariance estimates agree between dt and dt/2") {
    const double lag = 0.5;
    const auto coarse =
        empirical_covariance(make_paths(kEnv, SimGrid::from_horizon(8.0, 0.02), 4000, 70), lag);
    const auto fine =
        empirical_covariance(make_paths(kEnv, SimGrid::from_horizon(8.0, 0.01), 4000, 71), lag);
    const double tol_re = 3.0 * std::hypot(coarse.stderr_re, fine.stderr_re);
    const double tol_im = 3.0 * std::hypot(coarse.stderr_im, fine.stderr_im);
    CHECK(std::abs(coarse.mean.real() - fine.mean.real()) <= tol_re);
    CHECK(std::abs(coarse.mean.imag() - fine.mean.imag()) <= tol_im);
}

TEST_CASE("degenerate estimator inputs") {
    const SimGrid grid = SimGrid::from_horizon(1.0, 0.1);

    // a single constant synthetic path gives exactly its square modulus
    NoisePath constant{grid, std::vector<Complex>(grid.nodes(), Complex(1.0, 0.0))};
    const auto unit = empirical_covariance({constant}, 0.0);
    CHECK(unit.mean == Complex(1.0, 0.0));
    CHECK(unit.stderr_re == 0.0);

    const auto quiet = make_paths({0.0, 1.0, 0.0}, grid, 3, 1);
    CHECK(empirical_covariance(quiet, 0.3).mean == Complex(0.0, 0.0));

    CHECK_THROWS_AS(empirical_covariance({}, 0.0), ValidationError);
    CHECK_THROWS_AS(empirical_covariance({constant}, 0.05), ValidationError);  // off-grid lag
    CHECK_THROWS_AS(empirical_covariance({constant}, 2.0), ValidationError);   // beyond horizon

    NoisePath other{SimGrid::from_horizon(1.0, 0.05), {}};
    other.samples.resize(other.grid.nodes());
    CHECK_THROWS_AS(empirical_covariance({constant, other}, 0.0), ValidationError);
}

TEST_CASE("generator validates the environment") {
    const SimGrid grid = SimGrid::from_horizon(1.0, 0.1);
    CHECK_THROWS_AS(generate_ou_path({-1.0, 1.0, 0.0}, grid, 1, 0), ValidationError);
    CHECK_THROWS_AS(generate_ou_path({1.0, -1.0, 0.0}, grid, 1, 0), ValidationError);
}
