// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "core/system.hpp"
#include "core/types.hpp"

namespace leo3 {

/// One realization of the complex colored Gaussian process z_t on a grid.
/// The covariance is M[z_t z*_s] = alpha(t,s) and M[z_t z_s] = 0; the
/// trajectory equation is driven by the conjugate z*_t.
struct NoisePath {
    SimGrid grid;
    std::vector<Complex> samples;  // one per grid node
};

/// Exact Ornstein-Uhlenbeck discretization:
///   z_{n+1} = z_n e^{-(gamma + i Omega) dt} + xi_n sqrt(Gamma gamma / 2 (1 - e^{-2 gamma dt}))
/// with z_0 ~ sqrt(Gamma gamma / 2) xi and xi circular complex standard
/// Gaussians, so the node statistics are step-size exact.
NoisePath generate_ou_path(const EnvSpec& env, const SimGrid& grid, std::uint64_t seed,
                           std::uint64_t path_index = 0);

struct CovarianceEstimate {
    Complex mean{};
    double stderr_re = 0.0;
    double stderr_im = 0.0;
};

/// Mean of z_{t+lag} z*_t over paths and time origins. The standard error is
/// computed across per-path averages (origins within a path are correlated).
CovarianceEstimate empirical_covariance(const std::vector<NoisePath>& paths, double lag);

/// Same estimator for the pseudo-covariance M[z_{t+lag} z_t] (should vanish).
CovarianceEstimate empirical_pseudo_covariance(const std::vector<NoisePath>& paths, double lag);

}  // namespace leo3
