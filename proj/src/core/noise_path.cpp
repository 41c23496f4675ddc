// SPDX-License-Identifier: Apache-2.0
#include "core/noise_path.hpp"

#include <cmath>

#include "core/rng.hpp"

namespace leo3 {

NoisePath generate_ou_path(const EnvSpec& env, const SimGrid& grid, std::uint64_t seed,
                           std::uint64_t path_index) {
    env.validate();
    NoisePath path{grid, std::vector<Complex>(grid.nodes())};
    if (env.Gamma == 0.0) return path;  // zero coupling: identically zero driver

    RngStream rng(seed, "noise.ou", path_index);
    const double var = 0.5 * env.Gamma * env.gamma;
    const Complex decay = std::exp(-(env.gamma + kImag * env.Omega) * grid.dt);
    const double kick = std::sqrt(var * (1.0 - std::exp(-2.0 * env.gamma * grid.dt)));

    Complex z = std::sqrt(var) * rng.complex_normal();
    path.samples[0] = z;
    for (std::size_t n = 1; n < grid.nodes(); ++n) {
        z = z * decay + kick * rng.complex_normal();
        path.samples[n] = z;
    }
    return path;
}

namespace {

CovarianceEstimate lagged_mean(const std::vector<NoisePath>& paths, double lag, bool conjugate) {
    if (paths.empty()) throw ValidationError({"covariance estimate needs at least one path"});
    const SimGrid& grid = paths.front().grid;
    for (const auto& p : paths)
        if (!(p.grid == grid)) throw ValidationError({"covariance estimate: mismatched grids"});
    const double steps = lag / grid.dt;
    const auto offset = static_cast<std::size_t>(std::llround(steps));
    if (std::abs(steps - static_cast<double>(offset)) > 1e-9 || offset >= grid.nodes())
        throw ValidationError({"covariance lag must be a grid multiple within the horizon"});

    const std::size_t origins = grid.nodes() - offset;
    std::vector<Complex> per_path(paths.size());
    for (std::size_t p = 0; p < paths.size(); ++p) {
        Complex acc{};
        const auto& z = paths[p].samples;
        for (std::size_t n = 0; n < origins; ++n)
            acc += z[n + offset] * (conjugate ? std::conj(z[n]) : z[n]);
        per_path[p] = acc / static_cast<double>(origins);
    }

    CovarianceEstimate est;
    for (const auto& v : per_path) est.mean += v;
    est.mean /= static_cast<double>(per_path.size());
    if (per_path.size() > 1) {
        double vr = 0.0, vi = 0.0;
        for (const auto& v : per_path) {
            vr += (v.real() - est.mean.real()) * (v.real() - est.mean.real());
            vi += (v.imag() - est.mean.imag()) * (v.imag() - est.mean.imag());
        }
        const auto n = static_cast<double>(per_path.size());
        est.stderr_re = std::sqrt(vr / (n - 1.0) / n);
        est.stderr_im = std::sqrt(vi / (n - 1.0) / n);
    }
    return est;
}

}  // namespace

CovarianceEstimate empirical_covariance(const std::vector<NoisePath>& paths, double lag) {
    return lagged_mean(paths, lag, true);
}

CovarianceEstimate empirical_pseudo_covariance(const std::vector<NoisePath>& paths, double lag) {
    return lagged_mean(paths, lag, false);
}

}  // namespace leo3
