// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace leo3 {

using Complex = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

inline constexpr Complex kImag{0.0, 1.0};

/// Thrown when an input fails domain validation. Carries every violation
/// found, not just the first.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : std::invalid_argument(join(issues)), issues_(std::move(issues)) {}
    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += "; ";
            s += v[i];
        }
        return s;
    }
    std::vector<std::string> issues_;
};

/// Thrown when an integration leaves the finite domain (Riccati escape,
/// non-finite state). `time` is the first grid time at which it was seen.
class IntegrationBlowup : public std::runtime_error {
public:
    IntegrationBlowup(const std::string& what, double time)
        : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

/// Uniform time grid on [0, steps*dt]. Node i sits at i*dt.
struct SimGrid {
    double dt = 0.0;
    std::size_t steps = 0;

    /// Rounds the horizon to a whole number of steps (documented behavior:
    /// the effective horizon is steps*dt and may differ from the request by
    /// less than one step).
    static SimGrid from_horizon(double horizon, double dt);

    std::size_t nodes() const { return steps + 1; }
    double time(std::size_t i) const { return dt * static_cast<double>(i); }
    double horizon() const { return time(steps); }

    bool operator==(const SimGrid&) const = default;
};

inline SimGrid SimGrid::from_horizon(double horizon, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError({"grid.dt must be finite and > 0"});
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ValidationError({"grid.horizon must be finite and > 0"});
    auto n = static_cast<long long>(std::llround(horizon / dt));
    if (n < 1) n = 1;
    return SimGrid{dt, static_cast<std::size_t>(n)};
}

}  // namespace leo3
