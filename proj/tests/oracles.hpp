// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations used only by the tests. These stay
// deliberately separate from the library's integration machinery: the
// memory-kernel solver works on the integro-differential equation directly,
// and the drift oracle integrates the stated Schrodinger-frame equation.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "core/coeffs.hpp"
#include "core/propagator.hpp"

namespace leo3::test {

/// Survival amplitude of the upper level of a two-level reduction
/// (lambda-type with nu2 = 0, no pulse):
///   du/dt = -nu3^2 int_0^t alpha(t-s) e^{i gap (t-s)} u(s) ds,  u(0) = 1,
/// solved by Heun steps with trapezoidal memory quadrature at step h.
/// The populated-level occupation is |u|^2.
inline std::vector<Complex> memory_kernel_survival(double nu3, const EnvSpec& env, double gap,
                                                   double horizon, double h) {
    const auto n = static_cast<std::size_t>(std::llround(horizon / h));
    std::vector<Complex> u(n + 1), du(n + 1);
    const Complex exponent = Complex(-env.gamma, gap - env.Omega);
    const double strength = 0.5 * env.Gamma * env.gamma * nu3 * nu3;
    const auto kernel = [&](double x) { return strength * std::exp(exponent * x); };

    u[0] = 1.0;
    du[0] = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double t_next = static_cast<double>(m + 1) * h;
        const auto integral = [&](const Complex& endpoint) {
            Complex acc = 0.5 * kernel(t_next) * u[0] + 0.5 * kernel(0.0) * endpoint;
            for (std::size_t j = 1; j <= m; ++j)
                acc += kernel(t_next - static_cast<double>(j) * h) * u[j];
            return acc * h;
        };
        const Complex predicted = u[m] + h * du[m];
        const Complex du_pred = -integral(predicted);
        u[m + 1] = u[m] + 0.5 * h * (du[m] + du_pred);
        du[m + 1] = -integral(u[m + 1]);
    }
    return u;
}

/// Deterministic drift of the trajectory equation with the noise set to
/// zero, integrated literally in the Schrodinger frame:
///   d psi/dt = [-i H - i c(t) P - L^dag O(t)] psi.
/// RK4 at a refinement of the grid step, with steps split at pulse edges so
/// the comparison is not polluted by sampling noise. Returns states at the
/// grid nodes.
inline std::vector<Vec3> drift_oracle(const Vec3& psi0, const SystemSpec& system,
                                      const LeoStructure& leo, const PulseProgram& pulse,
                                      const CoeffSeries& coeffs, const SimGrid& grid,
                                      int refine = 10) {
    const Mat3 h_sys = build_hamiltonian(system);
    const Mat3 lind = build_lindblad(system);
    const auto channels = DecayChannels::of(system);
    Mat3 projector = Mat3::Zero();
    for (int j = 0; j < 3; ++j) projector(j, j) = leo.projector[j];

    const auto rhs = [&](double t, double amp, const Vec3& psi) {
        Mat3 o_op = Mat3::Zero();
        const auto w = coeffs.eval(t);
        for (int k = 0; k < 2; ++k) o_op(channels.ch[k].row, channels.ch[k].col) = w[k];
        Vec3 out = Complex(0.0, -1.0) * (h_sys * psi + amp * (projector * psi));
        out -= lind.adjoint() * (o_op * psi);
        return out;
    };

    std::vector<Vec3> out(grid.nodes());
    Vec3 psi = psi0.normalized();
    out[0] = psi;
    const auto& segs = pulse.segments();
    std::size_t si = 0;
    const double eps = 1e-12 * std::max(1.0, grid.horizon());
    for (std::size_t node = 0; node < grid.steps; ++node) {
        double cursor = grid.time(node);
        const double t_end = grid.time(node + 1);
        while (cursor < t_end - eps) {
            while (si + 1 < segs.size() && segs[si].t1 <= cursor + eps) ++si;
            double stop = std::min(t_end, segs[si].t1);
            if (stop > t_end - eps) stop = t_end;
            const double amp = pulse.amplitude_at(0.5 * (cursor + stop));
            const int substeps = refine;
            const double h = (stop - cursor) / substeps;
            for (int m = 0; m < substeps; ++m) {
                const double t = cursor + m * h;
                const Vec3 k1 = rhs(t, amp, psi);
                const Vec3 k2 = rhs(t + 0.5 * h, amp, psi + 0.5 * h * k1);
                const Vec3 k3 = rhs(t + 0.5 * h, amp, psi + 0.5 * h * k2);
                const Vec3 k4 = rhs(t + h, amp, psi + h * k3);
                psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            cursor = stop;
        }
        out[node + 1] = psi;
    }
    return out;
}

}  // namespace leo3::test
