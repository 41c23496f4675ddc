// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "core/schedule.hpp"
#include "core/system.hpp"
#include "core/types.hpp"

namespace leo3 {

/// Time series of the two O-operator coefficient functions: (F1, F2) for a
/// V-type system, (P2, P3) for a lambda-type one. Besides the grid-node
/// values it stores cubic Hermite data on every integration substep so the
/// propagators can evaluate the coefficients at arbitrary stage times with
/// the accuracy of the integration itself (derivatives are one-sided at
/// pulse edges, where the coefficients have kinks).
struct CoeffSeries {
    SystemKind kind = SystemKind::VType;
    StepSchedule schedule;
    std::vector<std::array<Complex, 2>> node_values;

    struct Segment {
        std::array<Complex, 2> w0, w1, d0, d1;
    };
    std::vector<Segment> segments;  // parallel to schedule.subs; empty for node-only series

    const SimGrid& grid() const { return schedule.grid; }

    std::array<Complex, 2> eval(double t) const;
    std::array<Complex, 2> eval_in(std::size_t substep, double t) const;

    double max_abs(int k) const;
    double mean_abs(int k) const;

    /// Columns: t, re/im of both coefficients, and the pulse integral C(t).
    void write_csv(std::ostream& os, const PulseProgram& pulse) const;
};

/// Integrates the closed coefficient ODEs
///   dW_k/dt = Gamma gamma g_k / 2 + [-gamma + i (gap_k - Omega + c(t))] W_k
///             + (sum_j g_j W_j) W_k,   W_k(0) = 0
/// with classical RK4. Substeps never straddle a pulse edge, so the
/// piecewise-constant amplitude is exact within every step.
///
/// Throws IntegrationBlowup (with the escape time) if the Riccati
/// nonlinearity drives the solution out of the finite domain, and
/// ValidationError when dt > delta/10 (grid too coarse for the pulse).
CoeffSeries integrate_coeffs(const SystemSpec& system, const EnvSpec& env,
                             const PulseProgram& pulse, const SimGrid& grid);

/// Brute-force reference: integrates the two-time functions f_k(t, s) on a
/// triangular grid from f_k(s, s) = g_k and evaluates
/// W_k(t) = integral_0^t alpha(t, s) f_k(t, s) ds by trapezoidal quadrature,
/// feeding W back into the f update self-consistently (Heun predictor /
/// corrector). O(N^2) — meant for short horizons. Returns node values only.
CoeffSeries grid_oracle_coeffs(const SystemSpec& system, const EnvSpec& env,
                               const PulseProgram& pulse, const SimGrid& grid);

struct PulseIntegralDiagnostic {
    std::vector<double> t;
    std::vector<double> pulse_integral;                  // C(t)
    std::vector<std::array<Complex, 2>> dressed;         // e^{-i C(t)} W_k(t)
    std::array<double, 2> max_abs{};                     // max_t |W_k|
};

/// The accumulated pulse phase C(t) and the dressed coefficients
/// e^{-i C(t)} W_k(t) whose suppression measures how well the control works.
PulseIntegralDiagnostic pulse_integral_diagnostic(const CoeffSeries& coeffs,
                                                  const PulseProgram& pulse);

}  // namespace leo3
