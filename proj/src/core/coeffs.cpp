// SPDX-License-Identifier: Apache-2.0
#include "core/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace leo3 {

namespace {

using Pair = std::array<Complex, 2>;

constexpr double kBlowupLimit = 1e6;

struct CoeffRhs {
    double drive[2];    // Gamma gamma g_k / 2
    Complex lin[2];     // -gamma + i (gap_k - Omega)
    double coupling[2]; // g_k

    CoeffRhs(const SystemSpec& system, const EnvSpec& env) {
        const auto channels = DecayChannels::of(system);
        for (int k = 0; k < 2; ++k) {
            const auto& c = channels.ch[k];
            drive[k] = 0.5 * env.Gamma * env.gamma * c.coupling;
            lin[k] = Complex(-env.gamma, c.gap - env.Omega);
            coupling[k] = c.coupling;
        }
    }

    Pair operator()(const Pair& w, double c) const {
        const Complex mix = coupling[0] * w[0] + coupling[1] * w[1];
        Pair dw;
        for (int k = 0; k < 2; ++k)
            dw[k] = drive[k] + (lin[k] + Complex(0.0, c)) * w[k] + mix * w[k];
        return dw;
    }
};

bool pair_finite(const Pair& w) {
    for (const auto& v : w)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > kBlowupLimit)
            return false;
    return true;
}

Pair axpy(const Pair& w, double h, const Pair& k) {
    return {w[0] + h * k[0], w[1] + h * k[1]};
}

void enforce_pulse_resolution(const PulseProgram& pulse, const SimGrid& grid) {
    const double limit = pulse.base_delta() / 10.0;
    if (grid.dt > limit * (1.0 + 1e-9))
        throw ValidationError({"grid.dt=" + std::to_string(grid.dt) +
                               " too coarse for the pulse: need dt <= delta/10 = " +
                               std::to_string(limit)});
}

}  // namespace

std::array<Complex, 2> CoeffSeries::eval(double t) const {
    if (segments.empty())
        throw std::logic_error("coefficient series holds node values only");
    const auto& subs = schedule.subs;
    auto it = std::upper_bound(subs.begin(), subs.end(), t,
                               [](double v, const StepSchedule::Substep& s) { return v < s.t0; });
    std::size_t idx = static_cast<std::size_t>(it - subs.begin());
    idx = idx == 0 ? 0 : idx - 1;
    return eval_in(idx, t);
}

std::array<Complex, 2> CoeffSeries::eval_in(std::size_t substep, double t) const {
    const auto& sub = schedule.subs[substep];
    const auto& seg = segments[substep];
    const double h = sub.t1 - sub.t0;
    const double x = std::clamp((t - sub.t0) / h, 0.0, 1.0);
    const double x2 = x * x, x3 = x2 * x;
    const double h00 = 2 * x3 - 3 * x2 + 1;
    const double h10 = x3 - 2 * x2 + x;
    const double h01 = -2 * x3 + 3 * x2;
    const double h11 = x3 - x2;
    Pair out;
    for (int k = 0; k < 2; ++k)
        out[k] = h00 * seg.w0[k] + (h10 * h) * seg.d0[k] + h01 * seg.w1[k] + (h11 * h) * seg.d1[k];
    return out;
}

double CoeffSeries::max_abs(int k) const {
    double m = 0.0;
    for (const auto& v : node_values) m = std::max(m, std::abs(v[k]));
    return m;
}

double CoeffSeries::mean_abs(int k) const {
    if (node_values.empty()) return 0.0;
    double s = 0.0;
    for (const auto& v : node_values) s += std::abs(v[k]);
    return s / static_cast<double>(node_values.size());
}

void CoeffSeries::write_csv(std::ostream& os, const PulseProgram& pulse) const {
    os << "t,re_w1,im_w1,re_w2,im_w2,C\n";
    char line[256];
    for (std::size_t i = 0; i < node_values.size(); ++i) {
        const double t = grid().time(i);
        const auto& w = node_values[i];
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", t, w[0].real(),
                      w[0].imag(), w[1].real(), w[1].imag(), pulse.integral_to(t));
        os << line;
    }
}

CoeffSeries integrate_coeffs(const SystemSpec& system, const EnvSpec& env,
                             const PulseProgram& pulse, const SimGrid& grid) {
    system.validate();
    env.validate();
    enforce_pulse_resolution(pulse, grid);

    const CoeffRhs rhs(system, env);
    CoeffSeries series{system.kind, StepSchedule::build(grid, pulse), {}, {}};
    series.node_values.resize(grid.nodes());
    series.segments.resize(series.schedule.subs.size());
    series.node_values[0] = {Complex{}, Complex{}};

    Pair w{Complex{}, Complex{}};
    for (std::size_t s = 0; s < series.schedule.subs.size(); ++s) {
        const auto& sub = series.schedule.subs[s];
        const double h = sub.t1 - sub.t0;
        const Pair k1 = rhs(w, sub.amp);
        const Pair k2 = rhs(axpy(w, 0.5 * h, k1), sub.amp);
        const Pair k3 = rhs(axpy(w, 0.5 * h, k2), sub.amp);
        const Pair k4 = rhs(axpy(w, h, k3), sub.amp);
        Pair next;
        for (int k = 0; k < 2; ++k)
            next[k] = w[k] + (h / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        if (!pair_finite(next))
            throw IntegrationBlowup("O-operator coefficient escape", sub.t1);
        series.segments[s] = {w, next, k1, rhs(next, sub.amp)};
        w = next;
        if (sub.closes_node) series.node_values[sub.node + 1] = w;
    }
    return series;
}

CoeffSeries grid_oracle_coeffs(const SystemSpec& system, const EnvSpec& env,
                               const PulseProgram& pulse, const SimGrid& grid) {
    system.validate();
    env.validate();
    enforce_pulse_resolution(pulse, grid);
    if (grid.nodes() > 20001)
        throw ValidationError({"grid oracle is O(N^2); use a shorter horizon or coarser step"});

    const auto channels = DecayChannels::of(system);
    const bool vtype = system.kind == SystemKind::VType;
    const double g[2] = {channels.ch[0].coupling, channels.ch[1].coupling};

    // Nonlinear feedback term of d f_k / dt given the current integral
    // values W (its placement differs between the two level structures);
    // the linear phase i (gap_k + c) f_k is handled exactly per step below.
    const auto feedback = [&](const Pair& f, const Pair& w) {
        Pair df;
        const Complex mix_f = g[0] * f[0] + g[1] * f[1];
        const Complex mix_w = g[0] * w[0] + g[1] * w[1];
        for (int k = 0; k < 2; ++k) df[k] = vtype ? w[k] * mix_f : mix_w * f[k];
        return df;
    };

    const double h = grid.dt;
    const auto quadrature = [&](double t, const std::vector<Pair>& f, std::size_t count) {
        Pair acc{Complex{}, Complex{}};
        for (std::size_t j = 0; j < count; ++j) {
            const double weight = (j == 0 || j + 1 == count) ? 0.5 : 1.0;
            const Complex a = env.alpha(t, grid.time(j)) * weight;
            acc[0] += a * f[j][0];
            acc[1] += a * f[j][1];
        }
        acc[0] *= h;
        acc[1] *= h;
        return acc;
    };

    CoeffSeries series{system.kind, StepSchedule{grid, {}}, {}, {}};
    series.node_values.assign(grid.nodes(), {Complex{}, Complex{}});

    const Pair diagonal{Complex(g[0], 0.0), Complex(g[1], 0.0)};
    std::vector<Pair> f{diagonal};
    std::vector<Pair> fp(grid.nodes());
    Pair w{Complex{}, Complex{}};
    f.reserve(grid.nodes());

    for (std::size_t n = 0; n + 1 < grid.nodes(); ++n) {
        const double tn = grid.time(n);
        const double tn1 = grid.time(n + 1);
        // exact per-step phase, immune to where pulse edges fall
        const double dc = pulse.integral_to(tn1) - pulse.integral_to(tn);
        const Complex phase[2] = {
            std::exp(Complex(0.0, channels.ch[0].gap * h + dc)),
            std::exp(Complex(0.0, channels.ch[1].gap * h + dc)),
        };

        // exponential-Heun predictor over every stored s-slice
        for (std::size_t j = 0; j <= n; ++j) {
            const Pair r = feedback(f[j], w);
            for (int k = 0; k < 2; ++k) fp[j][k] = phase[k] * (f[j][k] + h * r[k]);
        }
        fp[n + 1] = diagonal;
        const Pair w_pred = quadrature(tn1, fp, n + 2);

        // corrector
        for (std::size_t j = 0; j <= n; ++j) {
            const Pair r1 = feedback(f[j], w);
            const Pair r2 = feedback(fp[j], w_pred);
            for (int k = 0; k < 2; ++k)
                f[j][k] = phase[k] * (f[j][k] + 0.5 * h * r1[k]) + 0.5 * h * r2[k];
        }
        f.push_back(diagonal);
        w = quadrature(tn1, f, n + 2);
        if (!pair_finite(w)) throw IntegrationBlowup("O-operator coefficient escape", tn1);
        series.node_values[n + 1] = w;
    }
    return series;
}

PulseIntegralDiagnostic pulse_integral_diagnostic(const CoeffSeries& coeffs,
                                                  const PulseProgram& pulse) {
    PulseIntegralDiagnostic diag;
    const auto& grid = coeffs.grid();
    diag.t.resize(grid.nodes());
    diag.pulse_integral.resize(grid.nodes());
    diag.dressed.resize(grid.nodes());
    for (std::size_t i = 0; i < grid.nodes(); ++i) {
        const double t = grid.time(i);
        const double c = pulse.integral_to(t);
        const Complex phase = std::exp(Complex(0.0, -c));
        diag.t[i] = t;
        diag.pulse_integral[i] = c;
        for (int k = 0; k < 2; ++k) {
            diag.dressed[i][k] = phase * coeffs.node_values[i][k];
            diag.max_abs[k] = std::max(diag.max_abs[k], std::abs(coeffs.node_values[i][k]));
        }
    }
    return diag;
}

}  // namespace leo3
