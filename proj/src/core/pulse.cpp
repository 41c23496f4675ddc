// SPDX-License-Identifier: Apache-2.0
#include "core/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "core/rng.hpp"

namespace leo3 {

namespace {

void require_horizon(double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ValidationError({"pulse horizon must be finite and > 0"});
}

}  // namespace

void RegularPulseSpec::validate() const {
    std::vector<std::string> issues;
    if (!std::isfinite(tau) || tau <= 0.0) issues.push_back("pulse.tau must be finite and > 0");
    if (!std::isfinite(delta) || delta <= 0.0)
        issues.push_back("pulse.delta must be finite and > 0");
    else if (std::isfinite(tau) && delta > tau)
        issues.push_back("pulse.delta must not exceed pulse.tau (delta=" + std::to_string(delta) +
                         ", tau=" + std::to_string(tau) + ")");
    if (!std::isfinite(phi0)) issues.push_back("pulse.phi0 must be finite");
    if (std::isfinite(phi0) && std::isfinite(delta) && delta > 0.0 &&
        !std::isfinite(phi0 / delta))
        issues.push_back("pulse amplitude phi0/delta must be finite");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

void RandomPulseSpec::validate() const {
    base.validate();
    std::vector<std::string> issues;
    if (!std::isfinite(a_tau) || a_tau < 0.0 || a_tau >= 1.0)
        issues.push_back("pulse.a_tau must lie in [0, 1)");
    if (!std::isfinite(a_phi) || a_phi < 0.0 || a_phi > 1.0)
        issues.push_back("pulse.a_phi must lie in [0, 1]");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

void NoiseDressing::validate(double delta) const {
    std::vector<std::string> issues;
    if (!std::isfinite(w) || w < 0.0) issues.push_back("noise.w must be finite and >= 0");
    if (!std::isfinite(resample_interval) || resample_interval <= 0.0)
        issues.push_back("noise.resample_interval must be finite and > 0");
    else if (resample_interval > delta + 1e-12 * std::max(1.0, delta))
        issues.push_back("noise.resample_interval must not exceed the pulse duration");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

PulseProgram::PulseProgram(std::vector<Segment> segments, double base_tau, double base_delta,
                           double base_phi0)
    : segments_(std::move(segments)),
      base_tau_(base_tau),
      base_delta_(base_delta),
      base_phi0_(base_phi0) {
    if (segments_.empty()) throw ValidationError({"pulse program must cover a nonempty horizon"});
    cumulative_.resize(segments_.size() + 1);
    cumulative_[0] = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        cumulative_[i + 1] = cumulative_[i] + s.amplitude * (s.t1 - s.t0);
    }
}

std::size_t PulseProgram::segment_index(double t) const {
    const double pad = 1e-9 * std::max(1.0, horizon());
    if (t < -pad || t > horizon() + pad)
        throw std::out_of_range("pulse query t=" + std::to_string(t) +
                                " outside [0, " + std::to_string(horizon()) + "]");
    t = std::clamp(t, 0.0, horizon());
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.t0; });
    std::size_t idx = static_cast<std::size_t>(it - segments_.begin());
    idx = idx == 0 ? 0 : idx - 1;
    // A boundary point shared with a pulse window belongs to the pulse.
    if (idx > 0 && t == segments_[idx].t0 && segments_[idx - 1].is_pulse &&
        !segments_[idx].is_pulse)
        return idx - 1;
    return idx;
}

double PulseProgram::amplitude_at(double t) const {
    return segments_[segment_index(t)].amplitude;
}

double PulseProgram::integral_to(double t) const {
    const std::size_t idx = segment_index(t);
    const auto& s = segments_[idx];
    return cumulative_[idx] + s.amplitude * (std::clamp(t, 0.0, horizon()) - s.t0);
}

void PulseProgram::write_csv(std::ostream& os) const {
    os << "t_start,t_end,amplitude\n";
    char line[128];
    for (const auto& s : segments_) {
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", s.t0, s.t1, s.amplitude);
        os << line;
    }
}

PulseProgram realize_regular(const RegularPulseSpec& spec, double horizon) {
    spec.validate();
    require_horizon(horizon);

    std::vector<PulseProgram::Segment> segments;
    const double amp = spec.phi0 / spec.delta;
    double cursor = 0.0;
    for (long long n = 1;; ++n) {
        const double w0 = static_cast<double>(n) * spec.tau - spec.delta;
        const double w1 = static_cast<double>(n) * spec.tau;
        if (w0 >= horizon) break;
        if (w0 > cursor) segments.push_back({cursor, w0, 0.0, false});
        segments.push_back({std::max(cursor, w0), std::min(w1, horizon), amp, true});
        cursor = segments.back().t1;
        if (cursor >= horizon) break;
    }
    if (segments.empty() || cursor < horizon) segments.push_back({cursor, horizon, 0.0, false});
    return PulseProgram(std::move(segments), spec.tau, spec.delta, spec.phi0);
}

PulseProgram realize_random(const RandomPulseSpec& spec, double horizon) {
    spec.validate();
    require_horizon(horizon);
    if (spec.a_tau == 0.0 && spec.a_phi == 0.0) return realize_regular(spec.base, horizon);

    RngStream tau_stream(spec.seed, "pulse.tau", 0);
    RngStream phi_stream(spec.seed, "pulse.phi0", 0);

    std::vector<PulseProgram::Segment> segments;
    double cursor = 0.0;   // end of the previous quasi-period
    while (cursor < horizon) {
        const double u = tau_stream.uniform_sym();
        const double v = phi_stream.uniform_sym();
        double tau_n = spec.base.tau * (1.0 + spec.a_tau * u);
        tau_n = std::max(tau_n, spec.base.delta);  // pulse fills the quasi-period
        const double phi_n = spec.base.phi0 * (1.0 + spec.a_phi * v);

        const double end = cursor + tau_n;
        const double w0 = end - spec.base.delta;
        if (w0 > cursor) segments.push_back({cursor, std::min(w0, horizon), 0.0, false});
        if (w0 < horizon)
            segments.push_back(
                {std::max(cursor, w0), std::min(end, horizon), phi_n / spec.base.delta, true});
        cursor = end;
    }
    if (!segments.empty() && segments.back().t1 < horizon)
        segments.push_back({segments.back().t1, horizon, 0.0, false});
    return PulseProgram(std::move(segments), spec.base.tau, spec.base.delta, spec.base.phi0);
}

PulseProgram apply_noise(const PulseProgram& program, const NoiseDressing& dressing) {
    dressing.validate(program.base_delta());
    if (dressing.w == 0.0) return program;

    const double horizon = program.horizon();
    const double interval = dressing.resample_interval;
    const auto intervals = static_cast<std::size_t>(std::ceil(horizon / interval - 1e-12));

    RngStream stream(dressing.seed, "pulse.noise", 0);
    std::vector<double> noise(intervals);
    for (auto& n : noise)
        n = dressing.dist == NoiseDist::Gaussian ? stream.normal() : stream.uniform_sym();

    const double scale = program.base_phi0() / program.base_tau() * dressing.w;
    const double eps = 1e-12 * std::max(1.0, horizon);

    std::vector<PulseProgram::Segment> out;
    for (const auto& seg : program.segments()) {
        double a = seg.t0;
        while (a < seg.t1 - eps) {
            const auto k = std::min<std::size_t>(
                intervals - 1, static_cast<std::size_t>(std::floor(a / interval + 1e-9)));
            const double b = std::min(seg.t1, (static_cast<double>(k) + 1.0) * interval);
            const double piece_end = (b <= a + eps) ? seg.t1 : b;
            const bool dress = dressing.mode == NoiseMode::Global || seg.is_pulse;
            const double amp = seg.amplitude + (dress ? scale * noise[k] : 0.0);
            out.push_back({a, piece_end, amp, seg.is_pulse});
            a = piece_end;
        }
        if (!out.empty()) out.back().t1 = seg.t1;  // absorb fp slivers
    }
    return PulseProgram(std::move(out), program.base_tau(), program.base_delta(),
                        program.base_phi0());
}

}  // namespace leo3
