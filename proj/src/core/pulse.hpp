// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "core/types.hpp"

namespace leo3 {

/// Regular rectangular sequence: amplitude phi0/delta on [n*tau - delta, n*tau]
/// for n >= 1, zero elsewhere. There is no pulse at t = 0.
struct RegularPulseSpec {
    double tau = 1.0;    ///< period, > 0
    double delta = 0.5;  ///< duration, 0 < delta <= tau
    double phi0 = 1.0;   ///< pulse area per period

    void validate() const;
    double duty_ratio() const { return delta / tau; }
};

/// Randomized sequence: quasi-period tau_n = tau (1 + a_tau u_n) and area
/// phi_n = phi0 (1 + a_phi v_n), u_n and v_n i.i.d. uniform on [-1, 1] from
/// two independent streams. The duration delta stays fixed; quasi-periods
/// shorter than delta are clamped to delta.
struct RandomPulseSpec {
    RegularPulseSpec base;
    double a_tau = 0.0;  ///< in [0, 1)
    double a_phi = 0.0;  ///< in [0, 1]
    std::uint64_t seed = 0;

    void validate() const;
};

enum class NoiseMode { Global, Local };
enum class NoiseDist { Uniform, Gaussian };

/// White-noise dressing of a realized program. The noise is piecewise
/// constant over `resample_interval` (a realization choice independent of
/// the integrator step) and adds (phi0/tau) * w * n_k to the amplitude:
/// everywhere for Global mode, only inside pulse windows for Local mode.
struct NoiseDressing {
    NoiseMode mode = NoiseMode::Global;
    double w = 0.0;  ///< relative strength, >= 0 (1.0 = 100%)
    NoiseDist dist = NoiseDist::Gaussian;
    double resample_interval = 0.0;  ///< > 0, <= delta of the dressed program
    std::uint64_t seed = 0;

    void validate(double delta) const;
};

/// A realized piecewise-constant pulse: contiguous segments covering
/// [0, horizon] with exact cumulative integrals at the boundaries.
class PulseProgram {
public:
    struct Segment {
        double t0 = 0.0;
        double t1 = 0.0;
        double amplitude = 0.0;
        bool is_pulse = false;  ///< true for (possibly dressed) pulse windows

        bool operator==(const Segment&) const = default;
    };

    PulseProgram() = default;
    PulseProgram(std::vector<Segment> segments, double base_tau, double base_delta,
                 double base_phi0);

    double horizon() const { return segments_.empty() ? 0.0 : segments_.back().t1; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// Exact piecewise-constant lookup. Boundary points shared with a pulse
    /// window belong to the pulse.
    double amplitude_at(double t) const;

    /// Exact running integral C(t) from segment arithmetic.
    double integral_to(double t) const;

    /// Parameters of the underlying regular sequence (used by noise dressing
    /// and by integrator step-size rules).
    double base_tau() const { return base_tau_; }
    double base_delta() const { return base_delta_; }
    double base_phi0() const { return base_phi0_; }

    bool operator==(const PulseProgram&) const = default;

    /// Columns: t_start, t_end, amplitude.
    void write_csv(std::ostream& os) const;

private:
    std::size_t segment_index(double t) const;

    std::vector<Segment> segments_;
    std::vector<double> cumulative_;  // integral at each segment start, plus total
    double base_tau_ = 0.0;
    double base_delta_ = 0.0;
    double base_phi0_ = 0.0;
};

PulseProgram realize_regular(const RegularPulseSpec& spec, double horizon);
PulseProgram realize_random(const RandomPulseSpec& spec, double horizon);
PulseProgram apply_noise(const PulseProgram& program, const NoiseDressing& dressing);

}  // namespace leo3
