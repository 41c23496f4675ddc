// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>

#include "core/types.hpp"

namespace leo3 {

enum class SystemKind { VType, LambdaType };

const char* to_string(SystemKind kind);

/// Three-level system: level energies and the two decay couplings.
///
/// V-type: two upper levels |1>,|2> decay into |3>; couplings = (mu1, mu2).
/// Lambda-type: level |1> decays into |2> and |3>; couplings = (nu2, nu3).
/// Everything is expressed in units of the global frequency scale (omega = 1);
/// times are in units of its inverse.
struct SystemSpec {
    SystemKind kind = SystemKind::VType;
    std::array<double, 3> omega{};
    std::array<double, 2> couplings{};

    /// Throws ValidationError listing every violated invariant.
    void validate() const;
};

/// Exponentially decaying environment correlation
/// alpha(t,s) = Gamma*gamma/2 * exp(-gamma|t-s| - i*Omega*(t-s)).
struct EnvSpec {
    double Gamma = 0.0;  ///< overall coupling strength, >= 0
    double gamma = 1.0;  ///< inverse memory time, > 0
    double Omega = 0.0;  ///< central environment frequency

    void validate() const;
    Complex alpha(double t, double s) const;
};

/// Diagonal projector picked up by the leakage-elimination pulse: the pulse
/// term in the Hamiltonian is c(t) * diag(projector).
struct LeoStructure {
    std::array<double, 3> projector{};

    static LeoStructure for_kind(SystemKind kind);
};

Mat3 build_hamiltonian(const SystemSpec& spec);
Mat3 build_lindblad(const SystemSpec& spec);

/// Phases phi_j = exp(+i [omega_j t + d_j C]) with d the LEO projector and
/// C the accumulated pulse integral. Multiplying a Schrodinger-frame state
/// componentwise by phi gives the rotating-frame state.
std::array<Complex, 3> rotating_frame_phases(const SystemSpec& spec, const LeoStructure& leo,
                                             double t, double pulse_integral);

/// Conventional initial state: (|1> + |2>)/sqrt(2) for V-type, |1> for
/// lambda-type (the state whose survival the control protects).
Vec3 default_initial_state(SystemKind kind);

/// The two decay channels written as elementary matrix units g * |row><col|,
/// together with the level gap that drives each channel's rotating-frame
/// phase theta_k(t) = gap_k * t + C(t).
struct DecayChannels {
    struct Channel {
        int row = 0;
        int col = 0;
        double coupling = 0.0;
        double gap = 0.0;
    };
    std::array<Channel, 2> ch{};

    static DecayChannels of(const SystemSpec& spec);
};

}  // namespace leo3
