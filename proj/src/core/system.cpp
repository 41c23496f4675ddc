// SPDX-License-Identifier: Apache-2.0
#include "core/system.hpp"

#include <cmath>

namespace leo3 {

const char* to_string(SystemKind kind) {
    return kind == SystemKind::VType ? "V" : "lambda";
}

void SystemSpec::validate() const {
    std::vector<std::string> issues;
    for (int j = 0; j < 3; ++j)
        if (!std::isfinite(omega[j]))
            issues.push_back("system.omega[" + std::to_string(j) + "] must be finite");
    for (int k = 0; k < 2; ++k) {
        if (!std::isfinite(couplings[k]))
            issues.push_back("system.couplings[" + std::to_string(k) + "] must be finite");
        else if (couplings[k] < 0.0)
            issues.push_back("system.couplings[" + std::to_string(k) + "] must be >= 0");
    }
    if (issues.empty() && couplings[0] == 0.0 && couplings[1] == 0.0)
        issues.push_back("system.couplings: at least one coupling must be > 0");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

void EnvSpec::validate() const {
    std::vector<std::string> issues;
    if (!std::isfinite(Gamma) || Gamma < 0.0) issues.push_back("env.Gamma must be finite and >= 0");
    if (!std::isfinite(gamma) || gamma <= 0.0) issues.push_back("env.gamma must be finite and > 0");
    if (!std::isfinite(Omega)) issues.push_back("env.Omega must be finite");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

Complex EnvSpec::alpha(double t, double s) const {
    const double d = t - s;
    return 0.5 * Gamma * gamma * std::exp(-gamma * std::abs(d)) *
           std::exp(Complex(0.0, -Omega * d));
}

LeoStructure LeoStructure::for_kind(SystemKind kind) {
    if (kind == SystemKind::VType) return {{1.0, 1.0, 0.0}};
    return {{1.0, 0.0, 0.0}};
}

Mat3 build_hamiltonian(const SystemSpec& spec) {
    Mat3 h = Mat3::Zero();
    for (int j = 0; j < 3; ++j) h(j, j) = spec.omega[j];
    return h;
}

Mat3 build_lindblad(const SystemSpec& spec) {
    Mat3 l = Mat3::Zero();
    for (const auto& c : DecayChannels::of(spec).ch) l(c.row, c.col) = c.coupling;
    return l;
}

std::array<Complex, 3> rotating_frame_phases(const SystemSpec& spec, const LeoStructure& leo,
                                             double t, double pulse_integral) {
    std::array<Complex, 3> phi;
    for (int j = 0; j < 3; ++j) {
        const double arg = spec.omega[j] * t + leo.projector[j] * pulse_integral;
        phi[j] = std::exp(Complex(0.0, arg));
    }
    return phi;
}

Vec3 default_initial_state(SystemKind kind) {
    if (kind == SystemKind::VType) return {M_SQRT1_2, M_SQRT1_2, 0.0};
    return {1.0, 0.0, 0.0};
}

DecayChannels DecayChannels::of(const SystemSpec& spec) {
    DecayChannels out;
    if (spec.kind == SystemKind::VType) {
        // L = mu1 |3><1| + mu2 |3><2|
        out.ch[0] = {2, 0, spec.couplings[0], spec.omega[0] - spec.omega[2]};
        out.ch[1] = {2, 1, spec.couplings[1], spec.omega[1] - spec.omega[2]};
    } else {
        // L = nu2 |2><1| + nu3 |3><1|
        out.ch[0] = {1, 0, spec.couplings[0], spec.omega[0] - spec.omega[1]};
        out.ch[1] = {2, 0, spec.couplings[1], spec.omega[0] - spec.omega[2]};
    }
    return out;
}

}  // namespace leo3
