// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "core/experiments.hpp"
#include "core/pulse.hpp"
#include "core/system.hpp"

namespace leo3 {

inline constexpr int kConfigSchemaVersion = 1;

enum class Method { MasterEquation, Qsd };

/// Optional white-noise dressing block of a pulse config. The resample
/// interval defaults to delta/10 when left unset.
struct NoiseConfig {
    NoiseMode mode = NoiseMode::Global;
    double w = 0.0;
    NoiseDist dist = NoiseDist::Gaussian;
    std::optional<double> resample_interval;

    bool operator==(const NoiseConfig&) const = default;
};

enum class PulseVariant { Regular, Random };

struct PulseConfig {
    PulseVariant variant = PulseVariant::Regular;
    double tau = 0.02;
    double delta = 0.012;
    double phi0 = 1.0;
    double a_tau = 0.0;  // random variant only
    double a_phi = 0.0;
    std::optional<NoiseConfig> noise;

    bool operator==(const PulseConfig&) const = default;

    RegularPulseSpec regular() const { return {tau, delta, phi0}; }
};

struct GridConfig {
    double horizon = 40.0;
    std::optional<double> dt;  ///< unset = "auto" step rule

    bool operator==(const GridConfig&) const = default;
};

struct EnsembleConfig {
    std::size_t n_traj = 1000;
    std::size_t n_realizations = 100;

    bool operator==(const EnsembleConfig&) const = default;
};

struct DiagramConfig {
    double delta_min = 0.002, delta_max = 0.08;
    std::size_t n_delta = 40;
    double dark_min = 0.0, dark_max = 0.12;
    std::size_t n_dark = 40;
    double t_read = 10.0;
    double phi0 = 1.0;

    bool operator==(const DiagramConfig&) const = default;

    std::vector<double> delta_grid() const;
    std::vector<double> dark_grid() const;
};

struct ScanPhi0Config {
    std::vector<double> values{0.0, 0.4, 0.7, 1.0};
    double t_read = 40.0;

    bool operator==(const ScanPhi0Config&) const = default;
};

struct ScanRatioConfig {
    std::vector<double> ratios;  // default: 0.05..1.00 step 0.05
    double t_read = 40.0;
    double epsilon = 0.01;

    ScanRatioConfig();
    bool operator==(const ScanRatioConfig&) const = default;
};

struct EquivalenceConfig {
    double mu = M_SQRT1_2;
    double horizon = 10.0;

    bool operator==(const EquivalenceConfig&) const = default;
};

/// Full run description. Field defaults reproduce the standard V-type demo
/// scenario (level gaps (1, 0.8), couplings (1, 0.5), environment
/// Gamma = gamma = 1, Omega = 0.5, regular pulse tau = 0.02 at duty 0.6).
struct RunConfig {
    SystemSpec system{SystemKind::VType, {1.0, 0.8, 0.0}, {1.0, 0.5}};
    EnvSpec env{1.0, 1.0, 0.5};
    std::optional<std::array<double, 6>> psi0;  ///< re/im triples; default per kind
    PulseConfig pulse;
    GridConfig grid;
    Method method = Method::MasterEquation;
    EnsembleConfig ensemble;
    DiagramConfig diagram;
    ScanPhi0Config scan_phi0;
    ScanRatioConfig scan_ratio;
    EquivalenceConfig equivalence;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string output = "out";
    bool export_coeffs = false;
    bool export_pulse = false;

    bool operator==(const RunConfig& other) const;

    Vec3 initial_state() const;
    double resolved_dt() const;
    NoiseDressing dressing(std::uint64_t seed_value) const;
};

/// Parses and fully validates a JSON config. Unknown keys are errors; every
/// violation found is reported, not just the first.
RunConfig parse_config(const std::string& json_text);

/// Canonical JSON serialization; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

/// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string config_hash(const RunConfig& config);

}  // namespace leo3
