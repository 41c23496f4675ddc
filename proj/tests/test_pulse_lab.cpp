// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "core/pulse.hpp"
#include "core/rng.hpp"

using namespace leo3;

namespace {
const RegularPulseSpec kWide{0.8, 0.48, 1.0};  // amplitude 2.0833..., first window [0.32, 0.8]
}

TEST_CASE("regular sequence amplitude windows") {
    const auto program = realize_regular(kWide, 8.0);
    CHECK(program.amplitude_at(0.1) == 0.0);  // before the first window
    CHECK(program.amplitude_at(0.5) == doctest::Approx(1.0 / 0.48).epsilon(1e-14));
    // both window boundaries belong to the pulse
    CHECK(program.amplitude_at(0.32) == doctest::Approx(1.0 / 0.48));
    CHECK(program.amplitude_at(0.8) == doctest::Approx(1.0 / 0.48));
    CHECK(program.amplitude_at(0.81) == 0.0);
}

TEST_CASE("running integral is exact segment arithmetic") {
    const auto program = realize_regular(kWide, 8.0);
    CHECK(program.integral_to(0.32) == 0.0);
    CHECK(program.integral_to(0.8) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(program.integral_to(0.56) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(program.integral_to(4 * 0.8) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("segment exactness: n periods accumulate n areas") {
    for (const auto& spec : {kWide, RegularPulseSpec{0.02, 0.012, 1.0},
                             RegularPulseSpec{0.03, 0.007, 0.37}}) {
        const auto program = realize_regular(spec, 51.0 * spec.tau);
        for (int n = 1; n <= 50; ++n) {
            const double err = std::abs(program.integral_to(n * spec.tau) - n * spec.phi0);
            CHECK(err <= 1e-12 * n);
        }
    }
}

TEST_CASE("validation rejects bad pulse specs") {
    CHECK_THROWS_AS(realize_regular({0.4, 0.48, 1.0}, 8.0), ValidationError);  // delta > tau
    CHECK_THROWS_AS(realize_regular({0.8, 0.0, 1.0}, 8.0), ValidationError);
    CHECK_THROWS_AS(
        realize_regular({0.8, 0.48, std::numeric_limits<double>::infinity()}, 8.0),
        ValidationError);
    CHECK_THROWS_AS(realize_regular(kWide, -1.0), ValidationError);
    const std::string msg = [] {
        try {
            realize_regular({0.4, 0.48, 1.0}, 8.0);
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string();
    }();
    CHECK(msg.find("delta") != std::string::npos);
    CHECK(msg.find("tau") != std::string::npos);
}

TEST_CASE("horizon truncation and coverage") {
    // horizon cuts the second window
    const auto program = realize_regular(kWide, 1.36);
    CHECK(program.horizon() == doctest::Approx(1.36));
    const auto& segs = program.segments();
    CHECK(segs.front().t0 == 0.0);
    for (std::size_t i = 1; i < segs.size(); ++i) CHECK(segs[i].t0 == segs[i - 1].t1);
    CHECK(segs.back().t1 == doctest::Approx(1.36));
    // truncated window holds a partial area: [1.12, 1.36] of [1.12, 1.6]
    CHECK(program.integral_to(1.36) == doctest::Approx(1.0 + (0.24 / 0.48)));

    // horizon before the first window: a single dark segment
    const auto dark = realize_regular(kWide, 0.2);
    CHECK(dark.segments().size() == 1);
    CHECK(dark.integral_to(0.2) == 0.0);

    CHECK_THROWS_AS(program.amplitude_at(2.0), std::out_of_range);
    CHECK_THROWS_AS(program.integral_to(-0.5), std::out_of_range);
}

TEST_CASE("full-duty pulse has no dark segments") {
    const auto program = realize_regular({0.5, 0.5, 2.0}, 2.0);
    for (const auto& s : program.segments()) CHECK(s.is_pulse);
    CHECK(program.amplitude_at(0.0) == doctest::Approx(4.0));
    CHECK(program.integral_to(2.0) == doctest::Approx(8.0));
}

TEST_CASE("randomized sequence with zero amplitudes equals the regular one") {
    const RandomPulseSpec spec{kWide, 0.0, 0.0, 42};
    CHECK(realize_random(spec, 20.0) == realize_regular(kWide, 20.0));
}

TEST_CASE("randomized sequence is deterministic in the seed") {
    const RandomPulseSpec spec{kWide, 0.4, 0.9, 42};
    CHECK(realize_random(spec, 40.0) == realize_random(spec, 40.0));
    const RandomPulseSpec other{kWide, 0.4, 0.9, 43};
    CHECK_FALSE(realize_random(other, 40.0) == realize_random(spec, 40.0));
}

TEST_CASE("randomized sequence statistics") {
    // >= 1e4 quasi-periods; no clamping at duty 0.6 with a_tau = 0.4
    const RegularPulseSpec base{0.02, 0.012, 1.0};
    const RandomPulseSpec spec{base, 0.4, 0.9, 2024};
    const auto program = realize_random(spec, 250.0);

    double area_sum = 0.0;
    std::size_t pulses = 0;
    double last_end = 0.0;
    double period_sum = 0.0;
    std::size_t periods = 0;
    for (const auto& s : program.segments()) {
        if (!s.is_pulse) continue;
        if (s.t1 < program.horizon()) {  // skip the truncated final window
            area_sum += s.amplitude * (s.t1 - s.t0);
            ++pulses;
            if (pulses > 1) {
                period_sum += s.t1 - last_end;
                ++periods;
            }
            last_end = s.t1;
        }
    }
    REQUIRE(pulses >= 10000);
    CHECK(std::abs(area_sum / pulses - base.phi0) < 0.02 * base.phi0);
    CHECK(std::abs(period_sum / periods - base.tau) < 0.02 * base.tau);
}

TEST_CASE("quasi-periods shorter than the duration are clamped") {
    const RegularPulseSpec base{0.02, 0.016, 1.0};  // duty 0.8; a_tau = 0.4 dips below delta
    const auto program = realize_random({base, 0.4, 0.0, 7}, 50.0);
    for (const auto& s : program.segments()) {
        if (s.is_pulse && s.t1 < program.horizon())
            CHECK(s.t1 - s.t0 == doctest::Approx(base.delta).epsilon(1e-9));
    }
    CHECK_THROWS_AS(realize_random({base, 1.0, 0.0, 7}, 50.0), ValidationError);
}

TEST_CASE("noise dressing leaves the program unchanged at zero strength") {
    const auto program = realize_regular(kWide, 8.0);
    const NoiseDressing off{NoiseMode::Global, 0.0, NoiseDist::Gaussian, 0.048, 11};
    CHECK(apply_noise(program, off) == program);
}

TEST_CASE("local noise keeps dark intervals exactly dark") {
    const auto program = realize_regular(kWide, 8.0);
    const NoiseDressing local{NoiseMode::Local, 1.0, NoiseDist::Gaussian, 0.048, 11};
    const auto noisy = apply_noise(program, local);
    for (const auto& s : noisy.segments()) {
        if (!s.is_pulse) CHECK(s.amplitude == 0.0);
    }
    bool changed = false;  // pulse intervals did pick up noise
    for (const auto& s : noisy.segments())
        if (s.is_pulse && s.amplitude != 1.0 / 0.48) changed = true;
    CHECK(changed);
}

TEST_CASE("global gaussian noise has zero mean within sampling error") {
    const auto program = realize_regular(kWide, 80.0);
    const NoiseDressing global{NoiseMode::Global, 1.0, NoiseDist::Gaussian, 0.048, 5};
    const auto noisy = apply_noise(program, global);
    const double scale = program.base_phi0() / program.base_tau() * global.w;

    // time-weighted mean of the added noise over [0, T]
    const double added =
        (noisy.integral_to(noisy.horizon()) - program.integral_to(program.horizon())) /
        (scale * program.horizon());
    const auto intervals = std::ceil(program.horizon() / 0.048);
    CHECK(std::abs(added) <= 3.0 / std::sqrt(intervals));
}

TEST_CASE("noise dressing preserves the mean pulse integral") {
    const RegularPulseSpec base{0.02, 0.012, 1.0};
    const auto program = realize_regular(base, 4.0);
    const double reference = program.integral_to(program.horizon());
    for (const NoiseMode mode : {NoiseMode::Global, NoiseMode::Local}) {
        double sum = 0.0, sq = 0.0;
        const std::size_t n = 1000;
        for (std::size_t i = 0; i < n; ++i) {
            const NoiseDressing d{mode, 1.0, NoiseDist::Uniform, base.delta / 10.0,
                                  RngStream(99, "test.noise", i).next_u64()};
            const double v = apply_noise(program, d).integral_to(program.horizon());
            sum += v;
            sq += v * v;
        }
        const double mean = sum / n;
        const double sem = std::sqrt(std::max(0.0, (sq - n * mean * mean) / (n - 1.0)) / n);
        CHECK(std::abs(mean - reference) <= 3.0 * sem + 1e-12);
    }
}

TEST_CASE("noise dressing validation") {
    const auto program = realize_regular(kWide, 8.0);
    CHECK_THROWS_AS(apply_noise(program, {NoiseMode::Global, 1.0, NoiseDist::Gaussian, 0.0, 1}),
                    ValidationError);
    CHECK_THROWS_AS(apply_noise(program, {NoiseMode::Global, 1.0, NoiseDist::Gaussian, 0.6, 1}),
                    ValidationError);  // interval > delta
    CHECK_THROWS_AS(
        apply_noise(program, {NoiseMode::Global, -0.5, NoiseDist::Gaussian, 0.048, 1}),
        ValidationError);
}

TEST_CASE("noise dressing is deterministic and covers the horizon contiguously") {
    const auto program = realize_regular(kWide, 8.0);
    const NoiseDressing d{NoiseMode::Global, 0.7, NoiseDist::Gaussian, 0.048, 123};
    const auto a = apply_noise(program, d);
    CHECK(a == apply_noise(program, d));
    const auto& segs = a.segments();
    CHECK(segs.front().t0 == 0.0);
    for (std::size_t i = 1; i < segs.size(); ++i) CHECK(segs[i].t0 == segs[i - 1].t1);
    CHECK(segs.back().t1 == doctest::Approx(8.0));
}

TEST_CASE("csv export lists segments with the fixed header") {
    const auto program = realize_regular(kWide, 1.0);
    std::ostringstream os;
    program.write_csv(os);
    const std::string text = os.str();
    CHECK(text.rfind("t_start,t_end,amplitude\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == program.segments().size() + 1);
}
