// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/rng.hpp"
#include "core/system.hpp"

using namespace leo3;

TEST_CASE("hamiltonian is the diagonal of the level energies") {
    CHECK(build_hamiltonian({SystemKind::VType, {0, 0, 0}, {1, 0}}).isZero(0.0));

    const Mat3 v = build_hamiltonian({SystemKind::VType, {1.0, 0.8, 0.0}, {1, 0.5}});
    CHECK(v(0, 0) == Complex(1.0));
    CHECK(v(1, 1) == Complex(0.8));
    CHECK(v(2, 2) == Complex(0.0));

    const Mat3 l = build_hamiltonian({SystemKind::LambdaType, {0.5, -0.5, -0.5}, {0.5, 1}});
    CHECK(l(0, 0) == Complex(0.5));
    CHECK(l(1, 1) == Complex(-0.5));
    CHECK(l(2, 2) == Complex(-0.5));

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(v(i, j) == Complex(0.0));
    CHECK((v - v.adjoint()).norm() == 0.0);
}

TEST_CASE("lindblad operator holds the couplings at the kind's positions") {
    const Mat3 v = build_lindblad({SystemKind::VType, {1.0, 0.8, 0.0}, {1.0, 0.5}});
    CHECK(v(2, 0) == Complex(1.0));
    CHECK(v(2, 1) == Complex(0.5));
    CHECK(std::abs(v.sum() - Complex(1.5)) == 0.0);  // nothing else set

    // decoupled corner case is representable even though validation flags it
    CHECK(build_lindblad({SystemKind::VType, {0, 0, 0}, {0, 0}}).isZero(0.0));

    const Mat3 l = build_lindblad({SystemKind::LambdaType, {0.5, -0.5, -0.5}, {0.5, 1.0}});
    CHECK(l(1, 0) == Complex(0.5));
    CHECK(l(2, 0) == Complex(1.0));
    CHECK(std::abs(l.sum() - Complex(1.5)) == 0.0);
}

TEST_CASE("lindblad annihilates the lower / emptied levels") {
    const Mat3 v = build_lindblad({SystemKind::VType, {1, 0.8, 0}, {1, 0.5}});
    CHECK((v * Vec3(0, 0, 1)).norm() == 0.0);

    const Mat3 l = build_lindblad({SystemKind::LambdaType, {0.5, -0.5, -0.5}, {0.5, 1}});
    CHECK((l * Vec3(0, 1, 0)).norm() == 0.0);
    CHECK((l * Vec3(0, 0, 1)).norm() == 0.0);
}

TEST_CASE("reflection about the protected subspace anticommutes with the leakage operator") {
    RngStream rng(7, "test.leo", 0);
    for (int trial = 0; trial < 20; ++trial) {
        const SystemKind kind = trial % 2 ? SystemKind::VType : SystemKind::LambdaType;
        const SystemSpec spec{kind,
                              {rng.uniform_sym(), rng.uniform_sym(), rng.uniform_sym()},
                              {rng.uniform01() + 0.1, rng.uniform01()}};
        const auto leo = LeoStructure::for_kind(kind);
        Mat3 reflection = Mat3::Zero();
        for (int j = 0; j < 3; ++j) reflection(j, j) = 2.0 * leo.projector[j] - 1.0;
        const Mat3 lind = build_lindblad(spec);
        CHECK((reflection * lind * reflection + lind).norm() < 1e-14);
        CHECK((reflection * lind + lind * reflection).norm() < 1e-14);
    }
}

TEST_CASE("rotating frame phases") {
    const SystemSpec flat{SystemKind::VType, {0, 0, 0}, {1, 0}};
    const auto leo_v = LeoStructure::for_kind(SystemKind::VType);

    SUBCASE("identity at t = 0") {
        const auto phi = rotating_frame_phases(flat, leo_v, 0.0, 0.0);
        for (const auto& p : phi) CHECK(p == Complex(1.0, 0.0));
    }
    SUBCASE("pure pulse phase") {
        const auto phi = rotating_frame_phases(flat, leo_v, 5.0, M_PI);
        CHECK(std::abs(phi[0] - Complex(-1.0, 0.0)) < 1e-15);
        CHECK(std::abs(phi[1] - Complex(-1.0, 0.0)) < 1e-15);
        CHECK(std::abs(phi[2] - Complex(1.0, 0.0)) < 1e-15);
    }
    SUBCASE("pure free evolution") {
        const SystemSpec lam{SystemKind::LambdaType, {0.5, -0.5, -0.5}, {0.5, 1.0}};
        const auto phi = rotating_frame_phases(lam, LeoStructure::for_kind(lam.kind), 2.0, 0.0);
        CHECK(std::abs(phi[0] - std::exp(Complex(0, 1.0))) < 1e-15);
        CHECK(std::abs(phi[1] - std::exp(Complex(0, -1.0))) < 1e-15);
        CHECK(std::abs(phi[2] - std::exp(Complex(0, -1.0))) < 1e-15);
    }
    SUBCASE("unit modulus") {
        RngStream rng(3, "test.phase", 0);
        for (int trial = 0; trial < 50; ++trial) {
            const SystemSpec spec{SystemKind::VType,
                                  {3 * rng.uniform_sym(), 3 * rng.uniform_sym(),
                                   3 * rng.uniform_sym()},
                                  {1.0, 0.5}};
            const auto phi = rotating_frame_phases(spec, leo_v, 10.0 * rng.uniform01(),
                                                   20.0 * rng.uniform_sym());
            for (const auto& p : phi) CHECK(std::abs(std::abs(p) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("LEO projector pattern per kind") {
    CHECK(LeoStructure::for_kind(SystemKind::VType).projector ==
          std::array<double, 3>{1.0, 1.0, 0.0});
    CHECK(LeoStructure::for_kind(SystemKind::LambdaType).projector ==
          std::array<double, 3>{1.0, 0.0, 0.0});
}

TEST_CASE("spec validation rejects bad inputs") {
    CHECK_THROWS_AS((SystemSpec{SystemKind::VType, {0, 0, 0}, {0, 0}}.validate()),
                    ValidationError);
    CHECK_THROWS_AS((SystemSpec{SystemKind::VType, {0, 0, 0}, {-1, 1}}.validate()),
                    ValidationError);
    CHECK_NOTHROW((SystemSpec{SystemKind::VType, {0, 0, 0}, {0, 0.5}}.validate()));

    CHECK_THROWS_AS((EnvSpec{-1.0, 1.0, 0.0}.validate()), ValidationError);
    CHECK_THROWS_AS((EnvSpec{1.0, 0.0, 0.0}.validate()), ValidationError);
    CHECK_NOTHROW((EnvSpec{0.0, 2.0, -0.5}.validate()));
}

TEST_CASE("environment correlation at equal times is Gamma gamma / 2") {
    const EnvSpec env{1.0, 1.0, 0.5};
    CHECK(env.alpha(3.0, 3.0) == Complex(0.5, 0.0));
    // decays symmetrically in |t - s| and rotates with the sign of t - s
    CHECK(std::abs(env.alpha(1.0, 0.0) - std::conj(env.alpha(0.0, 1.0))) < 1e-15);
    CHECK(std::abs(std::abs(env.alpha(2.0, 1.0)) - 0.5 * std::exp(-1.0)) < 1e-15);
}

TEST_CASE("default initial states") {
    const Vec3 v = default_initial_state(SystemKind::VType);
    CHECK(std::abs(v.norm() - 1.0) < 1e-15);
    CHECK(std::abs(v(0) - v(1)) < 1e-15);
    CHECK(std::abs(v(2)) == 0.0);
    const Vec3 l = default_initial_state(SystemKind::LambdaType);
    CHECK(l == Vec3(1.0, 0.0, 0.0));
}
