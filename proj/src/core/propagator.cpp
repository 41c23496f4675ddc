// SPDX-License-Identifier: Apache-2.0
#include "core/propagator.hpp"

#include <algorithm>
#include <cmath>

#include "core/parallel.hpp"

namespace leo3 {

namespace {

constexpr double kBlowupLimit = 1e6;
constexpr double kHermiticityAbort = 1e-8;

/// Channel scalars at one stage time: a_k dresses the bare coupling,
/// b_k the O-operator coefficient, both with exp(-i theta_k).
struct StageOps {
    Complex a[2];
    Complex b[2];
};

struct RotatingGenerator {
    DecayChannels channels;

    StageOps stage(const StepSchedule::Substep& sub, const CoeffSeries& coeffs,
                   std::size_t sub_index, double t) const {
        StageOps ops;
        const double c_int = sub.c0 + sub.amp * (t - sub.t0);
        const auto w = coeffs.eval_in(sub_index, t);
        for (int k = 0; k < 2; ++k) {
            const Complex phase = std::exp(Complex(0.0, -(channels.ch[k].gap * t + c_int)));
            ops.a[k] = channels.ch[k].coupling * phase;
            ops.b[k] = w[k] * phase;
        }
        return ops;
    }

    Mat3 lindblad(const StageOps& ops) const {
        Mat3 l = Mat3::Zero();
        for (int k = 0; k < 2; ++k) l(channels.ch[k].row, channels.ch[k].col) = ops.a[k];
        return l;
    }

    Mat3 ansatz(const StageOps& ops) const {
        Mat3 o = Mat3::Zero();
        for (int k = 0; k < 2; ++k) o(channels.ch[k].row, channels.ch[k].col) = ops.b[k];
        return o;
    }

    // [L, sigma O^dag] + [O sigma, L^dag]
    Mat3 me_rhs(const StageOps& ops, const Mat3& sigma) const {
        const Mat3 l = lindblad(ops);
        const Mat3 o = ansatz(ops);
        const Mat3 m1 = sigma * o.adjoint();
        const Mat3 m2 = o * sigma;
        return l * m1 - m1 * l + m2 * l.adjoint() - l.adjoint() * m2;
    }

    // (z* L - L^dag O) chi
    Vec3 qsd_rhs(const StageOps& ops, Complex z_conj, const Vec3& chi) const {
        Vec3 out = Vec3::Zero();
        Vec3 o_chi = Vec3::Zero();
        for (int k = 0; k < 2; ++k) {
            const auto& c = channels.ch[k];
            o_chi(c.row) += ops.b[k] * chi(c.col);
            out(c.row) += z_conj * ops.a[k] * chi(c.col);
        }
        for (int k = 0; k < 2; ++k) {
            const auto& c = channels.ch[k];
            out(c.col) -= std::conj(ops.a[k]) * o_chi(c.row);
        }
        return out;
    }
};

void check_alignment(const CoeffSeries& coeffs, const SimGrid& grid) {
    if (!(coeffs.grid() == grid))
        throw ValidationError({"coefficient series grid does not match the simulation grid"});
    if (coeffs.segments.empty())
        throw ValidationError({"coefficient series lacks substep data (was it produced by the "
                               "grid oracle?)"});
}

void check_leo(const SystemSpec& system, const LeoStructure& leo) {
    if (leo.projector != LeoStructure::for_kind(system.kind).projector)
        throw ValidationError({"LEO projector does not match the system kind"});
}

template <class NodeFn>
MeDiagnostics me_run(const SystemSpec& system, const CoeffSeries& coeffs, const Mat3& rho0,
                     NodeFn&& on_node) {
    const RotatingGenerator gen{DecayChannels::of(system)};
    MeDiagnostics diag;
    diag.min_eigenvalue = 1.0;

    Eigen::SelfAdjointEigenSolver<Mat3> eigs;
    const auto monitor = [&](std::size_t node, double t, const Mat3& sigma) {
        const double trace_err = std::abs(sigma.trace() - Complex(1.0, 0.0));
        const double herm_err = (sigma - sigma.adjoint().eval()).cwiseAbs().maxCoeff();
        diag.max_trace_error = std::max(diag.max_trace_error, trace_err);
        diag.max_hermiticity_error = std::max(diag.max_hermiticity_error, herm_err);
        if (herm_err > kHermiticityAbort)
            throw IntegrationBlowup("density-matrix hermiticity drift (integrator fault)", t);
        eigs.computeDirect(Mat3(0.5 * (sigma + sigma.adjoint())), Eigen::EigenvaluesOnly);
        diag.min_eigenvalue = std::min(diag.min_eigenvalue, eigs.eigenvalues().minCoeff());
        on_node(node, t, sigma);
    };

    Mat3 sigma = rho0;
    monitor(0, 0.0, sigma);
    for (std::size_t s = 0; s < coeffs.schedule.subs.size(); ++s) {
        const auto& sub = coeffs.schedule.subs[s];
        const double h = sub.t1 - sub.t0;
        const double tm = sub.t0 + 0.5 * h;
        const StageOps o1 = gen.stage(sub, coeffs, s, sub.t0);
        const StageOps om = gen.stage(sub, coeffs, s, tm);
        const StageOps o2 = gen.stage(sub, coeffs, s, sub.t1);
        const Mat3 k1 = gen.me_rhs(o1, sigma);
        const Mat3 k2 = gen.me_rhs(om, sigma + (0.5 * h) * k1);
        const Mat3 k3 = gen.me_rhs(om, sigma + (0.5 * h) * k2);
        const Mat3 k4 = gen.me_rhs(o2, sigma + h * k3);
        sigma += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!sigma.allFinite())
            throw IntegrationBlowup("density matrix left the finite domain", sub.t1);
        if (sub.closes_node) monitor(sub.node + 1, sub.t1, sigma);
    }
    return diag;
}

Vec3 normalized_or_throw(const Vec3& psi0) {
    const double n = psi0.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw ValidationError({"initial state must be nonzero and finite"});
    return psi0 / n;
}

double delta_method_stderr(double mean, double sq_sum, std::size_t n) {
    if (n < 2 || mean <= 0.0) return 0.0;
    const auto dn = static_cast<double>(n);
    const double var = std::max(0.0, (sq_sum - dn * mean * mean) / (dn - 1.0));
    const double sem = std::sqrt(var / dn);
    return 0.5 * sem / std::sqrt(mean);
}

}  // namespace

MeResult me_propagate(const Mat3& rho0, const SystemSpec& system, const EnvSpec& env,
                      const LeoStructure& leo, const PulseProgram& pulse,
                      const CoeffSeries& coeffs, const SimGrid& grid) {
    (void)env;
    (void)pulse;
    system.validate();
    check_leo(system, leo);
    check_alignment(coeffs, grid);
    MeResult result{grid, std::vector<Mat3>(grid.nodes()), {}};
    result.diag = me_run(system, coeffs, rho0,
                         [&](std::size_t node, double, const Mat3& sigma) {
                             result.rho[node] = sigma;
                         });
    return result;
}

FidelityCurve me_fidelity(const Vec3& psi0, const MeResult& result) {
    const Vec3 psi = normalized_or_throw(psi0);
    FidelityCurve curve;
    curve.t.resize(result.rho.size());
    curve.fidelity.resize(result.rho.size());
    for (std::size_t i = 0; i < result.rho.size(); ++i) {
        curve.t[i] = result.grid.time(i);
        const double p = std::real(psi.dot(result.rho[i] * psi));
        curve.fidelity[i] = std::sqrt(std::max(0.0, p));
    }
    return curve;
}

FidelityCurve me_fidelity_lab(const Vec3& psi0, const MeResult& result, const SystemSpec& system,
                              const LeoStructure& leo, const PulseProgram& pulse) {
    const Vec3 psi = normalized_or_throw(psi0);
    FidelityCurve curve;
    curve.t.resize(result.rho.size());
    curve.fidelity.resize(result.rho.size());
    for (std::size_t i = 0; i < result.rho.size(); ++i) {
        const double t = result.grid.time(i);
        const auto phi = rotating_frame_phases(system, leo, t, pulse.integral_to(t));
        Mat3 u = Mat3::Zero();  // lab rho = U sigma U^dag with U = diag(conj(phi))
        for (int j = 0; j < 3; ++j) u(j, j) = std::conj(phi[j]);
        const Mat3 lab = u * result.rho[i] * u.adjoint();
        curve.t[i] = t;
        curve.fidelity[i] = std::sqrt(std::max(0.0, std::real(psi.dot(lab * psi))));
    }
    return curve;
}

std::vector<Vec3> propagate_trajectory(const Vec3& psi0, const SystemSpec& system,
                                       const EnvSpec& env, const LeoStructure& leo,
                                       const PulseProgram& pulse, const CoeffSeries& coeffs,
                                       const NoisePath& noise, const SimGrid& grid) {
    (void)env;
    system.validate();
    check_leo(system, leo);
    check_alignment(coeffs, grid);
    if (!(noise.grid == grid))
        throw ValidationError({"noise path grid does not match the simulation grid"});

    const RotatingGenerator gen{DecayChannels::of(system)};
    std::vector<Vec3> out(grid.nodes());
    Vec3 chi = normalized_or_throw(psi0);
    out[0] = chi;

    for (std::size_t s = 0; s < coeffs.schedule.subs.size(); ++s) {
        const auto& sub = coeffs.schedule.subs[s];
        const double h = sub.t1 - sub.t0;
        const double tm = sub.t0 + 0.5 * h;
        const Complex zc = std::conj(noise.samples[sub.node]);
        const StageOps o1 = gen.stage(sub, coeffs, s, sub.t0);
        const StageOps om = gen.stage(sub, coeffs, s, tm);
        const StageOps o2 = gen.stage(sub, coeffs, s, sub.t1);
        const Vec3 k1 = gen.qsd_rhs(o1, zc, chi);
        const Vec3 k2 = gen.qsd_rhs(om, zc, chi + (0.5 * h) * k1);
        const Vec3 k3 = gen.qsd_rhs(om, zc, chi + (0.5 * h) * k2);
        const Vec3 k4 = gen.qsd_rhs(o2, zc, chi + h * k3);
        chi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!chi.allFinite() || chi.norm() > kBlowupLimit)
            throw IntegrationBlowup("trajectory state left the finite domain", sub.t1);
        if (sub.closes_node) out[sub.node + 1] = chi;
    }

    // convert the rotating-frame states back to the Schrodinger frame
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double t = grid.time(i);
        const auto phi = rotating_frame_phases(system, leo, t, pulse.integral_to(t));
        for (int j = 0; j < 3; ++j) out[i](j) *= std::conj(phi[j]);
    }
    return out;
}

std::vector<Vec3> to_rotating_frame(std::span<const Vec3> states, const SystemSpec& system,
                                    const LeoStructure& leo, const PulseProgram& pulse,
                                    const SimGrid& grid) {
    std::vector<Vec3> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const double t = grid.time(i);
        const auto phi = rotating_frame_phases(system, leo, t, pulse.integral_to(t));
        for (int j = 0; j < 3; ++j) out[i](j) = phi[j] * states[i](j);
    }
    return out;
}

FidelityCurve qsd_fidelity(const Vec3& psi0, std::span<const std::vector<Vec3>> trajectories,
                           const SimGrid& grid) {
    if (trajectories.empty()) throw ValidationError({"fidelity needs a nonempty ensemble"});
    const Vec3 psi = normalized_or_throw(psi0);
    const std::size_t nodes = grid.nodes();
    for (const auto& traj : trajectories)
        if (traj.size() != nodes)
            throw ValidationError({"trajectory length does not match the grid"});

    FidelityCurve curve;
    curve.t.resize(nodes);
    curve.fidelity.resize(nodes);
    curve.stderr.resize(nodes);
    const auto n = trajectories.size();
    for (std::size_t i = 0; i < nodes; ++i) {
        double sum = 0.0, sq = 0.0;
        for (const auto& traj : trajectories) {
            const double m = std::norm(psi.dot(traj[i]));
            sum += m;
            sq += m * m;
        }
        const double mean = sum / static_cast<double>(n);
        curve.t[i] = grid.time(i);
        curve.fidelity[i] = std::sqrt(std::max(0.0, mean));
        curve.stderr[i] = delta_method_stderr(mean, sq, n);
    }
    return curve;
}

QsdEnsembleResult qsd_ensemble_fidelity(const Vec3& psi0, const SystemSpec& system,
                                        const EnvSpec& env, const LeoStructure& leo,
                                        const PulseProgram& pulse, const CoeffSeries& coeffs,
                                        const SimGrid& grid, std::size_t n_traj,
                                        std::uint64_t seed, int threads) {
    if (n_traj < 2) throw ValidationError({"ensemble needs at least 2 trajectories"});
    system.validate();
    env.validate();
    check_alignment(coeffs, grid);
    const Vec3 psi = normalized_or_throw(psi0);
    check_leo(system, leo);
    const RotatingGenerator gen{DecayChannels::of(system)};
    (void)pulse;

    const std::size_t nodes = grid.nodes();
    struct Block {
        std::vector<double> sum, sq, norm_sum, norm_sq;
    };
    threads = std::max(1, threads);
    const std::size_t blocks = std::min<std::size_t>(static_cast<std::size_t>(threads), n_traj);
    const std::size_t chunk = (n_traj + blocks - 1) / blocks;
    std::vector<Block> acc(blocks);
    for (auto& b : acc) {
        b.sum.assign(nodes, 0.0);
        b.sq.assign(nodes, 0.0);
        b.norm_sum.assign(nodes, 0.0);
        b.norm_sq.assign(nodes, 0.0);
    }

    parallel_for(blocks, threads, [&](std::size_t blk) {
        Block& b = acc[blk];
        const std::size_t lo = blk * chunk;
        const std::size_t hi = std::min(n_traj, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) {
            const NoisePath noise = generate_ou_path(env, grid, seed, i);
            Vec3 chi = psi;
            const auto record = [&](std::size_t node) {
                const double m = std::norm(psi.dot(chi));
                const double nn = chi.squaredNorm();
                b.sum[node] += m;
                b.sq[node] += m * m;
                b.norm_sum[node] += nn;
                b.norm_sq[node] += nn * nn;
            };
            record(0);
            for (std::size_t s = 0; s < coeffs.schedule.subs.size(); ++s) {
                const auto& sub = coeffs.schedule.subs[s];
                const double h = sub.t1 - sub.t0;
                const double tm = sub.t0 + 0.5 * h;
                const Complex zc = std::conj(noise.samples[sub.node]);
                const StageOps o1 = gen.stage(sub, coeffs, s, sub.t0);
                const StageOps om = gen.stage(sub, coeffs, s, tm);
                const StageOps o2 = gen.stage(sub, coeffs, s, sub.t1);
                const Vec3 k1 = gen.qsd_rhs(o1, zc, chi);
                const Vec3 k2 = gen.qsd_rhs(om, zc, chi + (0.5 * h) * k1);
                const Vec3 k3 = gen.qsd_rhs(om, zc, chi + (0.5 * h) * k2);
                const Vec3 k4 = gen.qsd_rhs(o2, zc, chi + h * k3);
                chi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                if (!chi.allFinite() || chi.norm() > kBlowupLimit)
                    throw IntegrationBlowup("trajectory state left the finite domain", sub.t1);
                if (sub.closes_node) record(sub.node + 1);
            }
        }
    });

    QsdEnsembleResult result;
    result.n_trajectories = n_traj;
    result.fidelity.t.resize(nodes);
    result.fidelity.fidelity.resize(nodes);
    result.fidelity.stderr.resize(nodes);
    result.mean_norm.resize(nodes);
    result.norm_stderr.resize(nodes);
    const auto dn = static_cast<double>(n_traj);
    for (std::size_t i = 0; i < nodes; ++i) {
        double sum = 0.0, sq = 0.0, ns = 0.0, nq = 0.0;
        for (const auto& b : acc) {  // fixed block order
            sum += b.sum[i];
            sq += b.sq[i];
            ns += b.norm_sum[i];
            nq += b.norm_sq[i];
        }
        const double mean = sum / dn;
        result.fidelity.t[i] = grid.time(i);
        result.fidelity.fidelity[i] = std::sqrt(std::max(0.0, mean));
        result.fidelity.stderr[i] = delta_method_stderr(mean, sq, n_traj);
        result.mean_norm[i] = ns / dn;
        const double var = std::max(0.0, (nq - dn * result.mean_norm[i] * result.mean_norm[i]) /
                                             (dn - 1.0));
        result.norm_stderr[i] = std::sqrt(var / dn);
    }
    return result;
}

EquivalencePair v_lambda_equivalent_fidelity(const EnvSpec& env, const PulseProgram& pulse,
                                             const SimGrid& grid, double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw ValidationError({"equivalence coupling mu must be finite and > 0"});

    const SystemSpec v{SystemKind::VType, {0.5, 0.5, -0.5}, {mu, mu}};
    const SystemSpec lambda{SystemKind::LambdaType, {0.5, -0.5, -0.5}, {mu, mu}};
    const Vec3 psi_v = Vec3(M_SQRT1_2, M_SQRT1_2, 0.0);
    const Vec3 psi_l = Vec3(1.0, 0.0, 0.0);

    EquivalencePair pair;
    {
        const auto coeffs = integrate_coeffs(v, env, pulse, grid);
        const auto result = me_propagate(psi_v * psi_v.adjoint(), v, env,
                                         LeoStructure::for_kind(v.kind), pulse, coeffs, grid);
        pair.v_curve = me_fidelity(psi_v, result);
    }
    {
        const auto coeffs = integrate_coeffs(lambda, env, pulse, grid);
        const auto result = me_propagate(psi_l * psi_l.adjoint(), lambda, env,
                                         LeoStructure::for_kind(lambda.kind), pulse, coeffs, grid);
        pair.lambda_curve = me_fidelity(psi_l, result);
    }
    return pair;
}

FidelityCurve equivalence_riccati_fidelity(const EnvSpec& env, const PulseProgram& pulse,
                                           const SimGrid& grid, double mu) {
    env.validate();
    const auto schedule = StepSchedule::build(grid, pulse);
    FidelityCurve curve;
    curve.t.resize(grid.nodes());
    curve.fidelity.resize(grid.nodes());
    curve.t[0] = 0.0;
    curve.fidelity[0] = 1.0;

    const double two_mu_sq = 2.0 * mu * mu;
    const auto rhs = [&](const std::array<Complex, 2>& gh, double c) {
        const Complex g = gh[0];
        std::array<Complex, 2> d;
        d[0] = 0.5 * env.Gamma * env.gamma + (Complex(-env.gamma, 1.0 - env.Omega + c)) * g +
               two_mu_sq * g * g;
        d[1] = -two_mu_sq * g * gh[1];
        return d;
    };

    std::array<Complex, 2> gh{Complex{}, Complex(1.0, 0.0)};
    for (const auto& sub : schedule.subs) {
        const double h = sub.t1 - sub.t0;
        const auto k1 = rhs(gh, sub.amp);
        const auto k2 = rhs({gh[0] + 0.5 * h * k1[0], gh[1] + 0.5 * h * k1[1]}, sub.amp);
        const auto k3 = rhs({gh[0] + 0.5 * h * k2[0], gh[1] + 0.5 * h * k2[1]}, sub.amp);
        const auto k4 = rhs({gh[0] + h * k3[0], gh[1] + h * k3[1]}, sub.amp);
        for (int j = 0; j < 2; ++j)
            gh[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        if (sub.closes_node) {
            curve.t[sub.node + 1] = sub.t1;
            curve.fidelity[sub.node + 1] = std::abs(gh[1]);
        }
    }
    return curve;
}

}  // namespace leo3
