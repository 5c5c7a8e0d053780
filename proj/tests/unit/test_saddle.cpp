#include <gtest/gtest.h>

#include <cmath>

#include "ccsfa/saddle.hpp"

using namespace ccsfa;

namespace {

double gradient_norm(const AtomicSystem& a, const HalfCyclePulse& pu, const SaddlePoint& s, double p, int order) {
    const auto g = truncated_gradient(a, pu, s, p, order);
    return detail::scaled_norm(g[0], g[1], a.kappa(), a.kappa() * derive(a, pu).es);
}

// Newton on grad(zeta0 + zeta1 + zeta2qc) with the zeta0 + zeta1 Hessian.
SaddlePoint direct_classical(const AtomicSystem& a, const HalfCyclePulse& pu, double p, SaddlePoint s) {
    for (int it = 0; it < 40; ++it) {
        const ZetaJet j = zeta_jet(a, pu, s.x, s.t, p, 2);
        const cplx gx = j.z0.x + j.z1.x + j.z2qc.x;
        const cplx gt = j.z0.t + j.z1.t + j.z2qc.t;
        const cplx hxx = j.z0.xx + j.z1.xx, hxt = j.z0.xt + j.z1.xt, htt = j.z0.tt + j.z1.tt;
        const cplx det = hxx * htt - hxt * hxt;
        const cplx dx = -(htt * gx - hxt * gt) / det;
        const cplx dt = -(-hxt * gx + hxx * gt) / det;
        s = {s.x + dx, s.t + dt};
        if (std::abs(dx) < 1e-13 && std::abs(dt) < 1e-11) break;
    }
    return s;
}

}  // namespace

TEST(Seed, Example) {
    const AtomicSystem a(1.0, 1.0);
    const HalfCyclePulse pu(0.05, 0.005);
    const SaddlePoint s = zeroth_seed(a, pu);
    EXPECT_NEAR(std::asinh(0.1), 0.099834, 1e-6);
    EXPECT_NEAR(s.t.imag(), 19.967 - 4.461, 2e-3);
    EXPECT_NEAR(s.t.real(), 0.0, 0.0);
    EXPECT_NEAR(s.x.real(), 4.461, 1e-3);
}

TEST(SolveZeroth, ConvergesNearSeed) {
    for (double f : {0.01, 0.02, 0.05}) {
        const AtomicSystem a(1.0, 1.0);
        const HalfCyclePulse pu = pulse_from_gamma(a, f, 0.1);
        const double p = pu.drift_momentum();
        const SaddleSolution s = solve_zeroth(a, pu, p);
        EXPECT_LT(s.residual0, 1e-10);
        EXPECT_LT(gradient_norm(a, pu, {s.x0, s.t0}, p, 0), 1e-10);
        const SaddlePoint seed = zeroth_seed(a, pu);
        // corrections to the seed formulas are of relative order sqrt(E_s/E_a)
        EXPECT_LT(std::abs(s.t0 - seed.t) / std::abs(seed.t), 3.0 * std::sqrt(f)) << f;
        EXPECT_LT(std::abs(s.x0 - seed.x) / std::abs(seed.x), 3.0 * std::sqrt(f)) << f;
        // p = p0 puts the saddle on the imaginary time axis
        EXPECT_NEAR(s.t0.real(), 0.0, 1e-10);
        EXPECT_NEAR(s.x0.imag(), 0.0, 1e-10);
        EXPECT_GT(s.t0.imag(), 0.0);
    }
}

TEST(SolveZeroth, Deterministic) {
    const AtomicSystem a(1.0, 1.0);
    const HalfCyclePulse pu = pulse_from_gamma(a, 0.03, 0.5);
    const SaddleSolution u = solve_saddle(a, pu, 1.2, 2);
    const SaddleSolution v = solve_saddle(a, pu, 1.2, 2);
    EXPECT_EQ(u.t0, v.t0);
    EXPECT_EQ(u.x0, v.x0);
    EXPECT_EQ(u.t2, v.t2);
    EXPECT_EQ(u.x2, v.x2);
}

TEST(SolveZeroth, RejectsMirrorSeed) {
    const AtomicSystem a(1.0, 1.0);
    const HalfCyclePulse pu = pulse_from_gamma(a, 0.02, 0.1);
    EXPECT_THROW(solve_zeroth(a, pu, pu.drift_momentum(), SaddlePoint{cplx{6.0}, cplx{0.0, -40.0}}), branch_error);
    EXPECT_THROW(solve_zeroth(a, pu, pu.drift_momentum(), SaddlePoint{cplx{-6.0}, cplx{0.0, 40.0}}), branch_error);
}

TEST(Corrections, VanishWithoutCharge) {
    const AtomicSystem a(1.0, 0.0);
    const HalfCyclePulse pu = pulse_from_gamma(a, 0.02, 0.1);
    const SaddleSolution s = solve_saddle(a, pu, pu.drift_momentum() - 0.1, 2);
    EXPECT_EQ(s.x1, cplx{});
    EXPECT_EQ(s.t1, cplx{});
    EXPECT_EQ(s.x2, cplx{});
    EXPECT_EQ(s.t2, cplx{});
}

TEST(Corrections, FirstOrderLinearInCharge) {
    const HalfCyclePulse pu = pulse_from_gamma(AtomicSystem(1.0, 1.0), 0.02, 0.1);
    const double p = pu.drift_momentum() - 0.05;
    const SaddleSolution one = solve_saddle(AtomicSystem(1.0, 1.0), pu, p, 2);
    const SaddleSolution two = solve_saddle(AtomicSystem(1.0, 2.0), pu, p, 2);
    EXPECT_NEAR(std::abs(two.t1 - 2.0 * one.t1), 0.0, 1e-8 * std::abs(one.t1));
    EXPECT_NEAR(std::abs(two.x1 - 2.0 * one.x1), 0.0, 1e-8 * std::abs(one.x1));
    // second order carries Z^2 pieces
    EXPECT_GT(std::abs(two.t2 / one.t2 - 2.0), 1e-3);
}

TEST(Corrections, FirstOrderReducesResidualQuadratically) {
    // |grad(zeta0 + zeta1)| drops from O(Z) at the zeroth saddle to O(Z^2)
    const HalfCyclePulse pu = pulse_from_gamma(AtomicSystem(1.0, 1.0), 0.02, 0.1);
    const double p = pu.drift_momentum() - 0.05;
    std::vector<double> reduction;
    for (double z : {0.1, 0.05}) {
        const AtomicSystem a(1.0, z);
        const SaddleSolution s = solve_saddle(a, pu, p, 1);
        reduction.push_back(gradient_norm(a, pu, {s.x0, s.t0}, p, 1) / gradient_norm(a, pu, s.at_order(1), p, 1));
    }
    EXPECT_GT(reduction[1], 100.0);
    EXPECT_NEAR(reduction[1] / reduction[0], 2.0, 0.2);
}

TEST(Corrections, SecondOrderMatchesDirectSolveToThirdOrder) {
    // Classical part only: the quantum part of zeta2 is linear in Z, so Z-scaling
    // cannot separate its orders.
    const HalfCyclePulse pu = pulse_from_gamma(AtomicSystem(1.0, 1.0), 0.02, 0.1);
    const double p = pu.drift_momentum() - 0.05;
    std::vector<double> e1, e2;
    for (double z : {0.1, 0.05}) {
        const AtomicSystem a(1.0, z);
        const SaddleSolution z0 = solve_zeroth(a, pu, p);
        const ZetaJet j = zeta_jet(a, pu, z0.x0, z0.t0, p, 2);
        const SaddlePoint w1 = correction_first(j);
        const SaddlePoint w2 = correction_second(j, w1, false);
        const SaddlePoint pert{z0.x0 + w1.x + w2.x, z0.t0 + w1.t + w2.t};
        const SaddlePoint d = direct_classical(a, pu, p, pert);
        e1.push_back(std::abs(z0.x0 + w1.x - d.x));
        e2.push_back(std::abs(pert.x - d.x));
        if (z == 0.05) EXPECT_LT(e2.back() / std::abs(d.x), 1e-5);
    }
    EXPECT_NEAR(std::log2(e1[0] / e1[1]), 2.0, 0.3);
    EXPECT_NEAR(std::log2(e2[0] / e2[1]), 3.0, 0.3);
}

TEST(Corrections, TruncatedSolveFromPerturbativePoint) {
    const AtomicSystem a(1.0, 1.0);
    const HalfCyclePulse pu = pulse_from_gamma(a, 0.02, 0.1);
    const double p = pu.drift_momentum() - 0.05;
    const SaddleSolution s = solve_saddle(a, pu, p, 1);
    const SaddlePoint d = solve_truncated(a, pu, p, 1, s.at_order(1));
    EXPECT_LT(gradient_norm(a, pu, d, p, 1), 1e-10);
    // the perturbative point is closer to the truncated saddle than the zeroth one
    EXPECT_LT(std::abs(s.at_order(1).x - d.x), std::abs(s.x0 - d.x));
    EXPECT_LT(std::abs(s.at_order(1).t - d.t), std::abs(s.t0 - d.t));
}

TEST(Corrections, ExponentStationaryAtSecondOrder) {
    // zeta0 + zeta1 moves by -w1.H0.w1/2 = O(Z^2) between (x0, t0) and (x0 + x1, t0 + t1)
    const HalfCyclePulse pu = pulse_from_gamma(AtomicSystem(1.0, 1.0), 0.02, 0.1);
    const double p = pu.drift_momentum() - 0.05;
    std::vector<double> d;
    for (double z : {0.04, 0.02}) {
        const AtomicSystem a(1.0, z);
        const SaddleSolution s = solve_saddle(a, pu, p, 1);
        const SaddlePoint w = s.at_order(1);
        const ZetaJet at0 = zeta_jet(a, pu, s.x0, s.t0, p, 1);
        const ZetaJet at1 = zeta_jet(a, pu, w.x, w.t, p, 1);
        d.push_back(std::abs(at1.z0.v + at1.z1.v - at0.z0.v - at0.z1.v));
    }
    EXPECT_NEAR(std::log2(d[0] / d[1]), 2.0, 0.15);
}
