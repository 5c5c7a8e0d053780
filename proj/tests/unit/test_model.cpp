#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccsfa/model.hpp"

using namespace ccsfa;

namespace {
const cplx I{0.0, 1.0};
}

TEST(AtomicSystem, RejectsBadInput) {
    EXPECT_THROW(AtomicSystem(0.0, 1.0), domain_error);
    EXPECT_THROW(AtomicSystem(-1.0, 1.0), domain_error);
    EXPECT_THROW(AtomicSystem(1.0, -0.5), domain_error);
    EXPECT_THROW(AtomicSystem(std::nan(""), 1.0), domain_error);
    EXPECT_NO_THROW(AtomicSystem(1.0, 0.0));
}

TEST(AtomicSystem, Scales) {
    const AtomicSystem a(1.3, 0.7);
    EXPECT_DOUBLE_EQ(a.ionization_potential(), 0.5 * 1.69);
    EXPECT_DOUBLE_EQ(a.atomic_field(), 1.3 * 1.3 * 1.3);
    EXPECT_DOUBLE_EQ(a.charge_ratio(), 0.7 / 1.3);
    // kappa / sqrt(2 Z Gamma(2Z/kappa))
    const double direct = 1.3 / std::sqrt(2.0 * 0.7 * std::tgamma(2.0 * 0.7 / 1.3));
    EXPECT_NEAR(a.asymptotic_coefficient(), direct, 1e-14);
    EXPECT_DOUBLE_EQ(AtomicSystem(1.3, 0.0).asymptotic_coefficient(), std::sqrt(1.3));
}

TEST(HalfCyclePulse, RejectsBadInput) {
    EXPECT_THROW(HalfCyclePulse(0.0, 0.01), domain_error);
    EXPECT_THROW(HalfCyclePulse(0.05, 0.0), domain_error);
    EXPECT_THROW(HalfCyclePulse(0.05, -1.0), domain_error);
}

TEST(HalfCyclePulse, FieldExamples) {
    const HalfCyclePulse p(0.05, 0.005);
    EXPECT_DOUBLE_EQ(p.field(0.0).real(), 0.05);
    EXPECT_EQ(p.field(cplx{pi / (2 * 0.005)}), cplx{});
    EXPECT_NEAR(p.field(cplx{0.0, 15.5}).real(), 0.05 * std::cosh(0.0775), 1e-15);
    EXPECT_NEAR(p.field(cplx{0.0, 15.5}).real(), 0.050150, 5e-7);
    EXPECT_EQ(p.field(cplx{400.0}), cplx{});
}

TEST(HalfCyclePulse, VectorPotentialExamples) {
    const HalfCyclePulse p(0.05, 0.005);
    EXPECT_DOUBLE_EQ(p.vector_potential(0.0).real(), -10.0);
    EXPECT_EQ(p.vector_potential(cplx{p.end_time()}), cplx{});
    EXPECT_EQ(p.vector_potential(cplx{2 * p.end_time()}), cplx{});
    EXPECT_DOUBLE_EQ(p.drift_momentum(), -p.vector_potential(0.0).real());
}

TEST(HalfCyclePulse, PotentialContinuousAtEdges) {
    const HalfCyclePulse p(0.03, 0.011);
    const double te = p.end_time();
    const double eps = 1e-9;
    EXPECT_NEAR(std::abs(p.vector_potential(te - eps) - p.vector_potential(te + eps)), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(p.vector_potential(-te + eps) - p.vector_potential(-te - eps)), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(p.vector_potential_integral(te - eps) - p.vector_potential_integral(te + eps)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(p.kinetic_integral(te - eps, 1.1) - p.kinetic_integral(te + eps, 1.1)), 0.0, 1e-8);
}

TEST(HalfCyclePulse, FieldIsDerivativeOfPotential) {
    const HalfCyclePulse p(0.04, 0.004);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.99 * p.end_time(), 0.99 * p.end_time());
    for (int k = 0; k < 100; ++k) {
        const double t = u(rng);
        const double h = 1e-3;
        const cplx fd = (p.vector_potential(t + h) - p.vector_potential(t - h)) / (2 * h);
        EXPECT_NEAR(std::abs(fd - p.field(t)), 0.0, 1e-10) << "t=" << t;
    }
}

TEST(HalfCyclePulse, AntiderivativesAndHigherDerivatives) {
    const HalfCyclePulse p(0.04, 0.004);
    const double q = 3.0;
    const cplx t{20.0, 35.0};
    const cplx h{1e-3, 0.0};
    auto d = [&](auto f) { return (f(t + h) - f(t - h)) / (2.0 * h); };
    EXPECT_NEAR(std::abs(d([&](cplx s) { return p.vector_potential_integral(s); }) - p.vector_potential(t)), 0.0, 1e-9);
    const cplx v = q + p.vector_potential(t);
    EXPECT_NEAR(std::abs(d([&](cplx s) { return p.kinetic_integral(s, q); }) - v * v), 0.0, 1e-7);
    for (int n = 1; n <= 3; ++n)
        EXPECT_NEAR(std::abs(d([&](cplx s) { return p.field_derivative(s, n - 1); }) - p.field_derivative(t, n)), 0.0,
                    1e-12);
    EXPECT_NEAR(std::abs(p.log_field_derivative(t, 0) - p.field_derivative(t, 1) / p.field(t)), 0.0, 1e-15);
    for (int n = 1; n <= 2; ++n) {
        const cplx fd = d([&](cplx s) { return p.log_field_derivative(s, n - 1); });
        EXPECT_NEAR(std::abs(fd - p.log_field_derivative(t, n)), 0.0, 1e-12);
    }
}

TEST(DerivedParams, DefiningAlgebra) {
    const AtomicSystem a(1.2, 1.0);
    const HalfCyclePulse p(0.03, 0.007);
    const DerivedParams d = derive(a, p);
    EXPECT_DOUBLE_EQ(d.gamma, 0.007 * 1.2 / 0.03);
    EXPECT_NEAR(d.es * d.es, 0.03 * 0.03 * (1 + d.gamma * d.gamma), 1e-17);
    EXPECT_NEAR(d.p0 * 0.007, 0.03, 1e-16);
    EXPECT_DOUBLE_EQ(d.f, 0.03 / (1.2 * 1.2 * 1.2));
    EXPECT_DOUBLE_EQ(d.up, 0.03 * 0.03 / (4 * 0.007 * 0.007));
}

TEST(DerivedParams, WarningsAreAdvisory) {
    const AtomicSystem a(1.0, 1.0);
    const DerivedParams ok = derive(a, pulse_from_gamma(a, 0.02, 0.1));
    EXPECT_TRUE(ok.validity.below_barrier_suppression);
    EXPECT_TRUE(ok.validity.warnings.empty());
    const DerivedParams strong = derive(a, pulse_from_gamma(a, 0.2, 0.1));
    EXPECT_FALSE(strong.validity.below_barrier_suppression);
    EXPECT_FALSE(strong.validity.warnings.empty());
}

TEST(BoundAction, Examples) {
    const AtomicSystem a(1.0, 1.0);
    const BoundAction b = bound_action(a, 1.0, 0.0);
    EXPECT_DOUBLE_EQ(b.s_a0.real(), -1.0);
    EXPECT_NEAR(std::abs(b.s_a1 - std::log(2.0)), 0.0, 1e-15);
    EXPECT_EQ(bound_action(AtomicSystem(1.0, 0.0), 2.0, 0.0).s_a1, cplx{});
    const BoundAction c = bound_action(a, 4.461, cplx{0.0, 15.506});
    EXPECT_NEAR(c.s_a0.real(), -4.461 - 7.753, 1e-12);
    EXPECT_NEAR(c.s_a0.imag(), 0.0, 1e-15);
    EXPECT_THROW(bound_action(a, 0.0, 0.0), domain_error);
}

TEST(TunnelExit, Examples) {
    const AtomicSystem a(1.0, 1.0);
    const HalfCyclePulse p(0.05, 0.005);
    EXPECT_NEAR(tunnel_exit(a, p, ExitModel::simpleman), 10.0, 1e-12);
    EXPECT_NEAR(tunnel_exit(a, p, ExitModel::coulomb_corrected), 8.0, 1e-12);
    const HalfCyclePulse q(0.02, 0.02);
    EXPECT_NEAR(tunnel_exit(a, q, ExitModel::nonadiabatic), 2 * (std::sqrt(2.0) - 1) * 25, 1e-10);
    EXPECT_NEAR(tunnel_exit(a, q, ExitModel::nonadiabatic), 20.71, 5e-3);
}

TEST(TunnelExit, CoulombRootApproachesSimpleman) {
    const HalfCyclePulse p(0.02, 0.002);
    const double xs = tunnel_exit(AtomicSystem(1.0, 0.0), p, ExitModel::simpleman);
    EXPECT_NEAR(coulomb_corrected_exit_exact(AtomicSystem(1.0, 0.0), p), xs, 1e-12);
    for (double z : {0.01, 0.05, 0.1}) {
        const AtomicSystem a(1.0, z);
        // first-order difference -4 Z Ip / (kappa E_a), in units of the simpleman exit
        const double expected = -4.0 * z * a.ionization_potential() / (a.kappa() * a.atomic_field());
        const double diff = coulomb_corrected_exit_exact(a, p) - xs;
        EXPECT_NEAR(diff / expected, 1.0, 0.01) << "Z=" << z;
    }
    EXPECT_THROW(coulomb_corrected_exit_exact(AtomicSystem(1.0, 1.0), HalfCyclePulse(0.1, 0.01)),
                 barrier_suppression_error);
}

TEST(PulseFromGamma, Roundtrip) {
    const AtomicSystem a(0.9, 1.0);
    const HalfCyclePulse p = pulse_from_gamma(a, 0.017, 0.37);
    EXPECT_NEAR(derive(a, p).gamma, 0.37, 1e-15);
}
