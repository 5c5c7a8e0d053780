#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ccsfa/amplitude.hpp"

using namespace ccsfa;

namespace {

const std::vector<Variant> kQuasiclassical{Variant::S0, Variant::S1, Variant::S2qc, Variant::S2qu};

// Least-squares parabola through (u, y); returns the u^2 coefficient.
double quadratic_coefficient(const std::vector<double>& u, const std::vector<double>& y) {
    double s[5] = {}, r[3] = {};
    for (std::size_t i = 0; i < u.size(); ++i) {
        double pw = 1.0;
        for (int k = 0; k < 5; ++k, pw *= u[i]) {
            s[k] += pw;
            if (k < 3) r[k] += pw * y[i];
        }
    }
    // normal equations, Cramer's rule
    auto det3 = [](double a, double b, double c, double d, double e, double f, double g, double h, double i) {
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    };
    const double d = det3(s[0], s[1], s[2], s[1], s[2], s[3], s[2], s[3], s[4]);
    return det3(s[0], s[1], r[0], s[1], s[2], r[1], s[2], s[3], r[2]) / d;
}

}  // namespace

TEST(Variant, NamesRoundTrip) {
    for (Variant v : {Variant::S0, Variant::S1, Variant::S2qc, Variant::S2qu, Variant::ARM, Variant::PPT})
        EXPECT_EQ(parse_variant(to_string(v)), v);
    EXPECT_THROW(parse_variant("S3"), domain_error);
    EXPECT_EQ(variant_order(Variant::S2qu), 2);
    EXPECT_FALSE(is_quasiclassical(Variant::ARM));
}

TEST(Amplitude, ShortRangeVariantsCoincide) {
    const AtomicSystem sr(1.0, 0.0);
    const HalfCyclePulse pu = pulse_from_gamma(sr, 0.02, 0.1);
    for (double dp : {-1.0, 0.0, 0.7}) {
        const double p = pu.drift_momentum() + dp;
        const AmplitudeResult r0 = amplitude(sr, pu, p, Variant::S0);
        for (Variant v : kQuasiclassical) {
            const AmplitudeResult r = amplitude(sr, pu, p, v);
            EXPECT_EQ(r.probability, r0.probability);
            EXPECT_EQ(r.m, r0.m);
        }
    }
}

TEST(Amplitude, ShortRangeMatchesGaussianReference) {
    const AtomicSystem sr(1.0, 0.0);
    const HalfCyclePulse pu = pulse_from_gamma(sr, 0.02, 0.1);
    const PptReference ref = ppt_reference(sr, pu);
    for (int k = -4; k <= 4; ++k) {
        const double p = ref.p0 + 0.25 * k * ref.width;
        const double w = amplitude(sr, pu, p, Variant::S0).probability;
        EXPECT_NEAR(w / ref.sfa0_probability(p), 1.0, 0.03) << "p=" << p;
    }
}

TEST(Pmd, ShortRangeWidthAndSymmetry) {
    const AtomicSystem sr(1.0, 0.0);
    const HalfCyclePulse pu(0.05, 0.005);
    const double delta = sfa0_width(sr, pu);
    EXPECT_NEAR(delta, 3.889, 2e-3);
    const double p0 = pu.drift_momentum();
    std::vector<double> grid;
    for (int k = -10; k <= 10; ++k) grid.push_back(p0 + 0.1 * k * delta);
    const auto w = pmd(sr, pu, grid, Variant::S0);
    std::vector<double> u, y;
    for (const auto& pt : w) {
        ASSERT_TRUE(pt.ok) << pt.error;
        u.push_back(pt.p - p0);
        y.push_back(std::log(pt.probability));
    }
    const double fitted = 1.0 / std::sqrt(-quadratic_coefficient(u, y));
    EXPECT_NEAR(fitted / delta, 1.0, 0.02);
    for (std::size_t k = 0; k < w.size() / 2; ++k)
        EXPECT_NEAR(w[k].probability / w[w.size() - 1 - k].probability, 1.0, 1e-10);
}

TEST(Pmd, GridBracketsPeak) {
    const AtomicSystem a(1.0, 1.0);
    const HalfCyclePulse pu = pulse_from_gamma(a, 0.02, 0.1);
    const PeakResult pk = peak(a, pu, Variant::S1);
    const double h = 0.02;
    std::vector<double> grid;
    for (int k = -5; k <= 5; ++k) grid.push_back(pu.drift_momentum() + k * h);
    const auto w = pmd(a, pu, grid, Variant::S1);
    std::size_t best = 0;
    for (std::size_t k = 1; k < w.size(); ++k)
        if (w[k].probability > w[best].probability) best = k;
    EXPECT_LE(std::abs(grid[best] - pk.p_m), h);
}

TEST(Reference, Constants) {
    EXPECT_NEAR(pi / euler_e, 1.1557, 5e-5);
    EXPECT_NEAR(std::pow(1.0 + std::erf(1.0), 2) * pi / (4.0 * euler_e), 0.9811, 5e-5);
    const AtomicSystem a(1.0, 1.0);
    EXPECT_NEAR(coulomb_factor_leading(a, 0.05), 3200.0, 1e-9);
    EXPECT_NEAR(ppt_reference(a, HalfCyclePulse(0.05, 0.005)).coulomb_factor_leading, 3200.0, 1e-9);
    EXPECT_EQ(ppt_reference(AtomicSystem(1.0, 0.0), HalfCyclePulse(0.05, 0.005)).coulomb_factor_full, 1.0);
    // the full gamma dependence reduces to the leading form as f -> 0
    EXPECT_NEAR(coulomb_factor_full(a, 1e-3, 1e-6) / coulomb_factor_leading(a, 1e-6), 1.0, 1e-2);
}

TEST(Reference, CaptureFactor) {
    EXPECT_NEAR(capture_factor(AtomicSystem(1.0, 1.0), euler_e / 2.0), 1.0, 1e-14);
    EXPECT_NEAR(capture_factor(AtomicSystem(0.8, 2.0), euler_e / 2.0), 1.0, 1e-14);
    EXPECT_EQ(capture_factor(AtomicSystem(1.0, 0.0), 0.3), 1.0);
    EXPECT_NEAR(capture_factor(AtomicSystem(1.0, 1.0), 2.0), std::pow(4.0 / euler_e, -2.0), 1e-14);
    EXPECT_NEAR(capture_factor(AtomicSystem(1.0, 1.0), 2.0), 0.46182, 5e-5);
    EXPECT_THROW(capture_factor(AtomicSystem(1.0, 1.0), 0.0), domain_error);
}

TEST(ShiftEstimate, Examples) {
    const AtomicSystem a(1.0, 1.0);
    EXPECT_NEAR(shift_estimate(a, HalfCyclePulse(0.05, 0.005), ShiftRegime::static_field), 0.15708, 1e-5);
    EXPECT_NEAR(shift_estimate(a, HalfCyclePulse(0.02, 0.02), ShiftRegime::nonadiabatic), 0.02, 1e-14);
    const HalfCyclePulse slow = pulse_from_gamma(a, 0.05, 0.1);
    EXPECT_NEAR(shift_estimate(a, slow, ShiftRegime::trajectory_integral) /
                    shift_estimate(a, slow, ShiftRegime::static_field),
                1.0, 0.15);
    EXPECT_EQ(shift_estimate(AtomicSystem(1.0, 0.0), slow, ShiftRegime::trajectory_integral), 0.0);
}

TEST(Peak, ShortRangeAtDriftMomentum) {
    const AtomicSystem sr(1.0, 0.0);
    const HalfCyclePulse pu = pulse_from_gamma(sr, 0.02, 0.1);
    for (Variant v : kQuasiclassical) {
        const PeakResult r = peak(sr, pu, v, PeakMethod::direct);
        EXPECT_DOUBLE_EQ(r.p_m, pu.drift_momentum());
        EXPECT_NEAR(*r.p_direct, pu.drift_momentum(), 1e-5);
        EXPECT_EQ(r.coulomb_shift, 0.0);
    }
}

TEST(Peak, StaticShiftOfFirstOrder) {
    const AtomicSystem a(1.0, 1.0);
    for (double f : {0.01, 0.02}) {
        const HalfCyclePulse pu = pulse_from_gamma(a, f, 0.1);
        const PeakResult r = peak(a, pu, Variant::S1);
        EXPECT_GT(r.coulomb_shift, 0.0);
        EXPECT_NEAR(r.coulomb_shift / shift_estimate(a, pu, ShiftRegime::static_field), 1.0, 0.1) << f;
    }
}

TEST(Peak, PerturbativeAgreesWithDirect) {
    const AtomicSystem a(1.0, 1.0);
    const HalfCyclePulse pu = pulse_from_gamma(a, 0.02, 0.1);
    const double delta = sfa0_width(a, pu);
    for (Variant v : {Variant::S1, Variant::S2qc, Variant::S2qu, Variant::ARM}) {
        const PeakResult r = peak(a, pu, v, PeakMethod::direct);
        ASSERT_TRUE(r.p_direct.has_value());
        EXPECT_LT(std::abs(*r.p_direct - r.p_m), 0.01 * delta) << to_string(v);
    }
}

TEST(Peak, SecondOrderIncreasesShiftAndQuantumPartsCompensate) {
    const AtomicSystem a(1.0, 1.0);
    for (double f : {0.01, 0.02, 0.03}) {
        const HalfCyclePulse pu = pulse_from_gamma(a, f, 0.1);
        const double s1 = peak(a, pu, Variant::S1).coulomb_shift;
        const double qc = peak(a, pu, Variant::S2qc).coulomb_shift;
        const double qu = peak(a, pu, Variant::S2qu).coulomb_shift;
        EXPECT_GT(qc, s1) << f;
        EXPECT_LT(std::abs(qu - qc), 0.3 * std::abs(qc - s1)) << f;
    }
}

TEST(Peak, FinalTimeDoesNotMoveThePeak) {
    const AtomicSystem a(1.0, 1.0);
    const HalfCyclePulse pu = pulse_from_gamma(a, 0.02, 0.1);
    PeakOptions longer;
    longer.amplitude.sweep.t_final = 2.0 * pu.end_time();
    for (Variant v : {Variant::S1, Variant::S2qu}) {
        const PeakResult r1 = peak(a, pu, v);
        const PeakResult r2 = peak(a, pu, v, PeakMethod::perturbative, longer);
        EXPECT_NEAR(r1.p_m, r2.p_m, 1e-8);
        EXPECT_NEAR(r1.probability / r2.probability, 1.0, 1e-8);
    }
}

TEST(Arm, FirstOrderRatioIsConstant) {
    const AtomicSystem a(1.0, 1.0);
    for (double f : {0.01, 0.03, 0.05}) {
        const PeakResult r = peak(a, pulse_from_gamma(a, f, 0.1), Variant::S1);
        EXPECT_NEAR(r.ratio_to_arm, 1.0, 0.03) << f;
    }
}

TEST(Arm, ShortRangeRatio) {
    const AtomicSystem sr(1.0, 0.0);
    const HalfCyclePulse pu = pulse_from_gamma(sr, 0.02, 0.1);
    const double p = pu.drift_momentum();
    const double ratio = amplitude(sr, pu, p, Variant::S0).probability / amplitude(sr, pu, p, Variant::ARM).probability;
    EXPECT_NEAR(ratio / (pi / euler_e), 1.0, 0.03);
}

TEST(Ppt, CarriesCoulombFactor) {
    const AtomicSystem a(1.0, 1.0);
    const HalfCyclePulse pu = pulse_from_gamma(a, 0.02, 0.1);
    const PptReference ref = ppt_reference(a, pu);
    const double w = amplitude(a, pu, ref.p0, Variant::PPT).probability;
    EXPECT_NEAR(w / (ref.peak_probability * euler_e / pi * ref.coulomb_factor_full), 1.0, 1e-12);
}
