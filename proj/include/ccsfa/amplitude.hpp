#pragma once

// Ionization amplitude M(p) at the different truncation orders, the peak of
// the momentum distribution, and closed-form reference quantities (short-range
// rate, Coulomb factors, ARM amplitude, analytic shift estimates).

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ccsfa/actions.hpp"
#include "ccsfa/errors.hpp"
#include "ccsfa/model.hpp"
#include "ccsfa/saddle.hpp"

namespace ccsfa {

enum class Variant { S0, S1, S2qc, S2qu, ARM, PPT };

inline const char* to_string(Variant v) {
    switch (v) {
        case Variant::S0: return "S0";
        case Variant::S1: return "S1";
        case Variant::S2qc: return "S2qc";
        case Variant::S2qu: return "S2qu";
        case Variant::ARM: return "ARM";
        case Variant::PPT: return "PPT";
    }
    return "?";
}

inline Variant parse_variant(const std::string& s) {
    for (Variant v : {Variant::S0, Variant::S1, Variant::S2qc, Variant::S2qu, Variant::ARM, Variant::PPT})
        if (s == to_string(v)) return v;
    throw domain_error("unknown variant '" + s + "'");
}

inline bool is_quasiclassical(Variant v) {
    return v == Variant::S0 || v == Variant::S1 || v == Variant::S2qc || v == Variant::S2qu;
}

inline int variant_order(Variant v) {
    switch (v) {
        case Variant::S0: return 0;
        case Variant::S1: return 1;
        default: return 2;
    }
}

struct AmplitudeResult {
    Variant variant = Variant::S0;
    double p = 0.0;
    /// log M; the amplitude itself may underflow for weak fields.
    cplx log_m;
    cplx m;
    double probability = 0.0;
    /// Saddle point at the order used by the variant.
    SaddlePoint saddle{};
    double log_probability() const { return 2.0 * log_m.real(); }
};

struct AmplitudeOptions {
    SweepOptions sweep{};
    std::optional<SaddlePoint> seed{};
};

namespace detail {

inline AmplitudeResult finish(Variant v, double p, cplx log_m, SaddlePoint s) {
    AmplitudeResult r;
    r.variant = v;
    r.p = p;
    r.log_m = log_m;
    r.m = std::exp(log_m);
    r.probability = std::exp(2.0 * log_m.real());
    r.saddle = s;
    return r;
}

inline cplx det2(cplx xx, cplx xt, cplx tt) { return xx * tt - xt * xt; }

/// alpha^2 term produced by expanding zeta0 + alpha zeta1 around the zeroth saddle.
inline cplx cross_term(const ZetaJet& j) {
    const Jet2& a = j.z0;
    const Jet2& b = j.z1;
    return (a.xx * b.t * b.t - 2.0 * b.x * a.xt * b.t + a.tt * b.x * b.x) /
           (2.0 * (a.xt * a.xt - a.tt * a.xx));
}

}  // namespace detail

/// Short-range closed forms. Probabilities, not amplitudes.
struct PptReference {
    double width = 0.0;             ///< Delta of the Gaussian momentum distribution
    double peak_probability = 0.0;  ///< pi kappa^2/(e E_s) exp(-...)
    double p0 = 0.0;
    double coulomb_factor_leading = 1.0;
    double coulomb_factor_full = 1.0;

    double sfa0_probability(double p) const {
        const double d = (p - p0) / width;
        return peak_probability * std::exp(-d * d);
    }
};

inline double sfa0_exponent(const AtomicSystem& atom, const HalfCyclePulse& pulse) {
    const DerivedParams d = derive(atom, pulse);
    const double g = d.gamma;
    const double ash = std::asinh(g);
    const double k3 = atom.atomic_field();
    return -k3 * (-std::sqrt(g * g + 1.0) * g + 2.0 * g * g * ash + ash) / (2.0 * g * g * g * pulse.amplitude());
}

inline double sfa0_width(const AtomicSystem& atom, const HalfCyclePulse& pulse) {
    const DerivedParams d = derive(atom, pulse);
    const double g = d.gamma;
    return std::sqrt(d.es) / std::sqrt(atom.kappa() * (std::sqrt(1.0 + 1.0 / (g * g)) * std::asinh(g) - 1.0));
}

/// |c_a/c_a0 exp zeta1|^2 at the zeroth saddle, leading order in E0/E_a.
inline double coulomb_factor_leading(const AtomicSystem& atom, double f) {
    const double n = atom.charge_ratio();
    return std::pow(16.0, n) * std::pow(f, -2.0 * n) / std::tgamma(2.0 * n + 1.0);
}

/// Same factor keeping the full gamma dependence.
inline double coulomb_factor_full(const AtomicSystem& atom, double gamma, double f) {
    const double n = atom.charge_ratio();
    if (n == 0.0) return 1.0;
    const double q = std::pow(gamma * gamma + 1.0, 0.25);
    const double y = (std::sqrt(gamma * gamma + 1.0) - 1.0) / gamma /
                     std::tanh(0.5 * std::asinh(gamma) - gamma * std::sqrt(f) / (2.0 * q));
    const double acoth = std::atanh(1.0 / y);
    return std::pow(4.0, n) * std::pow(1.0 / (q * std::sqrt(f)), 2.0 * n) / std::tgamma(2.0 * n + 1.0) *
           std::exp(4.0 * n * acoth);
}

/// Next-to-leading form 1/2 (4 kappa^3/E0 - 2 kappa x0)^{2Z/kappa}.
inline double coulomb_factor_next_order(const AtomicSystem& atom, double e0, double x0) {
    const double k = atom.kappa();
    const double base = 4.0 * atom.atomic_field() / e0 - 2.0 * k * x0;
    if (!(base > 0.0)) throw domain_error("coulomb_factor_next_order: non-positive base");
    return 0.5 * std::pow(base, 2.0 * atom.charge_ratio());
}

inline PptReference ppt_reference(const AtomicSystem& atom, const HalfCyclePulse& pulse) {
    const DerivedParams d = derive(atom, pulse);
    PptReference r;
    r.width = sfa0_width(atom, pulse);
    r.p0 = d.p0;
    r.peak_probability = pi * atom.kappa() * atom.kappa() / (euler_e * d.es) * std::exp(sfa0_exponent(atom, pulse));
    if (!atom.short_range()) {
        r.coulomb_factor_leading = coulomb_factor_leading(atom, d.f);
        r.coulomb_factor_full = coulomb_factor_full(atom, d.gamma, d.f);
    }
    return r;
}

/// Frustrated-ionization reduction (2 gamma/e)^{-2Z/kappa}.
inline double capture_factor(const AtomicSystem& atom, double gamma) {
    if (!(gamma > 0.0)) throw domain_error("capture_factor: gamma must be positive");
    return std::pow(2.0 * gamma / euler_e, -2.0 * atom.charge_ratio());
}

/// ARM amplitude with the standard time saddle p + A(t_a) = i kappa and the
/// matching point b = Re x0; the Coulomb phase starts where the laser-only
/// trajectory launched from the origin at t_a reaches b.
inline AmplitudeResult arm_amplitude(const AtomicSystem& atom, const HalfCyclePulse& pulse, double p,
                                     const AmplitudeOptions& opt = {}) {
    const cplx i{0.0, 1.0};
    const double k = atom.kappa();
    const double w = pulse.omega();
    const SaddleSolution z = solve_zeroth(atom, pulse, p, opt.seed);
    const double b = z.x0.real();
    const cplx ta = std::asin(1.0 + (i * k - p) * w / pulse.amplitude()) / w;
    if (!(ta.imag() > 0.0) || !pulse.in_window(ta)) throw branch_error("arm_amplitude: no ionizing time saddle");
    const double tf = detail::resolved_final(pulse, opt.sweep);

    cplx expo = -i * s0(pulse, cplx{b}, ta, p, tf) + bound_action(atom, cplx{b}, ta).total();
    if (!atom.short_range()) {
        cplx tk = ta - i * b / k;
        for (int it = 0; it < 60; ++it) {
            const cplx r = trajectory(pulse, cplx{}, ta, p, tk) - b;
            const cplx step = r / (p + pulse.vector_potential(tk));
            tk -= step;
            if (std::abs(step) < 1e-14 * std::abs(tk)) break;
        }
        expo += -i * coulomb_integrals(atom, pulse, cplx{b}, tk, p, opt.sweep).s1;
    }
    const cplx v = i * k;
    const cplx neg_stt = v * pulse.field(ta) - pulse.field_derivative(ta, 1) * b;
    const cplx log_m = std::log(-i * k * atom.asymptotic_coefficient()) - 0.5 * std::log(neg_stt) + expo;
    return detail::finish(Variant::ARM, p, log_m, {cplx{b}, ta});
}

/// PPT-type reference: the short-range rate without the pi/e coordinate-SPI
/// factor, times the full Coulomb correction factor. Real amplitude.
inline AmplitudeResult ppt_amplitude(const AtomicSystem& atom, const HalfCyclePulse& pulse, double p) {
    const PptReference r = ppt_reference(atom, pulse);
    const double w = r.sfa0_probability(p) * euler_e / pi * r.coulomb_factor_full;
    return detail::finish(Variant::PPT, p, cplx{0.5 * std::log(w)}, {});
}

/// M = -i c sqrt(2 pi) det^{-1/2} exp(zeta0 + zeta1 + zeta2 + cross) with the
/// pieces selected by the variant.
inline AmplitudeResult amplitude(const AtomicSystem& atom, const HalfCyclePulse& pulse, double p, Variant variant,
                                 const AmplitudeOptions& opt = {}) {
    if (variant == Variant::ARM) return arm_amplitude(atom, pulse, p, opt);
    if (variant == Variant::PPT) return ppt_amplitude(atom, pulse, p);
    const cplx i{0.0, 1.0};
    const SaddleSolution z = solve_zeroth(atom, pulse, p, opt.seed);
    const int order = atom.short_range() ? 0 : variant_order(variant);
    const ZetaJet j = zeta_jet(atom, pulse, z.x0, z.t0, p, order, opt.sweep);

    const double c = order == 0 ? atom.short_range_coefficient() : atom.asymptotic_coefficient();
    cplx det = detail::det2(j.z0.xx, j.z0.xt, j.z0.tt);
    cplx expo = j.z0.v;
    SaddlePoint s{z.x0, z.t0};
    if (order >= 1) {
        expo += j.z1.v;
        const SaddlePoint w1 = correction_first(j);
        s = {s.x + w1.x, s.t + w1.t};
        if (order >= 2) {
            expo += j.z2qc.v + detail::cross_term(j);
            const bool quantum = variant == Variant::S2qu;
            if (quantum) {
                expo += j.z2qu.v;
                det = detail::det2(j.z0.xx + j.z1.xx, j.z0.xt + j.z1.xt, j.z0.tt + j.z1.tt);
            }
            const SaddlePoint w2 = correction_second(j, w1, quantum);
            s = {s.x + w2.x, s.t + w2.t};
        }
    }
    if (det == cplx{}) throw caustic_error("amplitude: vanishing determinant");
    const cplx log_m = std::log(-i * c * std::sqrt(2.0 * pi)) - 0.5 * std::log(det) + expo;
    return detail::finish(variant, p, log_m, s);
}

struct PmdPoint {
    double p = 0.0;
    double probability = 0.0;
    bool ok = true;
    std::string error;
};

/// w(p) = |M(p)|^2 on a grid. Solver failures are flagged per point.
inline std::vector<PmdPoint> pmd(const AtomicSystem& atom, const HalfCyclePulse& pulse,
                                 const std::vector<double>& grid, Variant variant,
                                 const AmplitudeOptions& opt = {}) {
    std::vector<PmdPoint> out;
    out.reserve(grid.size());
    for (double p : grid) {
        PmdPoint pt;
        pt.p = p;
        try {
            pt.probability = amplitude(atom, pulse, p, variant, opt).probability;
        } catch (const error& e) {
            pt.ok = false;
            pt.error = e.what();
        }
        out.push_back(pt);
    }
    return out;
}

enum class PeakMethod { perturbative, direct };

struct PeakResult {
    Variant variant = Variant::S0;
    double p_m = 0.0;
    double p_m0 = 0.0, p_m1 = 0.0, p_m2 = 0.0;
    /// p0 - p_m: the attractive core decelerates the electron, so the
    /// shift is reported as a positive magnitude.
    double coulomb_shift = 0.0;
    double probability = 0.0;
    /// w(p_m) / [(pi/e) w_ARM(p_m^ARM)]; the S1 amplitude exceeds the ARM
    /// one by sqrt(pi/e), so S1 gives a ratio near one.
    double ratio_to_arm = 0.0;
    SaddlePoint saddle{};
    std::optional<double> p_direct;
};

struct PeakOptions {
    AmplitudeOptions amplitude{};
    /// Finite-difference step in units of the width Delta.
    double step = 0.01;
    double direct_tolerance = 1e-9;
    bool compute_arm_ratio = true;
};

namespace detail {

struct Stencil {
    double d1, d2, d3;
};

inline Stencil stencil(const std::array<double, 5>& f, double h) {
    return {(f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h),
            (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h),
            (-f[0] + 2.0 * f[1] - 2.0 * f[3] + f[4]) / (2.0 * h * h * h)};
}

inline double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

inline double log_abs_amplitude(const AtomicSystem& atom, const HalfCyclePulse& pulse, double p, Variant v,
                                const AmplitudeOptions& opt = {}) {
    return amplitude(atom, pulse, p, v, opt).log_m.real();
}

/// Most probable momentum. perturbative expands the extremum condition in the
/// Coulomb order around p0; direct additionally maximizes |M| by golden section.
inline PeakResult peak(const AtomicSystem& atom, const HalfCyclePulse& pulse, Variant variant,
                       PeakMethod method = PeakMethod::perturbative, const PeakOptions& opt = {}) {
    const DerivedParams d = derive(atom, pulse);
    const double p0 = d.p0;
    const double width = sfa0_width(atom, pulse);
    PeakResult r;
    r.variant = variant;
    r.p_m0 = p0;
    r.p_m = p0;

    const bool expanded = is_quasiclassical(variant) || variant == Variant::ARM;
    if (expanded && variant != Variant::S0 && !atom.short_range()) {
        // ARM carries its Coulomb correction at first order, like S1.
        const Variant first = variant == Variant::ARM ? Variant::ARM : Variant::S1;
        const bool second = variant == Variant::S2qc || variant == Variant::S2qu;
        const double h = opt.step * width;
        std::array<double, 5> l0{}, l1{}, l2{};
        for (int s = 0; s < 5; ++s) {
            const double p = p0 + (s - 2) * h;
            const double a0 = log_abs_amplitude(atom, pulse, p, Variant::S0, opt.amplitude);
            const double a1 = log_abs_amplitude(atom, pulse, p, first, opt.amplitude);
            l0[s] = a0;
            l1[s] = a1 - a0;
            l2[s] = second ? log_abs_amplitude(atom, pulse, p, variant, opt.amplitude) - a1 : 0.0;
        }
        const auto s0 = detail::stencil(l0, h);
        const auto s1 = detail::stencil(l1, h);
        const auto s2 = detail::stencil(l2, h);
        if (!(s0.d2 < 0.0)) throw convergence_error("peak: zeroth-order distribution has no maximum");
        r.p_m1 = -s1.d1 / s0.d2;
        if (second)
            r.p_m2 = -(s2.d1 + s1.d2 * r.p_m1 + 0.5 * s0.d3 * r.p_m1 * r.p_m1) / s0.d2;
        r.p_m = p0 + r.p_m1 + r.p_m2;
    } else if (variant == Variant::PPT) {
        r.p_m = p0;
    }

    if (method == PeakMethod::direct) {
        auto f = [&](double p) { return log_abs_amplitude(atom, pulse, p, variant, opt.amplitude); };
        double lo = std::max(p0 - width, 0.5 * p0), hi = p0 + width;
        for (int expand = 0; expand < 4; ++expand) {
            const double mid = r.p_m;
            const double fm = f(mid);
            if (f(lo) < fm && f(hi) < fm) break;
            lo = std::max(lo - width, 0.25 * lo);
            hi += width;
            if (expand == 3) throw convergence_error("peak: no bracket for the direct search");
        }
        r.p_direct = detail::golden_max(f, lo, hi, opt.direct_tolerance);
    }

    r.coulomb_shift = p0 - r.p_m;
    const AmplitudeResult at = amplitude(atom, pulse, r.p_m, variant, opt.amplitude);
    r.probability = at.probability;
    r.saddle = at.saddle;
    if (opt.compute_arm_ratio) {
        double pa = p0;
        if (variant == Variant::ARM) {
            pa = r.p_m;
        } else if (!atom.short_range()) {
            PeakOptions inner = opt;
            inner.compute_arm_ratio = false;
            pa = peak(atom, pulse, Variant::ARM, PeakMethod::perturbative, inner).p_m;
        }
        const double wa = amplitude(atom, pulse, pa, Variant::ARM, opt.amplitude).probability;
        r.ratio_to_arm = r.probability / (pi / euler_e * wa);
    }
    return r;
}

enum class ShiftRegime { static_field, nonadiabatic, trajectory_integral };

/// Analytic Coulomb momentum shift estimates (positive magnitudes).
/// trajectory_integral evaluates int_0^inf Z/x(t)^2 dt for an electron
/// starting at rest from the chosen exit at the field maximum.
inline double shift_estimate(const AtomicSystem& atom, const HalfCyclePulse& pulse, ShiftRegime regime,
                             ExitModel exit = ExitModel::simpleman) {
    const double z = atom.charge();
    const double k3 = atom.atomic_field();
    const double e0 = pulse.amplitude();
    switch (regime) {
        case ShiftRegime::static_field: return pi * z * e0 / k3;
        case ShiftRegime::nonadiabatic: {
            const double g = pulse.omega() * atom.kappa() / e0;
            return g * g * z * e0 / k3;
        }
        case ShiftRegime::trajectory_integral: {
            if (z == 0.0) return 0.0;
            const double xe = tunnel_exit(atom, pulse, exit);
            const double w = pulse.omega();
            const double te = pulse.end_time();
            auto x = [&](double t) { return xe + e0 / (w * w) * (1.0 - std::cos(w * t)); };
            double err = 0.0;
            const double in_pulse = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                [&](double t) { return z / (x(t) * x(t)); }, 0.0, te, 20, 1e-12, &err);
            return in_pulse + z / (pulse.drift_momentum() * x(te));
        }
    }
    throw domain_error("shift_estimate: unknown regime");
}

}  // namespace ccsfa
