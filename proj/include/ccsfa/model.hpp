#pragma once

// Physical inputs: the 1D Coulomb atom, the half-cycle pulse, the derived
// dimensionless parameters and the bound-state pieces entering the exponent.
// Atomic units throughout.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "ccsfa/errors.hpp"

namespace ccsfa {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_e = std::numbers::e;

class AtomicSystem {
public:
    AtomicSystem(double kappa, double charge) : kappa_(kappa), charge_(charge) {
        if (!(kappa > 0.0) || !std::isfinite(kappa))
            throw domain_error("AtomicSystem: kappa must be positive");
        if (!(charge >= 0.0) || !std::isfinite(charge))
            throw domain_error("AtomicSystem: charge must be non-negative");
    }

    double kappa() const { return kappa_; }
    double charge() const { return charge_; }
    double ionization_potential() const { return 0.5 * kappa_ * kappa_; }
    double atomic_field() const { return kappa_ * kappa_ * kappa_; }
    double charge_ratio() const { return charge_ / kappa_; }
    bool short_range() const { return charge_ == 0.0; }

    /// Asymptotic normalization c_a = kappa / sqrt(2 Z Gamma(2Z/kappa)).
    /// Written as sqrt(kappa / Gamma(1 + 2Z/kappa)) so that Z -> 0 is regular.
    double asymptotic_coefficient() const {
        return std::sqrt(kappa_ / std::tgamma(1.0 + 2.0 * charge_ratio()));
    }

    /// Short-range normalization, the Z -> 0 limit of c_a.
    double short_range_coefficient() const { return std::sqrt(kappa_); }

private:
    double kappa_;
    double charge_;
};

/// F(t) = E0 cos(wt) for |Re wt| < pi/2, zero outside. The vector potential is
/// gauged to vanish after the pulse, so the canonical momentum at detection is
/// the measured one.
class HalfCyclePulse {
public:
    HalfCyclePulse(double e0, double omega) : e0_(e0), omega_(omega) {
        if (!(e0 > 0.0) || !std::isfinite(e0)) throw domain_error("HalfCyclePulse: E0 must be positive");
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw domain_error("HalfCyclePulse: omega must be positive");
    }

    double amplitude() const { return e0_; }
    double omega() const { return omega_; }
    double end_time() const { return 0.5 * pi / omega_; }
    /// b = E0 / omega, also the drift momentum p0 = -A(0).
    double drift_momentum() const { return e0_ / omega_; }

    bool in_window(cplx t) const { return std::abs(omega_ * t.real()) < 0.5 * pi; }

    cplx field(cplx t) const { return in_window(t) ? e0_ * std::cos(omega_ * t) : cplx{}; }

    /// n-th time derivative of the field, n = 0..3.
    cplx field_derivative(cplx t, int n) const {
        if (!in_window(t)) return {};
        const cplx c = std::cos(omega_ * t);
        const cplx s = std::sin(omega_ * t);
        const double w = omega_;
        switch (n) {
            case 0: return e0_ * c;
            case 1: return -e0_ * w * s;
            case 2: return -e0_ * w * w * c;
            case 3: return e0_ * w * w * w * s;
            default: throw domain_error("field_derivative: order must be 0..3");
        }
    }

    /// d^n/dt^n of F'(t)/F(t) = -w tan(wt), n = 0..2.
    cplx log_field_derivative(cplx t, int n) const {
        const double w = omega_;
        const cplx c = std::cos(w * t);
        const cplx s = std::sin(w * t);
        switch (n) {
            case 0: return -w * s / c;
            case 1: return -w * w / (c * c);
            case 2: return -2.0 * w * w * w * s / (c * c * c);
            default: throw domain_error("log_field_derivative: order must be 0..2");
        }
    }

    cplx vector_potential(cplx t) const {
        const double te = end_time();
        if (t.real() >= te) return {};
        if (t.real() <= -te) return -2.0 * drift_momentum();
        return drift_momentum() * (std::sin(omega_ * t) - 1.0);
    }

    /// Antiderivative of A, continuous on the real axis.
    cplx vector_potential_integral(cplx t) const {
        const double te = end_time();
        const double b = drift_momentum();
        if (t.real() >= te) return -b * te;
        if (t.real() <= -te) return b * te - 2.0 * b * (t + te);
        return -b / omega_ * std::cos(omega_ * t) - b * t;
    }

    /// Antiderivative of [p + A(t)]^2, continuous on the real axis.
    cplx kinetic_integral(cplx t, double p) const {
        const double te = end_time();
        if (t.real() >= te) return window_kinetic_integral(cplx{te}, p) + p * p * (t - te);
        if (t.real() <= -te) {
            const double c = p - 2.0 * drift_momentum();
            return window_kinetic_integral(cplx{-te}, p) + c * c * (t + te);
        }
        return window_kinetic_integral(t, p);
    }

private:
    cplx window_kinetic_integral(cplx t, double p) const {
        const double b = drift_momentum();
        const double c = p - b;
        const double w = omega_;
        return c * c * t - 2.0 * b * c * std::cos(w * t) / w +
               b * b * (0.5 * t - std::sin(2.0 * w * t) / (4.0 * w));
    }

    double e0_;
    double omega_;
};

struct ValidityFlags {
    bool below_barrier_suppression = true;  ///< E_s/E_a < kappa/(16 Z)
    bool low_frequency = true;              ///< omega << Ip, Up (factor 10 margin)
    bool nonrelativistic = true;            ///< kappa/c, E0/(c omega) << 1
    std::vector<std::string> warnings;
    bool ok() const { return below_barrier_suppression && low_frequency && nonrelativistic; }
};

struct DerivedParams {
    double ip = 0;     ///< kappa^2/2
    double ea = 0;     ///< kappa^3
    double gamma = 0;  ///< Keldysh parameter omega kappa / E0
    double es = 0;     ///< E0 sqrt(1 + gamma^2)
    double f = 0;      ///< E0 / kappa^3
    double up = 0;     ///< E0^2 / (4 omega^2)
    double p0 = 0;     ///< E0 / omega
    ValidityFlags validity;
};

inline DerivedParams derive(const AtomicSystem& atom, const HalfCyclePulse& pulse) {
    constexpr double speed_of_light = 137.035999084;
    DerivedParams d;
    const double k = atom.kappa();
    const double e0 = pulse.amplitude();
    const double w = pulse.omega();
    d.ip = atom.ionization_potential();
    d.ea = atom.atomic_field();
    d.gamma = w * k / e0;
    d.es = e0 * std::sqrt(1.0 + d.gamma * d.gamma);
    d.f = e0 / d.ea;
    d.up = e0 * e0 / (4.0 * w * w);
    d.p0 = e0 / w;

    auto& v = d.validity;
    if (atom.charge() > 0.0 && !(d.es / d.ea < k / (16.0 * atom.charge()))) {
        v.below_barrier_suppression = false;
        v.warnings.emplace_back("E_s/E_a >= kappa/(16 Z): over-the-barrier regime");
    }
    if (!(10.0 * w < d.ip && 10.0 * w < d.up)) {
        v.low_frequency = false;
        v.warnings.emplace_back("omega is not small against Ip and Up: saddle-point integration unreliable");
    }
    if (!(k / speed_of_light < 0.1 && e0 / (speed_of_light * w) < 0.1)) {
        v.nonrelativistic = false;
        v.warnings.emplace_back("relativistic parameters");
    }
    return d;
}

/// Keldysh-parameter constructor: omega = gamma E0 / kappa.
inline HalfCyclePulse pulse_from_gamma(const AtomicSystem& atom, double e0, double gamma) {
    return HalfCyclePulse(e0, gamma * e0 / atom.kappa());
}

struct BoundAction {
    cplx s_a0;  ///< -kappa x + i Ip t
    cplx s_a1;  ///< (Z/kappa) log(2 kappa x)
    cplx total() const { return s_a0 + s_a1; }
};

/// Bound-state exponent on the ionization side (Re x > 0, principal log).
inline BoundAction bound_action(const AtomicSystem& atom, cplx x, cplx t) {
    if (x == cplx{}) throw domain_error("bound_action: x = 0");
    const double k = atom.kappa();
    BoundAction a;
    a.s_a0 = -k * x + cplx{0.0, atom.ionization_potential()} * t;
    a.s_a1 = atom.short_range() ? cplx{} : atom.charge_ratio() * std::log(2.0 * k * x);
    return a;
}

enum class ExitModel { simpleman, nonadiabatic, coulomb_corrected };

/// Real tunnel-exit coordinate. coulomb_corrected is the expansion to first
/// order in E0/E_a; see coulomb_corrected_exit_exact for the full root.
inline double tunnel_exit(const AtomicSystem& atom, const HalfCyclePulse& pulse, ExitModel model) {
    const double ip = atom.ionization_potential();
    const double e0 = pulse.amplitude();
    const double k = atom.kappa();
    switch (model) {
        case ExitModel::simpleman: return ip / e0;
        case ExitModel::nonadiabatic: {
            const double g = pulse.omega() * k / e0;
            return 2.0 / (g * g) * (std::sqrt(1.0 + g * g) - 1.0) * ip / e0;
        }
        case ExitModel::coulomb_corrected: {
            const double factor = 1.0 - 4.0 * atom.charge() * e0 / (k * atom.atomic_field());
            if (!(factor > 0.0))
                throw barrier_suppression_error("tunnel_exit: Coulomb-corrected exit is not positive");
            return ip / e0 * factor;
        }
    }
    throw domain_error("tunnel_exit: unknown model");
}

/// Outer root of -Ip = -E0 x - Z/x.
inline double coulomb_corrected_exit_exact(const AtomicSystem& atom, const HalfCyclePulse& pulse) {
    const double ip = atom.ionization_potential();
    const double e0 = pulse.amplitude();
    const double disc = ip * ip - 4.0 * e0 * atom.charge();
    if (disc < 0.0) throw barrier_suppression_error("coulomb_corrected_exit_exact: no real turning point");
    return (ip + std::sqrt(disc)) / (2.0 * e0);
}

}  // namespace ccsfa
