#pragma once

// Eikonal hierarchy along laser-driven trajectories and the phase-space
// exponent zeta(x, t) with its partial derivatives.
//
// Coulomb integrals run from the start time t to infinity. The part of the
// path before the final contour time t_f is integrated numerically backward
// from t_f; the free motion after t_f is integrated in closed form. The
// logarithmically divergent real phase -(Z/p) log(p T) of S1 is dropped.

#include <array>
#include <cmath>
#include <complex>

#include "ccsfa/contour.hpp"
#include "ccsfa/errors.hpp"
#include "ccsfa/model.hpp"

namespace ccsfa {

/// x(t') = x + p (t' - t) + int_t^t' A.
inline cplx trajectory(const HalfCyclePulse& pulse, cplx x, cplx t, double p, cplx t_prime) {
    return x + p * (t_prime - t) + pulse.vector_potential_integral(t_prime) -
           pulse.vector_potential_integral(t);
}

/// Volkov action [p + A(t)] x + 1/2 int_t^{t_f} [p + A]^2.
inline cplx s0(const HalfCyclePulse& pulse, cplx x, cplx t, double p, double t_final) {
    return (p + pulse.vector_potential(t)) * x +
           0.5 * (pulse.kinetic_integral(cplx{t_final}, p) - pulse.kinetic_integral(t, p));
}

/// Coulomb integrals over the remaining trajectory starting at (x, t),
/// with V = -Z/x and n-fold inner integrals written out:
///   s1       = int V
///   g        = int dV/dx            (= d s1/dx)
///   h        = int d2V/dx2          (= d g/dx)
///   s2qc     = int dt' g(t')^2 / 2
///   dx_s2qc  = int dt' g(t') h(t')
///   q        = int dt' h(t') / 2
///   dx_q     = int dt' l(t')
///   l        = int d3V/dx3 / 2
struct CoulombIntegrals {
    cplx s1, g, h, s2qc, dx_s2qc, q, dx_q, l;
};

struct SweepOptions {
    /// Final contour time; the pulse end when <= 0.
    double t_final = 0.0;
    OdeTolerance tolerance{};
    /// Trajectories closer than exclusion/kappa to the core are rejected.
    double exclusion = 1e-3;
};

namespace detail {

using Sweep = std::array<cplx, 8>;

inline double resolved_final(const HalfCyclePulse& pulse, const SweepOptions& o) {
    return o.t_final > 0.0 ? o.t_final : pulse.end_time();
}

inline CoulombIntegrals to_integrals(const Sweep& y) {
    return {y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7]};
}

}  // namespace detail

inline CoulombIntegrals coulomb_integrals(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx x,
                                          cplx t, double p, const Contour& contour,
                                          const SweepOptions& opt = {}) {
    const double z = atom.charge();
    if (z == 0.0) return {};
    if (!(p > 0.0)) throw domain_error("coulomb_integrals: asymptotic momentum must be positive");
    contour.check_against(pulse);
    if (contour.start() != t) throw domain_error("coulomb_integrals: contour does not start at t");

    const double tf = contour.final_time();
    const cplx xf = trajectory(pulse, x, t, p, cplx{tf});
    const double rmin = opt.exclusion / atom.kappa();
    if (std::abs(xf) < rmin || xf.real() <= 0.0)
        throw proximity_error("coulomb_integrals: trajectory ends at the core");

    // Free motion x = xf + p s after t_f.
    detail::Sweep y{z / p * std::log(xf),
                    z / (p * xf),
                    -z / (p * xf * xf),
                    z * z / (2.0 * p * p * p * xf),
                    -z * z / (2.0 * p * p * p * xf * xf),
                    -z / (2.0 * p * p * xf),
                    z / (2.0 * p * p * xf * xf),
                    z / (p * xf * xf * xf)};

    auto rhs = [&](cplx tp, const detail::Sweep& s, detail::Sweep& d) {
        const cplx xx = trajectory(pulse, x, t, p, tp);
        if (std::abs(xx) < rmin) throw proximity_error("coulomb_integrals: trajectory approaches the core");
        const cplx inv = 1.0 / xx;
        const cplx inv2 = inv * inv;
        d[0] = z * inv;
        d[1] = -z * inv2;
        d[2] = 2.0 * z * inv2 * inv;
        d[3] = -0.5 * s[1] * s[1];
        d[4] = -s[1] * s[2];
        d[5] = -0.5 * s[2];
        d[6] = -s[7];
        d[7] = -3.0 * z * inv2 * inv2;
    };
    integrate_backward(rhs, y, contour.split_at(pulse.end_time()), opt.tolerance);
    return detail::to_integrals(y);
}

inline CoulombIntegrals coulomb_integrals(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx x,
                                          cplx t, double p, const SweepOptions& opt = {}) {
    return coulomb_integrals(atom, pulse, x, t, p,
                             Contour::vertical_then_real(t, detail::resolved_final(pulse, opt)), opt);
}

struct ActionValues {
    cplx s0, s1, s2_qc, s2_qu;
    cplx x, t;
    double p = 0.0, t_final = 0.0;
};

inline ActionValues actions(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx x, cplx t, double p,
                            const Contour& contour, const SweepOptions& opt = {}) {
    const CoulombIntegrals c = coulomb_integrals(atom, pulse, x, t, p, contour, opt);
    ActionValues a;
    a.s0 = s0(pulse, x, t, p, contour.final_time());
    a.s1 = c.s1;
    a.s2_qc = c.s2qc;
    a.s2_qu = cplx{0.0, -1.0} * c.q;
    a.x = x;
    a.t = t;
    a.p = p;
    a.t_final = contour.final_time();
    return a;
}

inline cplx s1(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx x, cplx t, double p,
               const Contour& contour, const SweepOptions& opt = {}) {
    return coulomb_integrals(atom, pulse, x, t, p, contour, opt).s1;
}

inline cplx s2_quasiclassical(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx x, cplx t, double p,
                              const Contour& contour, const SweepOptions& opt = {}) {
    return coulomb_integrals(atom, pulse, x, t, p, contour, opt).s2qc;
}

/// -i int dt' int dt'' V''/2.
inline cplx s2_quantum(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx x, cplx t, double p,
                       const Contour& contour, const SweepOptions& opt = {}) {
    return cplx{0.0, -1.0} * coulomb_integrals(atom, pulse, x, t, p, contour, opt).q;
}

/// Value with first and second partials in (x, t).
struct Jet2 {
    cplx v, x, t, xx, xt, tt;
};

/// Value with first partials in (x, t).
struct Jet1 {
    cplx v, x, t;
};

struct ZetaJet {
    Jet2 z0;
    cplx z0_xxx, z0_xxt, z0_xtt, z0_ttt;
    Jet2 z1;
    Jet1 z2qc;  ///< -i S2 quasiclassical part
    Jet1 z2qu;  ///< quantum part after conjugation
    CoulombIntegrals coulomb{};
    int order = 0;

    Jet1 z2() const { return {z2qc.v + z2qu.v, z2qc.x + z2qu.x, z2qc.t + z2qu.t}; }
};

/// Closed-form zeroth-order exponent -i S0 + log(x F) - kappa x + i Ip t.
inline cplx zeta0(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx x, cplx t, double p,
                  double t_final) {
    return cplx{0.0, -1.0} * s0(pulse, x, t, p, t_final) + std::log(x * pulse.field(t)) +
           bound_action(atom, x, t).s_a0;
}

/// Builds the jet. order 0 skips the Coulomb sweep, order 1 fills zeta1,
/// order 2 fills zeta2 as well.
inline ZetaJet zeta_jet(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx x, cplx t, double p,
                        int order, const SweepOptions& opt = {}) {
    if (x == cplx{}) throw domain_error("zeta_jet: x = 0");
    if (!pulse.in_window(t)) throw domain_error("zeta_jet: time outside the pulse window");
    const cplx f = pulse.field(t);
    if (f == cplx{}) throw domain_error("zeta_jet: F(t) = 0");
    const cplx i{0.0, 1.0};
    const double k = atom.kappa();
    const double tf = detail::resolved_final(pulse, opt);
    const cplx v = p + pulse.vector_potential(t);
    const cplx f1 = pulse.field_derivative(t, 1);
    const cplx f2 = pulse.field_derivative(t, 2);

    ZetaJet j;
    j.order = order;
    j.z0.v = zeta0(atom, pulse, x, t, p, tf);
    j.z0.x = -i * v + 1.0 / x - k;
    j.z0.t = -i * (f * x - 0.5 * v * v) + pulse.log_field_derivative(t, 0) + i * atom.ionization_potential();
    j.z0.xx = -1.0 / (x * x);
    j.z0.xt = -i * f;
    j.z0.tt = -i * (f1 * x - v * f) + pulse.log_field_derivative(t, 1);
    j.z0_xxx = 2.0 / (x * x * x);
    j.z0_xxt = 0.0;
    j.z0_xtt = -i * f1;
    j.z0_ttt = -i * (f2 * x - f * f - v * f1) + pulse.log_field_derivative(t, 2);

    if (order < 1 || atom.short_range()) return j;

    const double z = atom.charge();
    const CoulombIntegrals c = coulomb_integrals(atom, pulse, x, t, p, opt);
    j.coulomb = c;
    const cplx vx = z / (x * x);  // dV/dx at the start point
    const double zk = atom.charge_ratio();
    j.z1.v = -i * c.s1 + bound_action(atom, x, t).s_a1;
    j.z1.x = -i * c.g + zk / x;
    j.z1.t = -i * (z / x - v * c.g);
    j.z1.xx = -i * c.h - zk / (x * x);
    j.z1.xt = -i * (-vx - v * c.h);
    j.z1.tt = -i * (-f * c.g + v * vx + v * v * c.h);

    if (order < 2) return j;

    j.z2qc.v = -i * c.s2qc;
    j.z2qc.x = -i * c.dx_s2qc;
    j.z2qc.t = -i * (-0.5 * c.g * c.g - v * c.dx_s2qc);
    j.z2qu.v = c.q;
    j.z2qu.x = c.dx_q;
    j.z2qu.t = -0.5 * c.h - v * c.dx_q;
    return j;
}

}  // namespace ccsfa
