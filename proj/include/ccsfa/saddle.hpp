#pragma once

// Complex saddle points (x_s, t_s) of zeta: Newton solution at zeroth order
// and the perturbative corrections driven by zeta1 and zeta2.

#include <array>
#include <cmath>
#include <complex>
#include <optional>

#include "ccsfa/actions.hpp"
#include "ccsfa/errors.hpp"
#include "ccsfa/model.hpp"

namespace ccsfa {

struct SaddlePoint {
    cplx x, t;
};

struct SaddleSolution {
    double p = 0.0;
    cplx t0, x0;
    cplx t1, x1;
    cplx t2, x2;
    /// |grad zeta0| at (x0, t0), scaled by (kappa, kappa E_s).
    double residual0 = 0.0;
    /// |grad (zeta0 + zeta1)| at the first-order point, same scaling.
    double residual1 = 0.0;
    double residual2 = 0.0;
    int iterations = 0;

    SaddlePoint at_order(int n) const {
        SaddlePoint s{x0, t0};
        if (n >= 1) s = {s.x + x1, s.t + t1};
        if (n >= 2) s = {s.x + x2, s.t + t2};
        return s;
    }
};

struct NewtonOptions {
    int max_iterations = 50;
    int max_halvings = 8;
    /// Relative to the natural scales kappa and kappa E_s.
    double tolerance = 1e-10;
};

/// Short-range seed t = arcsin(i gamma)/omega - i/sqrt(kappa E_s), x = sqrt(kappa/E_s).
inline SaddlePoint zeroth_seed(const AtomicSystem& atom, const HalfCyclePulse& pulse) {
    const DerivedParams d = derive(atom, pulse);
    const double k = atom.kappa();
    const double tau = std::asinh(d.gamma) / pulse.omega() - 1.0 / std::sqrt(k * d.es);
    return {cplx{std::sqrt(k / d.es), 0.0}, cplx{0.0, tau}};
}

/// Seed away from p0: the time solves p + A(t) = i kappa, shifted by the
/// same -i/sqrt(kappa E_s) as at p0.
inline SaddlePoint zeroth_seed(const AtomicSystem& atom, const HalfCyclePulse& pulse, double p) {
    const DerivedParams d = derive(atom, pulse);
    const double k = atom.kappa();
    const double w = pulse.omega();
    const cplx ta = std::asin(1.0 + (cplx{0.0, k} - p) * w / pulse.amplitude()) / w;
    const cplx t = ta - cplx{0.0, 1.0 / std::sqrt(k * d.es)};
    if (!(t.imag() > 0.0) || !pulse.in_window(t)) return zeroth_seed(atom, pulse);
    return {cplx{std::sqrt(k / d.es), 0.0}, t};
}

namespace detail {

inline double scaled_norm(cplx gx, cplx gt, double sx, double st) {
    return std::hypot(std::abs(gx) / sx, std::abs(gt) / st);
}

/// Solves H d = -g for the 2x2 symmetric complex system.
inline std::array<cplx, 2> newton_step(cplx hxx, cplx hxt, cplx htt, cplx gx, cplx gt, double scale) {
    const cplx det = hxx * htt - hxt * hxt;
    if (!(std::abs(det) > 1e-300) || std::abs(det) < 1e-14 * scale)
        throw caustic_error("degenerate Hessian of the exponent");
    return {-(htt * gx - hxt * gt) / det, -(-hxt * gx + hxx * gt) / det};
}

inline double hessian_scale(cplx hxx, cplx hxt, cplx htt) {
    return std::max({std::abs(hxx * htt), std::abs(hxt * hxt), 1e-300});
}

inline void check_branch(const SaddlePoint& s, const char* who) {
    if (!(s.t.imag() > 0.0) || !(s.x.real() > 0.0))
        throw branch_error(std::string(who) + ": converged onto the mirror solution");
}

}  // namespace detail

inline SaddleSolution solve_zeroth(const AtomicSystem& atom, const HalfCyclePulse& pulse, double p,
                                   std::optional<SaddlePoint> seed = std::nullopt,
                                   const NewtonOptions& opt = {}) {
    const DerivedParams d = derive(atom, pulse);
    const double sx = atom.kappa();
    const double st = atom.kappa() * d.es;
    const double tf = pulse.end_time();
    SaddlePoint s = seed.value_or(zeroth_seed(atom, pulse, p));
    detail::check_branch(s, "solve_zeroth seed");

    auto grad = [&](const SaddlePoint& q) {
        const ZetaJet j = zeta_jet(atom, pulse, q.x, q.t, p, 0, {tf});
        return j.z0;
    };

    SaddleSolution out;
    out.p = p;
    Jet2 g = grad(s);
    double r = detail::scaled_norm(g.x, g.t, sx, st);
    int it = 0;
    for (; it < opt.max_iterations && r >= opt.tolerance; ++it) {
        const auto step = detail::newton_step(g.xx, g.xt, g.tt, g.x, g.t, detail::hessian_scale(g.xx, g.xt, g.tt));
        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opt.max_halvings; ++h, lambda *= 0.5) {
            const SaddlePoint trial{s.x + lambda * step[0], s.t + lambda * step[1]};
            if (!(trial.x.real() > 0.0) || !pulse.in_window(trial.t)) continue;
            Jet2 gt;
            try {
                gt = grad(trial);
            } catch (const domain_error&) {
                continue;
            }
            const double rt = detail::scaled_norm(gt.x, gt.t, sx, st);
            if (rt < r || h == opt.max_halvings) {
                s = trial;
                g = gt;
                r = rt;
                accepted = true;
                break;
            }
        }
        if (!accepted) throw convergence_error("solve_zeroth: damping exhausted");
    }
    if (!(r < opt.tolerance)) throw convergence_error("solve_zeroth: no convergence from the seed");
    detail::check_branch(s, "solve_zeroth");
    out.x0 = s.x;
    out.t0 = s.t;
    out.residual0 = r;
    out.iterations = it;
    return out;
}

/// First-order shift of the saddle from zeta1 gradients at (x0, t0).
inline SaddlePoint correction_first(const ZetaJet& j) {
    const Jet2& a = j.z0;
    const cplx den = a.xt * a.xt - a.tt * a.xx;
    if (std::abs(den) < 1e-14 * detail::hessian_scale(a.xx, a.xt, a.tt))
        throw caustic_error("correction_first: degenerate Hessian");
    const cplx t1 = (-a.xt * j.z1.x + j.z1.t * a.xx) / den;
    const cplx x1 = (a.tt * j.z1.x - j.z1.t * a.xt) / den;
    return {x1, t1};
}

/// Second-order shift: w2 = -H0^{-1} (T0[w1, w1]/2 + H1 w1 + grad zeta2).
/// With include_quantum = false only the quasiclassical part of zeta2 drives it.
inline SaddlePoint correction_second(const ZetaJet& j, const SaddlePoint& w1, bool include_quantum = true) {
    const Jet2& a = j.z0;
    const Jet2& b = j.z1;
    const Jet1 z2 = include_quantum ? j.z2() : j.z2qc;
    const cplx x1 = w1.x, t1 = w1.t;
    const cplx rx = 0.5 * (j.z0_xxx * x1 * x1 + 2.0 * j.z0_xxt * x1 * t1 + j.z0_xtt * t1 * t1) +
                    (b.xx * x1 + b.xt * t1) + z2.x;
    const cplx rt = 0.5 * (j.z0_xxt * x1 * x1 + 2.0 * j.z0_xtt * x1 * t1 + j.z0_ttt * t1 * t1) +
                    (b.xt * x1 + b.tt * t1) + z2.t;
    const auto step = detail::newton_step(a.xx, a.xt, a.tt, rx, rt, detail::hessian_scale(a.xx, a.xt, a.tt));
    return {step[0], step[1]};
}

/// Zeroth-order Newton solve followed by the perturbative corrections up to
/// `order`; the residuals of the truncated stationarity conditions are filled in.
inline SaddleSolution solve_saddle(const AtomicSystem& atom, const HalfCyclePulse& pulse, double p, int order,
                                   const SweepOptions& sweep = {}, std::optional<SaddlePoint> seed = std::nullopt) {
    SaddleSolution s = solve_zeroth(atom, pulse, p, seed);
    if (order < 1 || atom.short_range()) return s;
    const ZetaJet j = zeta_jet(atom, pulse, s.x0, s.t0, p, order, sweep);
    const SaddlePoint w1 = correction_first(j);
    s.x1 = w1.x;
    s.t1 = w1.t;
    if (order >= 2) {
        const SaddlePoint w2 = correction_second(j, w1);
        s.x2 = w2.x;
        s.t2 = w2.t;
    }
    return s;
}

/// Gradient of the truncated exponent zeta0 + zeta1 (+ zeta2) at an
/// arbitrary point.
inline std::array<cplx, 2> truncated_gradient(const AtomicSystem& atom, const HalfCyclePulse& pulse,
                                              const SaddlePoint& s, double p, int order,
                                              const SweepOptions& sweep = {}) {
    const ZetaJet j = zeta_jet(atom, pulse, s.x, s.t, p, order, sweep);
    std::array<cplx, 2> g{j.z0.x, j.z0.t};
    if (order >= 1) {
        g[0] += j.z1.x;
        g[1] += j.z1.t;
    }
    if (order >= 2) {
        const Jet1 z2 = j.z2();
        g[0] += z2.x;
        g[1] += z2.t;
    }
    return g;
}

/// Direct Newton solve of the stationarity of the truncated exponent,
/// starting from the perturbative point. The Hessian of zeta2 is omitted,
/// which leaves the fixed point unchanged and slows convergence only at
/// order alpha^2.
inline SaddlePoint solve_truncated(const AtomicSystem& atom, const HalfCyclePulse& pulse, double p, int order,
                                   SaddlePoint start, const SweepOptions& sweep = {},
                                   const NewtonOptions& opt = {}) {
    const DerivedParams d = derive(atom, pulse);
    const double sx = atom.kappa();
    const double st = atom.kappa() * d.es;
    SaddlePoint s = start;
    for (int it = 0; it < opt.max_iterations; ++it) {
        const ZetaJet j = zeta_jet(atom, pulse, s.x, s.t, p, order, sweep);
        cplx gx = j.z0.x, gt = j.z0.t;
        cplx hxx = j.z0.xx, hxt = j.z0.xt, htt = j.z0.tt;
        if (order >= 1) {
            gx += j.z1.x;
            gt += j.z1.t;
            hxx += j.z1.xx;
            hxt += j.z1.xt;
            htt += j.z1.tt;
        }
        if (order >= 2) {
            const Jet1 z2 = j.z2();
            gx += z2.x;
            gt += z2.t;
        }
        if (detail::scaled_norm(gx, gt, sx, st) < opt.tolerance) {
            detail::check_branch(s, "solve_truncated");
            return s;
        }
        const auto step = detail::newton_step(hxx, hxt, htt, gx, gt, detail::hessian_scale(hxx, hxt, htt));
        s = {s.x + step[0], s.t + step[1]};
    }
    throw convergence_error("solve_truncated: no convergence");
}

}  // namespace ccsfa
