#pragma once

// Complex classical trajectories in the laser plus Coulomb field. The most
// probable trajectory is found by shooting: its start time t_s is complex,
// and at a real exit time t_e the coordinate turns real with zero velocity.

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ccsfa/amplitude.hpp"
#include "ccsfa/contour.hpp"
#include "ccsfa/errors.hpp"
#include "ccsfa/model.hpp"

namespace ccsfa {

struct TrajectoryState {
    cplx t;
    cplx x;
    cplx v;
    /// int (v^2/2 + x F - V) dt from the start time.
    cplx action;
};

enum class InitialCoordinate {
    /// x_s = sqrt(kappa/F(t_s)), valid for F << kappa^3.
    simplified,
    /// Root of the full cubic condition, continued from the simplified value.
    saddle_root
};

struct HqaOptions {
    InitialCoordinate start = InitialCoordinate::simplified;
    OdeTolerance tolerance{1e-14, 1e-12};
    double exclusion = 1e-3;
    int max_iterations = 60;
    double residual_tolerance = 1e-8;
    /// Final time; the pulse end when <= 0.
    double t_final = 0.0;
};

struct HqaSolution {
    cplx t_s;
    cplx x_s, v_s;
    double t_e = 0.0;
    double x_e = 0.0;
    /// Asymptotic momentum sqrt(v^2 - 2Z/x) after the pulse.
    double p_final = 0.0;
    /// Velocity at the pulse end.
    cplx v_final;
    cplx x_final;
    cplx action;  ///< accumulated S~_c up to the final time
    /// -i p x_f + i S~_c + S_a + log(x_s F(t_s)).
    cplx exponent;
    double im_action = 0.0;  ///< Im(S~_c - p x_f)
    std::array<double, 3> residual{};
    int iterations = 0;
    std::vector<TrajectoryState> samples;
};

/// (x_s, v_s) at a complex start time.
inline std::pair<cplx, cplx> initial_conditions(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx t_s,
                                                InitialCoordinate mode = InitialCoordinate::simplified) {
    if (!pulse.in_window(t_s)) throw domain_error("initial_conditions: start time outside the pulse window");
    const cplx f = pulse.field(t_s);
    if (f == cplx{}) throw domain_error("initial_conditions: F(t_s) = 0");
    const double k = atom.kappa();
    const double z = atom.charge();
    const cplx i{0.0, 1.0};
    cplx x = std::sqrt(k / f);
    if (mode == InitialCoordinate::saddle_root) {
        const cplx lf = pulse.field_derivative(t_s, 1) / f;
        const double k2 = k * k;
        for (int it = 0; it < 60; ++it) {
            const cplx g = 2.0 * i * k2 * x * x * lf + 2.0 * k2 * x * x * x * f + k2 - 2.0 * k2 * k * x + z * z +
                           2.0 * k * z;
            const cplx dg = 4.0 * i * k2 * x * lf + 6.0 * k2 * x * x * f - 2.0 * k2 * k;
            const cplx step = g / dg;
            x -= step;
            if (std::abs(step) < 1e-15 * std::abs(x)) break;
        }
        if (!(x.real() > 0.0)) throw branch_error("initial_conditions: no root on the ionization side");
    }
    const cplx v = i * k - i * (z + k) / (k * x);
    return {x, v};
}

/// Advances the state along the straight segment to time b.
inline TrajectoryState advance(const AtomicSystem& atom, const HalfCyclePulse& pulse, const TrajectoryState& s,
                               cplx b, const HqaOptions& opt = {}) {
    using State = std::array<cplx, 3>;
    const double z = atom.charge();
    const double rmin = opt.exclusion / atom.kappa();
    State y{s.x, s.v, s.action};
    auto rhs = [&](cplx t, const State& q, State& d) {
        if (std::abs(q[0]) < rmin) throw proximity_error("propagate: trajectory enters the core region");
        const cplx f = pulse.field(t);
        d[0] = q[1];
        d[1] = f - z / (q[0] * q[0]);
        d[2] = 0.5 * q[1] * q[1] + q[0] * f + z / q[0];
    };
    integrate_segment(rhs, y, s.t, b, opt.tolerance);
    return {b, y[0], y[1], y[2]};
}

/// Integrates x'' = F - Z/x^2 and the action along the contour.
inline TrajectoryState propagate(const AtomicSystem& atom, const HalfCyclePulse& pulse, const TrajectoryState& s,
                                 const Contour& contour, const HqaOptions& opt = {}) {
    TrajectoryState cur = s;
    cur.t = contour.start();
    // the field derivative jumps at the pulse end
    const Contour path = contour.split_at(pulse.end_time());
    for (std::size_t i = 1; i < path.nodes().size(); ++i) cur = advance(atom, pulse, cur, path.nodes()[i], opt);
    return cur;
}

namespace detail {

inline Contour hqa_contour(cplx t_s, double t_end) {
    std::vector<cplx> nodes{t_s};
    if (t_s.imag() != 0.0) nodes.emplace_back(t_s.real(), 0.0);
    if (t_end != t_s.real()) nodes.emplace_back(t_end, 0.0);
    if (nodes.size() == 1) nodes.push_back(t_s);
    return Contour::custom(nodes);
}

inline TrajectoryState launch(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx t_s,
                              const HqaOptions& opt) {
    const auto [x, v] = initial_conditions(atom, pulse, t_s, opt.start);
    return {t_s, x, v, cplx{}};
}

inline std::array<double, 3> shooting_residual(const AtomicSystem& atom, const HalfCyclePulse& pulse,
                                               const std::array<double, 3>& u, const HqaOptions& opt) {
    const cplx ts{u[0], u[1]};
    const TrajectoryState e = propagate(atom, pulse, launch(atom, pulse, ts, opt), hqa_contour(ts, u[2]), opt);
    return {e.x.imag(), e.v.real(), e.v.imag()};
}

inline double norm3(const std::array<double, 3>& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

inline std::array<double, 3> newton_shoot(const AtomicSystem& atom, const HalfCyclePulse& pulse,
                                          std::array<double, 3> u, const HqaOptions& opt, int& iterations,
                                          std::array<double, 3>& res) {
    res = shooting_residual(atom, pulse, u, opt);
    double rn = norm3(res);
    // Iterate past the acceptance tolerance while Newton still makes progress.
    const double tight = 1e-4 * opt.residual_tolerance;
    for (iterations = 0; iterations < opt.max_iterations && rn >= tight; ++iterations) {
        Eigen::Matrix3d jac;
        for (int c = 0; c < 3; ++c) {
            const double h = 1e-6 * std::max(1.0, std::abs(u[c]));
            auto up = u, um = u;
            up[c] += h;
            um[c] -= h;
            const auto rp = shooting_residual(atom, pulse, up, opt);
            const auto rm = shooting_residual(atom, pulse, um, opt);
            for (int r = 0; r < 3; ++r) jac(r, c) = (rp[r] - rm[r]) / (2.0 * h);
        }
        Eigen::FullPivLU<Eigen::Matrix3d> lu(jac);
        if (!lu.isInvertible()) throw convergence_error("shoot: singular Jacobian");
        const Eigen::Vector3d d = lu.solve(Eigen::Vector3d(-res[0], -res[1], -res[2]));
        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h <= 8; ++h, lambda *= 0.5) {
            const std::array<double, 3> trial{u[0] + lambda * d[0], u[1] + lambda * d[1], u[2] + lambda * d[2]};
            if (!(trial[1] > 0.0)) continue;
            try {
                const auto rt = shooting_residual(atom, pulse, trial, opt);
                const double nt = norm3(rt);
                if (nt < rn || (h == 8 && rn >= opt.residual_tolerance)) {
                    u = trial;
                    res = rt;
                    rn = nt;
                    accepted = true;
                    break;
                }
            } catch (const error&) {
            }
        }
        if (!accepted) {
            if (rn < opt.residual_tolerance) break;
            throw convergence_error("shoot: damping exhausted");
        }
    }
    if (!(rn < opt.residual_tolerance)) throw convergence_error("shoot: no convergence");
    return u;
}

}  // namespace detail

/// Most probable trajectory. Unknowns are Re t_s, Im t_s and the real exit
/// time t_e; Re t_s = 0 is an output, not an assumption.
inline HqaSolution shoot(const AtomicSystem& atom, const HalfCyclePulse& pulse, const HqaOptions& opt = {}) {
    const DerivedParams d = derive(atom, pulse);
    const double k = atom.kappa();
    const double tau = std::asinh(d.gamma) / pulse.omega() - 1.0 / std::sqrt(k * d.es);
    std::array<double, 3> u{1e-3, tau, 2e-3};
    std::array<double, 3> res{};
    int iterations = 0;
    try {
        u = detail::newton_shoot(atom, pulse, u, opt, iterations, res);
    } catch (const error&) {
        // Continuation in the charge from the short-range solution.
        u = {1e-3, tau, 2e-3};
        constexpr int steps = 8;
        for (int s = 0; s <= steps; ++s) {
            const AtomicSystem partial(k, atom.charge() * s / steps);
            u = detail::newton_shoot(partial, pulse, u, opt, iterations, res);
        }
    }

    HqaSolution out;
    out.t_s = {u[0], u[1]};
    out.t_e = u[2];
    out.residual = res;
    out.iterations = iterations;
    const TrajectoryState start = detail::launch(atom, pulse, out.t_s, opt);
    out.x_s = start.x;
    out.v_s = start.v;
    const TrajectoryState exit = propagate(atom, pulse, start, detail::hqa_contour(out.t_s, out.t_e), opt);
    out.x_e = exit.x.real();

    const double tf = opt.t_final > 0.0 ? opt.t_final : pulse.end_time();
    const TrajectoryState fin = propagate(atom, pulse, start, detail::hqa_contour(out.t_s, tf), opt);
    out.x_final = fin.x;
    out.v_final = fin.v;
    out.action = fin.action;
    const cplx pinf = atom.short_range() ? fin.v : std::sqrt(fin.v * fin.v - 2.0 * atom.charge() / fin.x);
    out.p_final = pinf.real();

    const cplx i{0.0, 1.0};
    out.exponent = -i * out.p_final * fin.x + i * fin.action + bound_action(atom, out.x_s, out.t_s).total() +
                   std::log(out.x_s * pulse.field(out.t_s));
    out.im_action = (fin.action - out.p_final * fin.x).imag();

    constexpr int per_segment = 32;
    const std::vector<cplx> nodes = detail::hqa_contour(out.t_s, tf).split_at(pulse.end_time()).nodes();
    TrajectoryState cur = start;
    out.samples.push_back(cur);
    for (std::size_t seg = 0; seg + 1 < nodes.size(); ++seg) {
        for (int j = 1; j <= per_segment; ++j) {
            const cplx b = nodes[seg] + (nodes[seg + 1] - nodes[seg]) * (double(j) / per_segment);
            cur = advance(atom, pulse, cur, b, opt);
            out.samples.push_back(cur);
        }
    }
    return out;
}

namespace detail {

inline cplx asymptotic_momentum(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx x, cplx t, cplx v,
                                double tf, const HqaOptions& opt) {
    const TrajectoryState e = propagate(atom, pulse, {t, x, v, cplx{}}, hqa_contour(t, tf), opt);
    return atom.short_range() ? e.v : std::sqrt(e.v * e.v - 2.0 * atom.charge() / e.x);
}

}  // namespace detail

/// Probability of the most probable trajectory: c_a^2 2 pi / |det| exp(2 Re E),
/// with the Hessian of E obtained from the sensitivity of the final momentum
/// to the launch data.
inline double hqa_probability(const AtomicSystem& atom, const HalfCyclePulse& pulse, const HqaSolution& sol,
                              const HqaOptions& opt = {}) {
    const cplx i{0.0, 1.0};
    const double k = atom.kappa();
    const double z = atom.charge();
    const double tf = opt.t_final > 0.0 ? opt.t_final : pulse.end_time();
    const cplx xs = sol.x_s, vs = sol.v_s, ts = sol.t_s;
    auto P = [&](cplx x, cplx t, cplx v) { return detail::asymptotic_momentum(atom, pulse, x, t, v, tf, opt); };
    const double h = 1e-5 * std::max(1.0, std::abs(xs));
    const double hv = 1e-5 * k;
    const double ht = 1e-4 * std::max(1.0, std::abs(ts));
    const cplx pv = (P(xs, ts, vs + hv) - P(xs, ts, vs - hv)) / (2.0 * hv);
    const cplx px = (P(xs + h, ts, vs) - P(xs - h, ts, vs)) / (2.0 * h);
    const cplx pt = (P(xs, ts + ht, vs) - P(xs, ts - ht, vs)) / (2.0 * ht);
    const cplx vx = -px / pv;
    const cplx vt = -pt / pv;
    const cplx f = pulse.field(ts);
    const cplx f1 = pulse.field_derivative(ts, 1);
    const cplx exx = -i * vx - z / (k * xs * xs) - 1.0 / (xs * xs);
    const cplx ext = -i * vt;
    const cplx ett = i * (vs * vt - xs * f1) + pulse.log_field_derivative(ts, 1);
    const cplx det = exx * ett - ext * ext;
    if (det == cplx{}) throw caustic_error("hqa_probability: degenerate Hessian");
    const double ca = atom.asymptotic_coefficient();
    return ca * ca * 2.0 * pi / std::abs(det) * std::exp(2.0 * sol.exponent.real());
}

}  // namespace ccsfa
