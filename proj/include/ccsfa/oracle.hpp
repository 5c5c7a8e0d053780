#pragma once

// Brute-force evaluators that cross-check the analytic machinery: coordinate
// quadrature instead of coordinate SPI, nested trapezoid sums for the double
// Coulomb integrals, finite-difference jets, and the size of the cubic term
// neglected in the time SPI.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ccsfa/actions.hpp"
#include "ccsfa/amplitude.hpp"
#include "ccsfa/errors.hpp"
#include "ccsfa/model.hpp"
#include "ccsfa/saddle.hpp"

namespace ccsfa {

struct QuadratureReport {
    cplx value;
    double error = 0.0;
    long nodes = 0;
};

/// Stationary time of zeta0 at fixed real coordinate x, Newton from a seed.
inline cplx time_saddle(const AtomicSystem& atom, const HalfCyclePulse& pulse, double x, double p, cplx seed) {
    cplx t = seed;
    for (int it = 0; it < 60; ++it) {
        const ZetaJet j = zeta_jet(atom, pulse, cplx{x}, t, p, 0);
        const cplx step = j.z0.t / j.z0.tt;
        t -= step;
        if (std::abs(step) < 1e-13 * std::abs(t)) return t;
    }
    throw convergence_error("time_saddle: no convergence");
}

struct ExactXReport {
    /// -i c/sqrt(2 pi) int_0^inf dx exp(zeta(x, t_s(x))) sqrt(2 pi / -zeta_tt)
    QuadratureReport exact;
    cplx spi;                ///< the amplitude with both integrals by SPI
    /// (1 + erf(u))/2 with u = x0 sqrt(-D/2): share of the coordinate Gaussian on x > 0.
    double half_line_fraction = 0.0;
    double gaussian_argument = 0.0;
    double probability_ratio() const { return std::norm(spi) / std::norm(exact.value); }
    double half_line_ratio() const {
        return probability_ratio() * half_line_fraction * half_line_fraction;
    }
};

/// Coordinate integral done numerically over (0, inf), time integral by SPI
/// at the x-dependent stationary time of zeta0, tracked by continuation from
/// the saddle. Beyond the tunnel exit that time reaches the real axis and the
/// integrand is exponentially small; the sum stops there. variant S1 adds
/// zeta1 at the stationary time, as the S1 amplitude does at the saddle.
/// Composite Simpson on two grids; the difference is the error estimate.
inline ExactXReport exact_x_amplitude(const AtomicSystem& atom, const HalfCyclePulse& pulse, double p,
                                      Variant variant, int intervals = 4000) {
    if (variant != Variant::S0 && variant != Variant::S1)
        throw domain_error("exact_x_amplitude: only S0 and S1 are supported");
    const cplx i{0.0, 1.0};
    const SaddleSolution z = solve_zeroth(atom, pulse, p);
    const int order = variant == Variant::S0 || atom.short_range() ? 0 : 1;
    const double c = order == 0 ? atom.short_range_coefficient() : atom.asymptotic_coefficient();
    const double x0 = z.x0.real();

    ExactXReport r;
    r.spi = amplitude(atom, pulse, p, variant).m;
    const ZetaJet j0 = zeta_jet(atom, pulse, z.x0, z.t0, p, 0);
    const cplx dred = (j0.z0.xx * j0.z0.tt - j0.z0.xt * j0.z0.xt) / j0.z0.tt;
    r.gaussian_argument = (z.x0 * std::sqrt(-dred / 2.0)).real();
    r.half_line_fraction = 0.5 * (1.0 + std::erf(r.gaussian_argument));

    const double x_max = 12.0 * x0;
    const int n = 2 * (intervals / 2);
    const double h = x_max / n;
    std::vector<cplx> f(n + 1, cplx{});
    long count = 0;
    auto value = [&](double x, cplx t) {
        ++count;
        const ZetaJet j = zeta_jet(atom, pulse, cplx{x}, t, p, order);
        cplx e = j.z0.v;
        if (order == 1) e += j.z1.v;
        return std::exp(e) / std::sqrt(-j.z0.tt);
    };
    const int k0 = static_cast<int>(std::lround(x0 / h));
    // March outward from the saddle in both directions.
    for (int dir : {-1, 1}) {
        cplx t = z.t0;
        for (int k = k0; k >= 1 && k <= n; k += dir) {
            try {
                t = time_saddle(atom, pulse, k * h, p, t);
            } catch (const error&) {
                break;
            }
            if (!(t.imag() > 0.0)) break;
            f[k] = value(k * h, t);
        }
    }
    auto simpson = [&](int stride) {
        const int m = n / stride;
        cplx s = f[0] + f[static_cast<std::size_t>(m) * stride];
        for (int k = 1; k < m; ++k) s += (k % 2 ? 4.0 : 2.0) * f[static_cast<std::size_t>(k) * stride];
        return s * (h * stride / 3.0);
    };
    const cplx fine = simpson(1);
    const cplx coarse = simpson(2);
    r.exact.value = -i * c * fine;
    r.exact.error = c * std::abs(fine - coarse);
    r.exact.nodes = count;
    return r;
}

enum class S2Part { qc, qu };

/// Double integrals of S2 by nested trapezoid sums along the vertical-then-real
/// contour, refined by Richardson extrapolation over three grid levels. The
/// free-motion tail after the pulse is closed-form.
inline QuadratureReport nested_riemann_s2(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx x, cplx t,
                                          double p, S2Part part, int base_nodes = 4000) {
    const double z = atom.charge();
    if (z == 0.0) return {};
    const double tf = pulse.end_time();
    const cplx xf = trajectory(pulse, x, t, p, cplx{tf});
    // Inner integrand and the closed-form tails at t_f.
    const cplx inner_tail = part == S2Part::qc ? z / (p * xf) : -z / (p * xf * xf);
    const cplx outer_tail =
        part == S2Part::qc ? z * z / (2.0 * p * p * p * xf) : -z / (2.0 * p * p * xf);
    auto inner = [&](cplx tp) {
        const cplx xx = trajectory(pulse, x, t, p, tp);
        return part == S2Part::qc ? z / (xx * xx) : -2.0 * z / (xx * xx * xx);
    };
    auto outer = [&](cplx g) { return part == S2Part::qc ? 0.5 * g * g : 0.5 * g; };

    const std::array<cplx, 3> nodes{t, cplx{t.real(), 0.0}, cplx{tf, 0.0}};
    const double l0 = std::abs(nodes[1] - nodes[0]);
    const double l1 = std::abs(nodes[2] - nodes[1]);
    auto level = [&](int n_total, long& count) {
        const int n0 = std::max(8, static_cast<int>(n_total * l0 / (l0 + l1)));
        const int n1 = std::max(8, n_total - n0);
        std::vector<cplx> ts;
        ts.reserve(n0 + n1 + 1);
        for (int k = 0; k <= n0; ++k) ts.push_back(nodes[0] + (nodes[1] - nodes[0]) * (double(k) / n0));
        for (int k = 1; k <= n1; ++k) ts.push_back(nodes[1] + (nodes[2] - nodes[1]) * (double(k) / n1));
        const std::size_t m = ts.size();
        std::vector<cplx> fin(m);
        for (std::size_t k = 0; k < m; ++k) fin[k] = inner(ts[k]);
        count += static_cast<long>(m);
        // g(t_k) = int_{t_k}^inf inner, accumulated backward.
        std::vector<cplx> g(m);
        g[m - 1] = inner_tail;
        for (std::size_t k = m - 1; k > 0; --k) g[k - 1] = g[k] + 0.5 * (ts[k] - ts[k - 1]) * (fin[k] + fin[k - 1]);
        cplx s = outer_tail;
        for (std::size_t k = 1; k < m; ++k) s += 0.5 * (ts[k] - ts[k - 1]) * (outer(g[k]) + outer(g[k - 1]));
        return s;
    };
    long count = 0;
    const cplx a = level(base_nodes, count);
    const cplx b = level(2 * base_nodes, count);
    const cplx c = level(4 * base_nodes, count);
    const cplx r1 = (4.0 * b - a) / 3.0;
    const cplx r2 = (4.0 * c - b) / 3.0;
    const cplx best = (16.0 * r2 - r1) / 15.0;
    QuadratureReport rep;
    rep.value = part == S2Part::qc ? best : cplx{0.0, -1.0} * best;
    rep.error = std::abs(best - r2);
    rep.nodes = count;
    return rep;
}

struct FdScales {
    /// Stencil radii relative to |x| and |t|.
    double rel_x = 0.05;
    double rel_t = 0.05;
    int points = 16;
};

/// Jet from differences of zeta values on circles around (x, t): the
/// discrete Cauchy formula f^(n) = n!/(N r^n) sum_k f(z + r w^k) w^{-nk}.
/// Being analytic, zeta is sampled off the real directions, which keeps
/// the differences free of the cancellation a real stencil suffers from the
/// large Volkov phase.
inline ZetaJet finite_difference_jet(const AtomicSystem& atom, const HalfCyclePulse& pulse, cplx x, cplx t,
                                     double p, int order, FdScales sc = {}) {
    SweepOptions opt;
    opt.tolerance = {1e-16, 1e-13};
    struct Vals {
        cplx z0, z1, z2qc, z2qu;
    };
    auto val = [&](cplx xx, cplx tt) {
        const ZetaJet j = zeta_jet(atom, pulse, xx, tt, p, order, opt);
        return Vals{j.z0.v, j.z1.v, j.z2qc.v, j.z2qu.v};
    };
    const double rx = sc.rel_x * std::abs(x);
    const double rt = sc.rel_t * std::abs(t);
    const int n = sc.points;
    std::vector<cplx> w(n);
    for (int k = 0; k < n; ++k) w[k] = std::polar(1.0, 2.0 * pi * k / n);

    std::vector<Vals> on_x(n), on_t(n), on_xt(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        on_x[k] = val(x + rx * w[k], t);
        on_t[k] = val(x, t + rt * w[k]);
        for (int l = 0; l < n; ++l) on_xt[static_cast<std::size_t>(k) * n + l] = val(x + rx * w[k], t + rt * w[l]);
    }
    using Get = cplx Vals::*;
    auto coeff = [&](const std::vector<Vals>& v, Get g, int m, double r) {
        cplx s{};
        for (int k = 0; k < n; ++k) s += v[k].*g * std::conj(std::pow(w[k], m));
        return s / (double(n) * std::pow(r, m));
    };
    auto mixed = [&](Get g) {
        cplx s{};
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) s += on_xt[static_cast<std::size_t>(k) * n + l].*g * std::conj(w[k] * w[l]);
        return s / (double(n) * n * rx * rt);
    };
    auto jet2 = [&](Get g) {
        return Jet2{coeff(on_x, g, 0, rx), coeff(on_x, g, 1, rx), coeff(on_t, g, 1, rt),
                    2.0 * coeff(on_x, g, 2, rx), mixed(g), 2.0 * coeff(on_t, g, 2, rt)};
    };
    ZetaJet j;
    j.order = order;
    j.z0 = jet2(&Vals::z0);
    j.z0_xxx = 6.0 * coeff(on_x, &Vals::z0, 3, rx);
    j.z0_ttt = 6.0 * coeff(on_t, &Vals::z0, 3, rt);
    j.z1 = jet2(&Vals::z1);
    const Jet2 qc = jet2(&Vals::z2qc);
    const Jet2 qu = jet2(&Vals::z2qu);
    j.z2qc = {qc.v, qc.x, qc.t};
    j.z2qu = {qu.v, qu.x, qu.t};
    return j;
}

/// Relative size |zeta0_ttt|^2 / (72 |zeta0_tt|^3) of the cubic term in the
/// time integral; close to (E0/E_a)/72 in the tunneling regime.
inline double third_order_spi_estimate(const ZetaJet& j) {
    const double a = std::abs(j.z0.tt);
    return std::norm(j.z0_ttt) / (72.0 * a * a * a);
}

/// Leading correction factor 1 + 5 zeta_ttt^2 / (24 (-zeta_tt)^3) of the time
/// integral from the cubic term.
inline cplx third_order_correction(const ZetaJet& j) {
    const cplx a = -j.z0.tt;
    return 5.0 * j.z0_ttt * j.z0_ttt / (24.0 * a * a * a);
}

/// Displacement of the S0 peak caused by keeping the cubic time term.
inline double third_order_peak_shift(const AtomicSystem& atom, const HalfCyclePulse& pulse) {
    const double p0 = pulse.drift_momentum();
    const double h = 0.05 * sfa0_width(atom, pulse);
    std::array<double, 5> base{}, corr{};
    for (int s = 0; s < 5; ++s) {
        const double p = p0 + (s - 2) * h;
        const SaddleSolution z = solve_zeroth(atom, pulse, p);
        const ZetaJet j = zeta_jet(atom, pulse, z.x0, z.t0, p, 0);
        base[s] = log_abs_amplitude(atom, pulse, p, Variant::S0);
        corr[s] = std::log(std::abs(1.0 + third_order_correction(j)));
    }
    const auto b = detail::stencil(base, h);
    const auto c = detail::stencil(corr, h);
    return -(b.d1 + c.d1) / (b.d2 + c.d2) + b.d1 / b.d2;
}

}  // namespace ccsfa
