#pragma once

// Piecewise-linear integration paths in complex time and a driver that
// integrates a complex ODE system along them (backward or forward).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "ccsfa/errors.hpp"
#include "ccsfa/model.hpp"

namespace ccsfa {

class Contour {
public:
    enum class Kind { vertical_then_real, custom };

    /// Straight descent from t to Re t, then along the real axis to t_f.
    static Contour vertical_then_real(cplx t, double t_final) {
        std::vector<cplx> nodes{t};
        if (t.imag() != 0.0) nodes.emplace_back(t.real(), 0.0);
        if (t_final != t.real()) nodes.emplace_back(t_final, 0.0);
        if (nodes.size() == 1) nodes.push_back(nodes.front());
        return Contour(std::move(nodes), Kind::vertical_then_real);
    }

    static Contour custom(std::vector<cplx> nodes) {
        if (nodes.size() < 2) throw domain_error("Contour: at least two nodes are required");
        if (nodes.back().imag() != 0.0) throw domain_error("Contour: the final node must be real");
        return Contour(std::move(nodes), Kind::custom);
    }

    const std::vector<cplx>& nodes() const { return nodes_; }
    Kind kind() const { return kind_; }
    cplx start() const { return nodes_.front(); }
    double final_time() const { return nodes_.back().real(); }

    /// Same path with a node inserted where a real segment crosses t_r.
    Contour split_at(double t_r) const {
        std::vector<cplx> out{nodes_.front()};
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
            const cplx a = nodes_[i], b = nodes_[i + 1];
            const bool real = a.imag() == 0.0 && b.imag() == 0.0;
            if (real && std::min(a.real(), b.real()) < t_r && t_r < std::max(a.real(), b.real()))
                out.emplace_back(t_r, 0.0);
            out.push_back(b);
        }
        return Contour(std::move(out), kind_);
    }

    /// Segments reaching past the pulse end must stay on the real axis, since
    /// the field switches off non-analytically at Re t = pi/(2 omega).
    void check_against(const HalfCyclePulse& pulse) const {
        const double te = pulse.end_time();
        if (final_time() < te * (1.0 - 1e-14))
            throw domain_error("Contour: final time must not precede the end of the pulse");
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
            const cplx a = nodes_[i], b = nodes_[i + 1];
            const bool beyond = std::max(a.real(), b.real()) > te * (1.0 + 1e-14);
            if (beyond && (a.imag() != 0.0 || b.imag() != 0.0))
                throw domain_error("Contour: complex segment outside the pulse window");
        }
    }

private:
    Contour(std::vector<cplx> nodes, Kind kind) : nodes_(std::move(nodes)), kind_(kind) {}

    std::vector<cplx> nodes_;
    Kind kind_;
};

struct OdeTolerance {
    double abs = 1e-14;
    double rel = 1e-12;
};

/// Integrates dy/dt = rhs(t, y) along the straight segment a -> b.
/// rhs has signature void(cplx t, const State& y, State& dydt).
template <class State, class Rhs>
void integrate_segment(Rhs&& rhs, State& y, cplx a, cplx b, OdeTolerance tol = {}) {
    namespace ode = boost::numeric::odeint;
    if (a == b) return;
    const cplx span = b - a;
    auto stepper = ode::make_controlled(tol.abs, tol.rel, ode::runge_kutta_fehlberg78<State>());
    auto system = [&](const State& s, State& d, double u) {
        rhs(a + u * span, s, d);
        for (auto& v : d) v *= span;
    };
    try {
        ode::integrate_adaptive(stepper, system, y, 0.0, 1.0, 1e-2);
    } catch (const ode::step_adjustment_error& e) {
        throw convergence_error(std::string("integrate_segment: ") + e.what());
    }
}

/// Integrates along the contour from its first node to its last.
template <class State, class Rhs>
void integrate_forward(Rhs&& rhs, State& y, const Contour& c, OdeTolerance tol = {}) {
    const auto& n = c.nodes();
    for (std::size_t i = 0; i + 1 < n.size(); ++i) integrate_segment(rhs, y, n[i], n[i + 1], tol);
}

/// Integrates from the last node back to the first.
template <class State, class Rhs>
void integrate_backward(Rhs&& rhs, State& y, const Contour& c, OdeTolerance tol = {}) {
    const auto& n = c.nodes();
    for (std::size_t i = n.size() - 1; i > 0; --i) integrate_segment(rhs, y, n[i], n[i - 1], tol);
}

}  // namespace ccsfa
