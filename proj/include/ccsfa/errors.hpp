#pragma once

#include <stdexcept>
#include <string>

namespace ccsfa {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a formula (x = 0, p <= 0, window violation, ...).
class domain_error : public error {
public:
    using error::error;
};

/// No classically forbidden region left: the field suppresses the barrier.
class barrier_suppression_error : public error {
public:
    using error::error;
};

/// Iterative solver (Newton, shooting, bracketing, quadrature) did not converge.
class convergence_error : public error {
public:
    using error::error;
};

/// Saddle converged onto the mirror solution (Im t <= 0 or Re x <= 0).
class branch_error : public error {
public:
    using error::error;
};

/// Degenerate Hessian of the exponent.
class caustic_error : public error {
public:
    using error::error;
};

/// A trajectory came closer to the core than the exclusion radius.
class proximity_error : public error {
public:
    using error::error;
};

/// Malformed or inconsistent run description.
class spec_error : public error {
public:
    using error::error;
};

}  // namespace ccsfa
