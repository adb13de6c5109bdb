#pragma once

#include <conkit/types.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace conkit {

enum class JacobianSource { Analytic, FiniteDifference };

/// An autonomous ODE  x' = f(x)  with a Jacobian that is either supplied
/// analytically or synthesized by central differences. Instances are cheap
/// to copy and immutable after construction.
class DynamicalSystem {
public:
    using VelocityFn = std::function<Vector(const Vector&)>;
    using JacobianFn = std::function<Matrix(const Vector&)>;

    DynamicalSystem(std::string name, Index dimension, VelocityFn velocity,
                    JacobianFn analytic_jacobian,
                    std::map<std::string, double> params = {});

    /// Finite-difference Jacobian variant.
    DynamicalSystem(std::string name, Index dimension, VelocityFn velocity,
                    std::map<std::string, double> params = {});

    const std::string& name() const { return name_; }
    Index dimension() const { return dimension_; }
    JacobianSource jacobian_source() const { return source_; }
    const std::map<std::string, double>& params() const { return params_; }

    const VelocityFn& velocity_fn() const { return velocity_; }
    const JacobianFn& jacobian_fn() const { return jacobian_; }

private:
    std::string name_;
    Index dimension_;
    VelocityFn velocity_;
    JacobianFn jacobian_;
    JacobianSource source_;
    std::map<std::string, double> params_;
};

/// f(x). Validates the dimension and raises NumericError when the velocity
/// comes back non-finite (the state escaped the domain).
Vector eval_velocity(const DynamicalSystem& sys, const Vector& x);

/// J(x) = df/dx, analytic or finite difference per the system's source.
Matrix eval_jacobian(const DynamicalSystem& sys, const Vector& x);

/// Central-difference Jacobian with per-coordinate step
/// h_i = sqrt(eps) * max(1, |x_i|).
Matrix finite_difference_jacobian(const DynamicalSystem::VelocityFn& f,
                                  const Vector& x);

/// Relative directional residual between the system's Jacobian and a fresh
/// central difference along `direction` (unit vector, step h):
///   ||(f(x+h d) - f(x-h d)) / (2h) - J(x) d||_2 / (1 + ||J(x) d||_2)
double jacobian_consistency_check(const DynamicalSystem& sys, const Vector& x,
                                  const Vector& direction, double h);

/// Catalog constructor input. `name` selects the family:
///   linear                   x' = A x + b            (A required, b optional)
///   scalar_cubic_contractive x' = -a x - b x^3       (params a, b > 0)
///   scalar_cubic_marginal    x' = -x^3
///   rotation                 x' = omega (x2, -x1)    (param omega)
///   diag_dominant_nl         x_i' = -a x_i + eps tanh(x_{i+1 mod n})
///                            (params a, eps with 0 <= eps < a; dimension n)
struct SystemConfig {
    std::string name;
    std::map<std::string, double> params;
    std::optional<Index> dimension;
    std::optional<Matrix> matrix_a;
    std::optional<Vector> offset_b;
    std::optional<JacobianSource> jacobian;
};

/// Builds a catalog system with analytic Jacobian (or finite difference if
/// the config asks for it). Unknown names, missing or out-of-range params
/// raise std::invalid_argument.
DynamicalSystem make_system(const SystemConfig& config);

} // namespace conkit
