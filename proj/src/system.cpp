#include <conkit/system.hpp>

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

namespace conkit {

namespace {

std::string format_point(const Vector& x) {
    std::ostringstream out;
    out << "[";
    for (Index i = 0; i < x.size(); ++i) {
        if (i) out << ", ";
        out << x(i);
    }
    out << "]";
    return out.str();
}

// 1/cosh^2 without spurious NaN for huge arguments (cosh overflows to inf,
// the reciprocal underflows to the correct 0).
double sech_squared(double y) {
    const double r = 1.0 / std::cosh(y);
    return r * r;
}

void check_param_names(const std::map<std::string, double>& params,
                       const std::set<std::string>& allowed,
                       const std::string& system_name) {
    for (const auto& [key, value] : params) {
        (void)value;
        if (!allowed.count(key))
            throw std::invalid_argument("system '" + system_name +
                                        "': unknown parameter '" + key + "'");
    }
}

double required_param(const std::map<std::string, double>& params,
                      const std::string& key, const std::string& system_name) {
    auto it = params.find(key);
    if (it == params.end())
        throw std::invalid_argument("system '" + system_name +
                                    "': missing parameter '" + key + "'");
    if (!std::isfinite(it->second))
        throw std::invalid_argument("system '" + system_name + "': parameter '" +
                                    key + "' must be finite");
    return it->second;
}

void check_dimension_field(const SystemConfig& config, Index expected) {
    if (config.dimension && *config.dimension != expected) {
        std::ostringstream msg;
        msg << "system '" << config.name << "' has dimension " << expected
            << ", config says " << *config.dimension;
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

DynamicalSystem::DynamicalSystem(std::string name, Index dimension,
                                 VelocityFn velocity,
                                 JacobianFn analytic_jacobian,
                                 std::map<std::string, double> params)
    : name_(std::move(name)),
      dimension_(dimension),
      velocity_(std::move(velocity)),
      jacobian_(std::move(analytic_jacobian)),
      source_(JacobianSource::Analytic),
      params_(std::move(params)) {
    detail::require(dimension_ >= 1, "system dimension must be >= 1");
    detail::require(static_cast<bool>(velocity_), "velocity must be callable");
    detail::require(static_cast<bool>(jacobian_), "jacobian must be callable");
}

DynamicalSystem::DynamicalSystem(std::string name, Index dimension,
                                 VelocityFn velocity,
                                 std::map<std::string, double> params)
    : name_(std::move(name)),
      dimension_(dimension),
      velocity_(std::move(velocity)),
      source_(JacobianSource::FiniteDifference),
      params_(std::move(params)) {
    detail::require(dimension_ >= 1, "system dimension must be >= 1");
    detail::require(static_cast<bool>(velocity_), "velocity must be callable");
    VelocityFn f = velocity_;
    jacobian_ = [f](const Vector& x) { return finite_difference_jacobian(f, x); };
}

Vector eval_velocity(const DynamicalSystem& sys, const Vector& x) {
    if (x.size() != sys.dimension()) {
        std::ostringstream msg;
        msg << "state dimension " << x.size() << " does not match system '"
            << sys.name() << "' dimension " << sys.dimension();
        throw std::invalid_argument(msg.str());
    }
    detail::require_finite(x, "state");
    Vector f = sys.velocity_fn()(x);
    if (f.size() != sys.dimension())
        throw NumericError("velocity of '" + sys.name() +
                           "' returned wrong dimension");
    if (!f.allFinite())
        throw NumericError("velocity of '" + sys.name() +
                           "' is non-finite at x = " + format_point(x));
    return f;
}

Matrix eval_jacobian(const DynamicalSystem& sys, const Vector& x) {
    if (x.size() != sys.dimension()) {
        std::ostringstream msg;
        msg << "state dimension " << x.size() << " does not match system '"
            << sys.name() << "' dimension " << sys.dimension();
        throw std::invalid_argument(msg.str());
    }
    detail::require_finite(x, "state");
    Matrix j = sys.jacobian_fn()(x);
    if (j.rows() != sys.dimension() || j.cols() != sys.dimension())
        throw NumericError("jacobian of '" + sys.name() +
                           "' returned wrong dimensions");
    if (!j.allFinite())
        throw NumericError("jacobian of '" + sys.name() +
                           "' is non-finite at x = " + format_point(x));
    return j;
}

Matrix finite_difference_jacobian(const DynamicalSystem::VelocityFn& f,
                                  const Vector& x) {
    detail::require_finite(x, "state");
    const Index n = x.size();
    const double sqrt_eps =
        std::sqrt(std::numeric_limits<double>::epsilon());
    Matrix j(n, n);
    Vector xp = x, xm = x;
    for (Index col = 0; col < n; ++col) {
        const double h = sqrt_eps * std::max(1.0, std::abs(x(col)));
        xp(col) = x(col) + h;
        xm(col) = x(col) - h;
        j.col(col) = (f(xp) - f(xm)) / (2.0 * h);
        xp(col) = x(col);
        xm(col) = x(col);
    }
    if (j.rows() != n)
        throw NumericError("finite difference jacobian has wrong dimensions");
    return j;
}

double jacobian_consistency_check(const DynamicalSystem& sys, const Vector& x,
                                  const Vector& direction, double h) {
    detail::require(h > 0.0, "step must be positive");
    detail::require(direction.size() == sys.dimension(),
                    "direction dimension mismatch");
    detail::require_finite(direction, "direction");
    detail::require(std::abs(direction.norm() - 1.0) <= 1e-8,
                    "direction must be a unit vector");
    Vector fp = eval_velocity(sys, x + h * direction);
    Vector fm = eval_velocity(sys, x - h * direction);
    Vector fd = (fp - fm) / (2.0 * h);
    Vector jd = eval_jacobian(sys, x) * direction;
    return (fd - jd).norm() / (1.0 + jd.norm());
}

DynamicalSystem make_system(const SystemConfig& config) {
    const std::string& name = config.name;
    Index dim = 0;
    DynamicalSystem::VelocityFn velocity;
    DynamicalSystem::JacobianFn jacobian;
    std::map<std::string, double> params = config.params;

    if (name == "linear") {
        check_param_names(params, {}, name);
        if (!config.matrix_a)
            throw std::invalid_argument("system 'linear' requires matrix A");
        Matrix a = *config.matrix_a;
        detail::require_square(a, "linear system matrix A");
        detail::require_finite(a, "linear system matrix A");
        dim = a.rows();
        Vector b = config.offset_b ? *config.offset_b : Vector::Zero(dim);
        detail::require(b.size() == dim, "offset b dimension mismatch");
        detail::require_finite(b, "offset b");
        check_dimension_field(config, dim);
        velocity = [a, b](const Vector& x) -> Vector { return a * x + b; };
        jacobian = [a](const Vector&) -> Matrix { return a; };
    } else if (name == "scalar_cubic_contractive") {
        check_param_names(params, {"a", "b"}, name);
        const double a = required_param(params, "a", name);
        const double b = required_param(params, "b", name);
        detail::require(a > 0.0 && b > 0.0,
                        "scalar_cubic_contractive requires a > 0 and b > 0");
        dim = 1;
        check_dimension_field(config, dim);
        velocity = [a, b](const Vector& x) -> Vector {
            Vector f(1);
            f(0) = -a * x(0) - b * x(0) * x(0) * x(0);
            return f;
        };
        jacobian = [a, b](const Vector& x) -> Matrix {
            Matrix j(1, 1);
            j(0, 0) = -a - 3.0 * b * x(0) * x(0);
            return j;
        };
    } else if (name == "scalar_cubic_marginal") {
        check_param_names(params, {}, name);
        dim = 1;
        check_dimension_field(config, dim);
        velocity = [](const Vector& x) -> Vector {
            Vector f(1);
            f(0) = -x(0) * x(0) * x(0);
            return f;
        };
        jacobian = [](const Vector& x) -> Matrix {
            Matrix j(1, 1);
            j(0, 0) = -3.0 * x(0) * x(0);
            return j;
        };
    } else if (name == "rotation") {
        check_param_names(params, {"omega"}, name);
        const double omega = required_param(params, "omega", name);
        dim = 2;
        check_dimension_field(config, dim);
        velocity = [omega](const Vector& x) -> Vector {
            Vector f(2);
            f(0) = omega * x(1);
            f(1) = -omega * x(0);
            return f;
        };
        Matrix j(2, 2);
        j << 0.0, omega, -omega, 0.0;
        jacobian = [j](const Vector&) -> Matrix { return j; };
    } else if (name == "diag_dominant_nl") {
        check_param_names(params, {"a", "eps"}, name);
        const double a = required_param(params, "a", name);
        const double eps = required_param(params, "eps", name);
        detail::require(a > 0.0, "diag_dominant_nl requires a > 0");
        detail::require(eps >= 0.0 && eps < a,
                        "diag_dominant_nl requires 0 <= eps < a");
        if (!config.dimension)
            throw std::invalid_argument(
                "system 'diag_dominant_nl' requires a dimension");
        dim = *config.dimension;
        detail::require(dim >= 1, "dimension must be >= 1");
        const Index n = dim;
        velocity = [a, eps, n](const Vector& x) -> Vector {
            Vector f(n);
            for (Index i = 0; i < n; ++i)
                f(i) = -a * x(i) + eps * std::tanh(x((i + 1) % n));
            return f;
        };
        // For n = 1 the coupling term folds onto the diagonal, hence the
        // accumulation instead of assignment.
        jacobian = [a, eps, n](const Vector& x) -> Matrix {
            Matrix j = Matrix::Zero(n, n);
            for (Index i = 0; i < n; ++i) {
                j(i, i) += -a;
                j(i, (i + 1) % n) += eps * sech_squared(x((i + 1) % n));
            }
            return j;
        };
    } else {
        throw std::invalid_argument(
            "unknown system '" + name +
            "'; catalog: linear, scalar_cubic_contractive, "
            "scalar_cubic_marginal, rotation, diag_dominant_nl");
    }

    if (config.jacobian &&
        *config.jacobian == JacobianSource::FiniteDifference)
        return DynamicalSystem(name, dim, std::move(velocity),
                               std::move(params));
    return DynamicalSystem(name, dim, std::move(velocity), std::move(jacobian),
                           std::move(params));
}

} // namespace conkit
