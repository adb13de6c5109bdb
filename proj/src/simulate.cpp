#include <conkit/simulate.hpp>

#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <sstream>

namespace conkit {

namespace {

Vector rk4_step(const DynamicalSystem& sys, const Vector& x, double h) {
    Vector k1 = eval_velocity(sys, x);
    Vector k2 = eval_velocity(sys, x + (0.5 * h) * k1);
    Vector k3 = eval_velocity(sys, x + (0.5 * h) * k2);
    Vector k4 = eval_velocity(sys, x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Number of interior steps so that (n-1) dt < t_final <= n dt up to a
// relative fudge that keeps t_final/dt integer cases at exactly n.
long step_count(double t_final, double dt) {
    long n = static_cast<long>(std::ceil(t_final / dt - 1e-9));
    if (n < 1) n = 1;
    while (n > 1 && (static_cast<double>(n - 1) * dt >= t_final)) --n;
    return n;
}

void require_same_grid(const Trajectory& a, const Trajectory& b) {
    detail::require(a.system_name == b.system_name,
                    "trajectories come from different systems");
    detail::require(a.times.size() == b.times.size(),
                    "trajectories have different sample counts");
    for (std::size_t k = 0; k < a.times.size(); ++k)
        detail::require(a.times[k] == b.times[k],
                        "trajectories use different time grids");
}

} // namespace

const char* to_string(BoundKind kind) {
    switch (kind) {
        case BoundKind::VelocityDecay: return "velocity_decay";
        case BoundKind::PairwiseDecay: return "pairwise_decay";
        case BoundKind::DiniSlope: return "dini_slope";
    }
    return "unknown";
}

ClassKSpec ClassKSpec::identity() { return {Kind::Identity, 1.0, 1.0}; }

ClassKSpec ClassKSpec::power(double p) {
    detail::require(std::isfinite(p) && p >= 1.0, "exponent must be >= 1");
    return {Kind::Power, 1.0, p};
}

ClassKSpec ClassKSpec::scaled(double alpha, double p) {
    detail::require(std::isfinite(alpha) && alpha > 0.0,
                    "scale must be positive");
    detail::require(std::isfinite(p) && p >= 1.0, "exponent must be >= 1");
    return {Kind::Scaled, alpha, p};
}

double ClassKSpec::operator()(double y) const {
    detail::require(y >= 0.0, "class-K argument must be non-negative");
    // exponent 1 stays exact so identity leaves norm values untouched.
    if (exponent == 1.0) return alpha * y;
    return alpha * std::pow(y, exponent);
}

Trajectory integrate(const DynamicalSystem& sys, const Vector& x0,
                     double t_final, double dt) {
    detail::require(std::isfinite(t_final) && t_final > 0.0,
                    "t_final must be positive");
    detail::require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
    detail::require(dt <= t_final, "dt must not exceed t_final");

    Trajectory traj;
    traj.system_name = sys.name();
    traj.step_size = dt;
    traj.method = "rk4";

    const double stiffness =
        dt * induced_norm(eval_jacobian(sys, x0), NormSpec::linf());
    if (stiffness > 0.1) {
        std::ostringstream msg;
        msg << "step may be too large: dt * ||J(x0)||_inf = " << stiffness
            << " exceeds 0.1";
        traj.warnings.push_back(msg.str());
    }

    const long n = step_count(t_final, dt);
    traj.times.reserve(static_cast<std::size_t>(n) + 1);
    traj.states.reserve(static_cast<std::size_t>(n) + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(x0);

    Vector x = x0;
    double t = 0.0;
    for (long k = 1; k <= n; ++k) {
        const double t_next =
            (k == n) ? t_final : static_cast<double>(k) * dt;
        const double h = t_next - t;
        try {
            x = rk4_step(sys, x, h);
        } catch (const NumericError& err) {
            std::ostringstream msg;
            msg << "integration blew up near t = " << t_next << ": "
                << err.what();
            throw NumericError(msg.str());
        }
        if (!x.allFinite()) {
            std::ostringstream msg;
            msg << "integration blew up near t = " << t_next
                << ": state is non-finite";
            throw NumericError(msg.str());
        }
        t = t_next;
        traj.times.push_back(t);
        traj.states.push_back(x);
    }
    return traj;
}

Vector find_equilibrium(const DynamicalSystem& sys, const Vector& x0,
                        double tol) {
    detail::require(std::isfinite(tol) && tol > 0.0, "tol must be positive");

    // Phase 1: ride the flow until the velocity is small. Capped because
    // systems with conserved speed (pure rotation) never get there; Newton
    // still gets its chance afterwards.
    constexpr int kMaxLegs = 200;
    Vector x = x0;
    for (int leg = 0; leg < kMaxLegs; ++leg) {
        Vector f = eval_velocity(sys, x);
        if (f.norm() < 1e3 * tol) break;
        const double l = induced_norm(eval_jacobian(sys, x), NormSpec::linf());
        const double dt = std::min(0.01, 0.1 / std::max(1.0, l));
        const long steps = static_cast<long>(std::ceil(1.0 / dt));
        for (long s = 0; s < steps; ++s) {
            x = rk4_step(sys, x, dt);
            if (!x.allFinite())
                throw NumericError(
                    "equilibrium search: flow is non-finite; no attractor "
                    "reachable from this start");
        }
    }

    // Phase 2: damped Newton polish.
    constexpr int kMaxNewton = 100;
    constexpr int kMaxHalvings = 30;
    Vector f = eval_velocity(sys, x);
    for (int iter = 0; iter < kMaxNewton; ++iter) {
        if (f.norm() <= tol) return x;
        Matrix j = eval_jacobian(sys, x);
        Vector delta = j.colPivHouseholderQr().solve(-f);
        if (!delta.allFinite())
            throw NumericError("equilibrium search: Newton step is non-finite");
        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < kMaxHalvings; ++halving) {
            Vector candidate = x + alpha * delta;
            if (candidate.allFinite()) {
                Vector fc;
                bool usable = true;
                try {
                    fc = eval_velocity(sys, candidate);
                } catch (const NumericError&) {
                    usable = false;
                }
                if (usable && fc.norm() < f.norm()) {
                    x = candidate;
                    f = fc;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            std::ostringstream msg;
            msg << "equilibrium search stagnated at |f| = " << f.norm()
                << " (target " << tol << ")";
            throw NumericError(msg.str());
        }
    }
    std::ostringstream msg;
    msg << "equilibrium search did not converge: |f| = " << f.norm()
        << " after " << kMaxNewton << " Newton iterations (target " << tol
        << ")";
    throw NumericError(msg.str());
}

std::vector<std::pair<double, double>> lyapunov_series(
    const Trajectory& traj, const DynamicalSystem& sys, const NormSpec& norm,
    const ClassKSpec& rho) {
    detail::require(!traj.times.empty(), "trajectory is empty");
    detail::require(traj.system_name == sys.name(),
                    "trajectory belongs to a different system");
    std::vector<std::pair<double, double>> series;
    series.reserve(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double v = vector_norm(eval_velocity(sys, traj.states[k]), norm);
        series.emplace_back(traj.times[k], rho(v));
    }
    return series;
}

VerificationVerdict verify_velocity_decay(const Trajectory& traj,
                                          const DynamicalSystem& sys,
                                          const NormSpec& norm, double c,
                                          double tol) {
    detail::require(std::isfinite(c) && c > 0.0, "rate c must be positive");
    detail::require(std::isfinite(tol) && tol > 0.0, "tol must be positive");
    detail::require(!traj.times.empty(), "trajectory is empty");
    detail::require(traj.system_name == sys.name(),
                    "trajectory belongs to a different system");

    std::vector<double> v;
    v.reserve(traj.times.size());
    for (const Vector& x : traj.states)
        v.push_back(vector_norm(eval_velocity(sys, x), norm));

    const double v0 = v.front();
    const double eps_abs = 1e-12 * (1.0 + v0);

    VerificationVerdict verdict;
    verdict.bound_kind = BoundKind::VelocityDecay;
    verdict.tolerance_used = tol;

    if (v0 == 0.0) {
        // Started exactly at an equilibrium: the envelope is degenerate and
        // the velocity must stay at numerical zero.
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k] > eps_abs) {
                std::ostringstream msg;
                msg << "velocity was zero at t = 0 but " << v[k] << " at t = "
                    << traj.times[k] << "; decay envelope is degenerate";
                throw NumericError(msg.str());
            }
        verdict.passed = true;
        verdict.worst_ratio = 0.0;
        verdict.worst_time = traj.times.front();
        return verdict;
    }

    double worst = -std::numeric_limits<double>::infinity();
    double worst_time = traj.times.front();
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double bound = v0 * std::exp(-c * traj.times[k]) + eps_abs;
        const double ratio = v[k] / bound;
        if (ratio > worst) {
            worst = ratio;
            worst_time = traj.times[k];
        }
    }
    verdict.worst_ratio = worst;
    verdict.worst_time = worst_time;
    verdict.passed = worst <= 1.0 + tol;
    return verdict;
}

VerificationVerdict verify_pairwise_contraction(const Trajectory& traj_a,
                                                const Trajectory& traj_b,
                                                const NormSpec& norm, double c,
                                                double tol) {
    detail::require(std::isfinite(c) && c > 0.0, "rate c must be positive");
    detail::require(std::isfinite(tol) && tol > 0.0, "tol must be positive");
    detail::require(!traj_a.times.empty(), "trajectory is empty");
    require_same_grid(traj_a, traj_b);
    detail::require(traj_a.states.front().size() ==
                        traj_b.states.front().size(),
                    "trajectories have different state dimensions");

    const double d0 =
        vector_norm(traj_a.states.front() - traj_b.states.front(), norm);
    const double eps_abs = 1e-12 * (1.0 + d0);

    VerificationVerdict verdict;
    verdict.bound_kind = BoundKind::PairwiseDecay;
    verdict.tolerance_used = tol;

    double worst = -std::numeric_limits<double>::infinity();
    double worst_time = traj_a.times.front();
    for (std::size_t k = 0; k < traj_a.times.size(); ++k) {
        const double d =
            vector_norm(traj_a.states[k] - traj_b.states[k], norm);
        const double bound = d0 * std::exp(-c * traj_a.times[k]) + eps_abs;
        const double ratio = d / bound;
        if (ratio > worst) {
            worst = ratio;
            worst_time = traj_a.times[k];
        }
    }
    verdict.worst_ratio = worst;
    verdict.worst_time = worst_time;
    verdict.passed = worst <= 1.0 + tol;
    return verdict;
}

VerificationVerdict dini_slope_check(const Trajectory& traj,
                                     const DynamicalSystem& sys,
                                     const NormSpec& norm, double tol) {
    detail::require(std::isfinite(tol) && tol > 0.0, "tol must be positive");
    detail::require(traj.times.size() >= 2,
                    "slope check needs at least two samples");
    detail::require(traj.system_name == sys.name(),
                    "trajectory belongs to a different system");

    const std::size_t count = traj.times.size();
    std::vector<Vector> f(count);
    std::vector<Matrix> jac(count);
    std::vector<double> v(count), mu(count);
    double mu_max = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        f[k] = eval_velocity(sys, traj.states[k]);
        jac[k] = eval_jacobian(sys, traj.states[k]);
        v[k] = vector_norm(f[k], norm);
        mu[k] = matrix_measure(jac[k], norm);
        mu_max = std::max(mu_max, std::abs(mu[k]));
    }
    if (traj.step_size * mu_max > 0.05) {
        std::ostringstream msg;
        msg << "grid too coarse for slope attribution: dt * max|mu| = "
            << traj.step_size * mu_max << " exceeds 0.05";
        throw std::invalid_argument(msg.str());
    }

    // Two residuals per interval, both normalized by the same slack:
    // the forward-difference slope against mu_k V_k, and the chain-rule
    // identity f' = J f that the slope bound rests on.
    double worst = -std::numeric_limits<double>::infinity();
    double worst_time = traj.times.front();
    for (std::size_t k = 0; k + 1 < count; ++k) {
        const double dt_k = traj.times[k + 1] - traj.times[k];
        const double slack = tol * (1.0 + std::abs(mu[k]) * v[k]);
        const double slope_residual =
            (v[k + 1] - v[k]) / dt_k - mu[k] * v[k];
        const double identity_residual = vector_norm(
            ((f[k + 1] - f[k]) / dt_k - jac[k] * f[k]).eval(), norm);
        const double ratio =
            std::max(slope_residual, identity_residual) / slack;
        if (ratio > worst) {
            worst = ratio;
            worst_time = traj.times[k];
        }
    }

    VerificationVerdict verdict;
    verdict.bound_kind = BoundKind::DiniSlope;
    verdict.tolerance_used = 0.0;
    verdict.worst_ratio = worst;
    verdict.worst_time = worst_time;
    verdict.passed = worst <= 1.0;
    return verdict;
}

} // namespace conkit
