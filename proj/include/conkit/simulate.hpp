#pragma once

#include <conkit/measure.hpp>
#include <conkit/system.hpp>

#include <string>
#include <utility>
#include <vector>

namespace conkit {

/// Fixed-step solution record. times[0] = 0, strictly increasing, and the
/// last entry lands exactly on t_final (the final step may be shorter than
/// step_size). states[k] pairs with times[k].
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::string system_name;
    double step_size;
    std::string method;
    std::vector<std::string> warnings;
};

enum class BoundKind { VelocityDecay, PairwiseDecay, DiniSlope };

const char* to_string(BoundKind kind);

/// Outcome of one trajectory check. The invariant
///   passed  <=>  worst_ratio <= 1 + tolerance_used
/// holds for every producer; worst_time is the sample time attaining
/// worst_ratio.
struct VerificationVerdict {
    bool passed;
    double worst_ratio;
    double worst_time;
    double tolerance_used;
    BoundKind bound_kind;
};

/// Class-K comparison function rho applied to norm values:
/// identity, y^p, or alpha * y^p with alpha > 0, p >= 1. Strictly
/// increasing with rho(0) = 0, so it preserves argmax positions.
struct ClassKSpec {
    enum class Kind { Identity, Power, Scaled };

    static ClassKSpec identity();
    static ClassKSpec power(double p);
    static ClassKSpec scaled(double alpha, double p);

    double operator()(double y) const;

    Kind kind = Kind::Identity;
    double alpha = 1.0;
    double exponent = 1.0;
};

/// Classical fourth-order Runge-Kutta with fixed step dt (0 < dt <= t_final).
/// Appends a warning (without failing) when dt * ||J(x0)||_inf > 0.1, and
/// raises NumericError with the blow-up time if a state goes non-finite.
Trajectory integrate(const DynamicalSystem& sys, const Vector& x0,
                     double t_final, double dt);

/// Finds x* with |f(x*)|_2 <= tol: follows the flow in capped legs until the
/// velocity is small (or the cap runs out), then polishes with damped Newton
/// (QR solve, backtracking line search). Stagnation raises NumericError.
Vector find_equilibrium(const DynamicalSystem& sys, const Vector& x0,
                        double tol);

/// (t_k, rho(|f(x_k)|)) along the trajectory.
std::vector<std::pair<double, double>> lyapunov_series(
    const Trajectory& traj, const DynamicalSystem& sys, const NormSpec& norm,
    const ClassKSpec& rho);

/// Checks the exponential envelope on the velocity seminorm V(t) = |f(x(t))|:
///   V_k <= (V_0 e^{-c t_k} + eps_abs) (1 + tol),  eps_abs = 1e-12 (1 + V_0).
/// worst_ratio is the largest V_k / (V_0 e^{-c t_k} + eps_abs). Requires
/// c > 0 and tol > 0. V_0 = 0 with a later V_k > eps_abs raises NumericError
/// (the envelope degenerated but the velocity did not).
VerificationVerdict verify_velocity_decay(const Trajectory& traj,
                                          const DynamicalSystem& sys,
                                          const NormSpec& norm, double c,
                                          double tol);

/// Same envelope applied to the distance |x_k - xi_k| between two
/// trajectories of the same system on the same time grid (mismatched grids
/// or system names raise std::invalid_argument).
VerificationVerdict verify_pairwise_contraction(const Trajectory& traj_a,
                                                const Trajectory& traj_b,
                                                const NormSpec& norm, double c,
                                                double tol);

/// Discrete one-sided slope check of V_k = |f(x_k)|: both
///   (V_{k+1} - V_k)/dt_k - mu_k V_k          (slope bound)
///   ||(f_{k+1} - f_k)/dt_k - J_k f_k||       (chain-rule identity)
/// must stay within slack_k = tol (1 + |mu_k| V_k). worst_ratio is the
/// largest residual/slack and tolerance_used is reported as 0, so the
/// verdict invariant reads "passed <=> worst_ratio <= 1". Precondition:
/// step_size * max_k |mu_k| <= 0.05, otherwise the grid is too coarse to
/// attribute residuals and std::invalid_argument is raised.
VerificationVerdict dini_slope_check(const Trajectory& traj,
                                     const DynamicalSystem& sys,
                                     const NormSpec& norm, double tol);

} // namespace conkit
