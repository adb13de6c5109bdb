#pragma once

#include <conkit/certify.hpp>
#include <conkit/simulate.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace conkit {

/// One line of summary.csv. Unset optionals serialize as empty cells.
struct ReportRow {
    std::string command;
    std::string system_name;
    std::string norm_kind;
    std::optional<double> rate_estimate;
    std::optional<bool> certified;
    std::optional<double> worst_ratio;
    std::optional<bool> passed;
    long samples = 0;
    double wall_seconds = 0.0;
};

/// Trajectory dump for traj_<name>.csv: states plus the two Lyapunov
/// columns V_identity = |f(x_k)| and V_rho = rho(|f(x_k)|).
struct TrajectoryDump {
    std::string name;
    Trajectory trajectory;
    std::vector<double> v_identity;
    std::vector<double> v_rho;
};

/// Certification dump for cert_<name>.csv.
struct CertificationDump {
    std::string name;
    std::vector<SampleRecord> samples;
};

/// Shortest-exact decimal with 17 significant digits ("%.17g"); reread
/// values are bit-identical.
std::string format_real(double v);

/// Writes summary.csv plus one CSV per dump into `dir` (created if needed).
/// Headers are fixed:
///   summary:  command,system,norm,rate_estimate,certified,worst_ratio,passed,samples,wall_s
///   traj:     t,x_1..x_n,V_identity,V_rho
///   cert:     sample_index,x_1..x_n,mu
/// Output is deterministic except the wall_s column. Raises IoError when a
/// file cannot be written.
void emit_report(const std::vector<ReportRow>& rows,
                 const std::vector<TrajectoryDump>& trajectories,
                 const std::vector<CertificationDump>& certifications,
                 const std::filesystem::path& dir);

} // namespace conkit
