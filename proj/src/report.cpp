#include <conkit/report.hpp>

#include <cstdio>
#include <fstream>
#include <system_error>

namespace conkit {

namespace {

std::string optional_real(const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
}

std::string optional_flag(const std::optional<bool>& v) {
    if (!v) return {};
    return *v ? "true" : "false";
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish_csv(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

} // namespace

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit_report(const std::vector<ReportRow>& rows,
                 const std::vector<TrajectoryDump>& trajectories,
                 const std::vector<CertificationDump>& certifications,
                 const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec && !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() +
                      "': " + ec.message());

    {
        const auto path = dir / "summary.csv";
        std::ofstream out = open_csv(path);
        out << "command,system,norm,rate_estimate,certified,worst_ratio,"
               "passed,samples,wall_s\n";
        for (const ReportRow& row : rows) {
            out << row.command << ',' << row.system_name << ','
                << row.norm_kind << ',' << optional_real(row.rate_estimate)
                << ',' << optional_flag(row.certified) << ','
                << optional_real(row.worst_ratio) << ','
                << optional_flag(row.passed) << ',' << row.samples << ','
                << format_real(row.wall_seconds) << '\n';
        }
        finish_csv(out, path);
    }

    for (const TrajectoryDump& dump : trajectories) {
        const auto path = dir / ("traj_" + dump.name + ".csv");
        std::ofstream out = open_csv(path);
        const std::size_t count = dump.trajectory.times.size();
        const Index n = count ? dump.trajectory.states.front().size() : 0;
        out << 't';
        for (Index i = 1; i <= n; ++i) out << ",x_" << i;
        out << ",V_identity,V_rho\n";
        for (std::size_t k = 0; k < count; ++k) {
            out << format_real(dump.trajectory.times[k]);
            const Vector& x = dump.trajectory.states[k];
            for (Index i = 0; i < n; ++i) out << ',' << format_real(x(i));
            out << ',' << format_real(dump.v_identity[k]) << ','
                << format_real(dump.v_rho[k]) << '\n';
        }
        finish_csv(out, path);
    }

    for (const CertificationDump& dump : certifications) {
        const auto path = dir / ("cert_" + dump.name + ".csv");
        std::ofstream out = open_csv(path);
        const Index n =
            dump.samples.empty() ? 0 : dump.samples.front().x.size();
        out << "sample_index";
        for (Index i = 1; i <= n; ++i) out << ",x_" << i;
        out << ",mu\n";
        for (const SampleRecord& rec : dump.samples) {
            out << rec.index;
            for (Index i = 0; i < n; ++i) out << ',' << format_real(rec.x(i));
            out << ',' << format_real(rec.mu) << '\n';
        }
        finish_csv(out, path);
    }
}

} // namespace conkit
