#include <conkit/cli.hpp>

#include <conkit/config.hpp>
#include <conkit/random.hpp>
#include <conkit/report.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

namespace conkit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CommandContext {
    ExperimentConfig cfg;
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
    bool quiet = false;

    void say(const std::string& line) const {
        if (!quiet) std::cout << line << "\n";
    }
};

std::string format_point(const Vector& x) {
    std::ostringstream out;
    out << "[";
    for (Index i = 0; i < x.size(); ++i) {
        if (i) out << ", ";
        out << format_real(x(i));
    }
    out << "]";
    return out.str();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const std::optional<std::uint64_t>& config) {
    if (flag) return *flag;
    if (config) return *config;
    if (const char* env = std::getenv("CONTRACTION_KIT_SEED")) {
        std::string text(env);
        try {
            std::size_t used = 0;
            unsigned long long v = std::stoull(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return static_cast<std::uint64_t>(v);
        } catch (const std::exception&) {
            throw ConfigError("CONTRACTION_KIT_SEED is not a non-negative "
                              "integer: '" + text + "'");
        }
    }
    return 0;
}

const NormSpec& single_norm(const ExperimentConfig& cfg,
                            const char* command) {
    static const NormSpec default_l2 = NormSpec::l2();
    if (cfg.norms.empty()) return default_l2;
    if (cfg.norms.size() > 1)
        throw ConfigError(std::string(command) +
                          " takes a single norm; got " +
                          std::to_string(cfg.norms.size()));
    return cfg.norms.front();
}

Vector require_x0(const ExperimentConfig& cfg) {
    if (!cfg.x0) throw ConfigError("simulation.x0 is required");
    return *cfg.x0;
}

const BoxDomain& require_box(const ExperimentConfig& cfg) {
    if (!cfg.box) throw ConfigError("box is required");
    return *cfg.box;
}

SamplingPlan require_sampling(const CommandContext& ctx) {
    if (!ctx.cfg.sampling_present)
        throw ConfigError("sampling is required");
    SamplingPlan plan = ctx.cfg.sampling;
    plan.seed = ctx.seed;
    if (plan.grid_points_per_axis < 2 && plan.random_points < 1)
        throw ConfigError(
            "sampling: need grid_points_per_axis >= 2 or random_points >= 1");
    return plan;
}

void print_warnings(const CommandContext& ctx, const Trajectory& traj) {
    if (ctx.quiet) return;
    for (const std::string& w : traj.warnings)
        std::cerr << "warning: " << w << "\n";
}

// Default step keeps the fastest local rate resolved; the measure can be
// zero (rotation), hence the floor before dividing.
double default_dt(const DynamicalSystem& sys, const Vector& x0,
                  const NormSpec& norm, double t_final) {
    const double mu = std::abs(pointwise_rate(sys, x0, norm));
    double dt = std::min(0.01, 0.05 / std::max(mu, 1e-12));
    return std::min(dt, t_final);
}

TrajectoryDump make_dump(const std::string& name, Trajectory traj,
                         const DynamicalSystem& sys, const NormSpec& norm,
                         const ClassKSpec& rho) {
    TrajectoryDump dump;
    dump.name = name;
    auto identity_series =
        lyapunov_series(traj, sys, norm, ClassKSpec::identity());
    auto rho_series = lyapunov_series(traj, sys, norm, rho);
    dump.v_identity.reserve(identity_series.size());
    dump.v_rho.reserve(rho_series.size());
    for (const auto& [t, v] : identity_series) dump.v_identity.push_back(v);
    for (const auto& [t, v] : rho_series) dump.v_rho.push_back(v);
    dump.trajectory = std::move(traj);
    return dump;
}

int cmd_measure(const CommandContext& ctx) {
    DynamicalSystem sys = make_system(ctx.cfg.system);
    const Vector x0 = require_x0(ctx.cfg);
    std::vector<NormSpec> norms = ctx.cfg.norms;
    if (norms.empty()) norms.push_back(NormSpec::l2());

    std::vector<ReportRow> rows;
    for (const NormSpec& norm : norms) {
        const auto start = Clock::now();
        const double mu = pointwise_rate(sys, x0, norm);
        ReportRow row;
        row.command = "measure";
        row.system_name = sys.name();
        row.norm_kind = to_string(norm.kind());
        row.rate_estimate = -mu;
        row.samples = 1;
        row.wall_seconds = seconds_since(start);
        rows.push_back(row);
        ctx.say("mu[" + std::string(to_string(norm.kind())) + "](J(x0)) = " +
                format_real(mu));
    }
    emit_report(rows, {}, {}, ctx.out_dir);
    ctx.say("wrote " + (ctx.out_dir / "summary.csv").string());
    return 0;
}

int cmd_certify(const CommandContext& ctx) {
    DynamicalSystem sys = make_system(ctx.cfg.system);
    const NormSpec& norm = single_norm(ctx.cfg, "certify");
    const BoxDomain& box = require_box(ctx.cfg);
    const SamplingPlan plan = require_sampling(ctx);

    const auto start = Clock::now();
    std::vector<SampleRecord> records = sample_measures(sys, box, norm, plan);
    CertificationReport report = summarize_samples(records, norm);
    const double wall = seconds_since(start);

    ReportRow row;
    row.command = "certify";
    row.system_name = sys.name();
    row.norm_kind = to_string(norm.kind());
    row.rate_estimate = report.rate_estimate;
    row.certified = report.certified;
    row.samples = report.sample_count;
    row.wall_seconds = wall;

    emit_report({row}, {}, {{sys.name(), std::move(records)}}, ctx.out_dir);
    std::ostringstream line;
    line << (report.certified ? "certified" : "not certified")
         << ": rate_estimate = " << format_real(report.rate_estimate)
         << ", sup mu = " << format_real(report.sup_measure) << " at "
         << format_point(report.witness) << ", samples = "
         << report.sample_count << " (" << report.caveat << ")";
    ctx.say(line.str());
    ctx.say("wrote " + (ctx.out_dir / "summary.csv").string());
    return report.certified ? 0 : 1;
}

int cmd_simulate(const CommandContext& ctx) {
    DynamicalSystem sys = make_system(ctx.cfg.system);
    const NormSpec& norm = single_norm(ctx.cfg, "simulate");
    const Vector x0 = require_x0(ctx.cfg);
    if (!ctx.cfg.t_final)
        throw ConfigError("simulation.t_final is required for simulate");
    const double t_final = *ctx.cfg.t_final;
    const double dt =
        ctx.cfg.dt ? *ctx.cfg.dt : default_dt(sys, x0, norm, t_final);
    if (dt > t_final)
        throw ConfigError("simulation.dt must not exceed t_final");

    const auto start = Clock::now();
    Trajectory traj = integrate(sys, x0, t_final, dt);
    const double wall = seconds_since(start);
    print_warnings(ctx, traj);

    ReportRow row;
    row.command = "simulate";
    row.system_name = sys.name();
    row.norm_kind = to_string(norm.kind());
    row.samples = static_cast<long>(traj.times.size());
    row.wall_seconds = wall;

    std::ostringstream line;
    line << "integrated " << sys.name() << " to t = " << format_real(t_final)
         << " (" << traj.times.size() << " samples, dt = " << format_real(dt)
         << ")";
    ctx.say(line.str());

    emit_report({row},
                {make_dump(sys.name(), std::move(traj), sys, norm,
                           ctx.cfg.rho)},
                {}, ctx.out_dir);
    ctx.say("wrote " + (ctx.out_dir / "summary.csv").string());
    return 0;
}

int cmd_verify(const CommandContext& ctx) {
    DynamicalSystem sys = make_system(ctx.cfg.system);
    const NormSpec& norm = single_norm(ctx.cfg, "verify");
    const Vector x0 = require_x0(ctx.cfg);
    const BoxDomain& box = require_box(ctx.cfg);
    const SamplingPlan plan = require_sampling(ctx);

    std::vector<ReportRow> rows;

    auto cert_start = Clock::now();
    std::vector<SampleRecord> records = sample_measures(sys, box, norm, plan);
    CertificationReport report = summarize_samples(records, norm);
    {
        ReportRow row;
        row.command = "certify";
        row.system_name = sys.name();
        row.norm_kind = to_string(norm.kind());
        row.rate_estimate = report.rate_estimate;
        row.certified = report.certified;
        row.samples = report.sample_count;
        row.wall_seconds = seconds_since(cert_start);
        rows.push_back(row);
    }
    std::ostringstream cert_line;
    cert_line << (report.certified ? "certified" : "not certified")
              << ": rate_estimate = " << format_real(report.rate_estimate)
              << ", sup mu = " << format_real(report.sup_measure)
              << ", samples = " << report.sample_count << " ("
              << report.caveat << ")";
    ctx.say(cert_line.str());

    if (!ctx.cfg.c && !report.certified) {
        emit_report(rows, {}, {{sys.name(), std::move(records)}}, ctx.out_dir);
        std::cerr << "error: no contraction rate available: certification "
                     "found sup mu = "
                  << format_real(report.sup_measure)
                  << " and no explicit verification.c was given\n";
        return 1;
    }
    const double c = ctx.cfg.c ? *ctx.cfg.c : report.rate_estimate;
    if (!(c > 0.0)) {
        emit_report(rows, {}, {{sys.name(), std::move(records)}}, ctx.out_dir);
        std::cerr << "error: verification.c must be positive, got "
                  << format_real(c) << "\n";
        return 1;
    }

    const double t_final = ctx.cfg.t_final ? *ctx.cfg.t_final : 10.0 / c;
    const double dt =
        ctx.cfg.dt ? std::min(*ctx.cfg.dt, t_final)
                   : default_dt(sys, x0, norm, t_final);

    Trajectory traj = integrate(sys, x0, t_final, dt);
    print_warnings(ctx, traj);

    Vector xi0;
    if (ctx.cfg.xi0) {
        xi0 = *ctx.cfg.xi0;
    } else {
        xi0 = find_equilibrium(sys, x0, ctx.cfg.tol);
        ctx.say("equilibrium candidate xi0 = " + format_point(xi0));
    }
    Trajectory traj_b = integrate(sys, xi0, t_final, dt);
    print_warnings(ctx, traj_b);

    const long traj_samples = static_cast<long>(traj.times.size());
    bool all_passed = true;
    auto push_verdict = [&](const VerificationVerdict& verdict, double wall) {
        ReportRow row;
        row.command = std::string("verify:") + to_string(verdict.bound_kind);
        row.system_name = sys.name();
        row.norm_kind = to_string(norm.kind());
        row.worst_ratio = verdict.worst_ratio;
        row.passed = verdict.passed;
        row.samples = traj_samples;
        row.wall_seconds = wall;
        rows.push_back(row);
        all_passed = all_passed && verdict.passed;
        std::ostringstream line;
        line << to_string(verdict.bound_kind) << ": "
             << (verdict.passed ? "passed" : "FAILED")
             << " (worst_ratio = " << format_real(verdict.worst_ratio)
             << " at t = " << format_real(verdict.worst_time) << ")";
        ctx.say(line.str());
    };

    auto t0 = Clock::now();
    VerificationVerdict verdict =
        verify_velocity_decay(traj, sys, norm, c, ctx.cfg.tol);
    push_verdict(verdict, seconds_since(t0));
    t0 = Clock::now();
    verdict = verify_pairwise_contraction(traj, traj_b, norm, c, ctx.cfg.tol);
    push_verdict(verdict, seconds_since(t0));
    t0 = Clock::now();
    verdict = dini_slope_check(traj, sys, norm, ctx.cfg.dini_tol);
    push_verdict(verdict, seconds_since(t0));

    std::vector<TrajectoryDump> dumps;
    dumps.push_back(
        make_dump(sys.name(), std::move(traj), sys, norm, ctx.cfg.rho));
    dumps.push_back(make_dump(sys.name() + "_comparison", std::move(traj_b),
                              sys, norm, ctx.cfg.rho));
    emit_report(rows, dumps, {{sys.name(), std::move(records)}}, ctx.out_dir);
    ctx.say("wrote " + (ctx.out_dir / "summary.csv").string());
    ctx.say(all_passed ? "verify: PASS" : "verify: FAIL");
    return all_passed ? 0 : 1;
}

int cmd_audit(const CommandContext& ctx) {
    if (!ctx.cfg.audit)
        throw ConfigError("audit block is required for audit-eq10");
    const AuditConfig& audit = *ctx.cfg.audit;

    const auto start = Clock::now();
    long total = 0;
    long boundary = 0;
    long disagreements = 0;

    auto consume = [&](const Matrix& a, const Matrix& p, double c) {
        EquivalenceRecord rec = equivalence_audit(a, p, c);
        ++total;
        if (rec.boundary) {
            ++boundary;
        } else if (!rec.agree) {
            ++disagreements;
            if (!ctx.quiet) {
                std::cerr << "disagreement: measure_side = "
                          << format_real(rec.measure_side)
                          << ", lmi_side = " << format_real(rec.lmi_side)
                          << "\n";
            }
        }
    };

    for (const AuditTriple& t : audit.triples) consume(t.a, t.p, t.c);
    if (audit.random) {
        rng::Engine engine(ctx.seed);
        const Index n = audit.random->dimension;
        for (int k = 0; k < audit.random->count; ++k) {
            Matrix a = rng::matrix(engine, n, n, -2.0, 2.0);
            Matrix p = rng::spd(engine, n, 0.1, 10.0);
            const double c = rng::uniform(engine, -2.0, 2.0);
            consume(a, p, c);
        }
    }

    ReportRow row;
    row.command = "audit-eq10";
    row.norm_kind = to_string(NormKind::WeightedL2);
    row.passed = disagreements == 0;
    row.samples = total;
    row.wall_seconds = seconds_since(start);
    emit_report({row}, {}, {}, ctx.out_dir);

    std::ostringstream line;
    line << "audited " << total << " triples: " << disagreements
         << " disagreements, " << boundary << " boundary cases";
    ctx.say(line.str());
    ctx.say("wrote " + (ctx.out_dir / "summary.csv").string());
    return disagreements == 0 ? 0 : 1;
}

} // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"contraction certification toolkit"};
    app.name("conkit");
    app.require_subcommand(1);

    std::string config_path;
    std::string output_override;
    std::optional<std::uint64_t> seed_flag;
    bool quiet = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"measure", "evaluate mu(J(x0)) under the requested norms"},
        {"certify", "sweep a box for sup mu(J(x)) and a rate estimate"},
        {"simulate", "integrate the system and dump the trajectory"},
        {"verify", "certify, integrate, and check the decay bounds"},
        {"audit-eq10",
         "cross-check the weighted measure sign against the LMI form"},
    };
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "experiment config (JSON)")
            ->required();
        sub->add_option("--output", output_override, "output directory");
        sub->add_option("--seed", seed_flag, "sampling seed (overrides config)");
        sub->add_flag("--quiet", quiet, "suppress stdout chatter");
    }

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("conkit");
    for (const std::string& a : args) argv_storage.push_back(a);
    std::vector<const char*> argv;
    argv.reserve(argv_storage.size());
    for (const std::string& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();

    CommandContext ctx;
    ctx.quiet = quiet;
    try {
        ctx.cfg = load_experiment_config(config_path);
        std::optional<std::uint64_t> config_seed;
        if (ctx.cfg.seed_present) config_seed = ctx.cfg.sampling.seed;
        ctx.seed = resolve_seed(seed_flag, config_seed);
        ctx.cfg.sampling.seed = ctx.seed;
        ctx.out_dir = output_override.empty() ? ctx.cfg.output_dir
                                              : output_override;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (command == "measure") return cmd_measure(ctx);
        if (command == "certify") return cmd_certify(ctx);
        if (command == "simulate") return cmd_simulate(ctx);
        if (command == "verify") return cmd_verify(ctx);
        if (command == "audit-eq10") return cmd_audit(ctx);
        std::cerr << "error: unknown command '" << command << "'\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace conkit
