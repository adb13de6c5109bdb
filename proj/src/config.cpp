#include <conkit/config.hpp>

#include <cmath>
#include <fstream>

namespace conkit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

double as_double(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where, "must be finite");
    return v;
}

long as_integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<long>();
}

std::uint64_t as_seed(const json& j, const std::string& where) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<long long>() >= 0)
        return static_cast<std::uint64_t>(j.get<long long>());
    fail(where, "expected a non-negative integer");
}

std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

Vector as_vector(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array");
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Index>(i)) =
            as_double(j[i], where + "[" + std::to_string(i) + "]");
    return v;
}

Matrix as_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        fail(where, "expected a non-empty array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    Matrix m;
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = j[i];
        if (!row.is_array() || row.empty())
            fail(where, "row " + std::to_string(i) + " is not an array");
        if (i == 0) {
            cols = row.size();
            m.resize(static_cast<Index>(rows), static_cast<Index>(cols));
        } else if (row.size() != cols) {
            fail(where, "rows have inconsistent lengths");
        }
        for (std::size_t k = 0; k < cols; ++k)
            m(static_cast<Index>(i), static_cast<Index>(k)) = as_double(
                row[k], where + "[" + std::to_string(i) + "][" +
                            std::to_string(k) + "]");
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

NormSpec parse_norm(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    if (!j.contains("kind")) fail(where, "missing 'kind'");
    const std::string kind = as_string(j["kind"], where + ".kind");
    if (kind == "L1") return NormSpec::l1();
    if (kind == "L2") return NormSpec::l2();
    if (kind == "LInf") return NormSpec::linf();
    if (kind == "WeightedL2") {
        if (!j.contains("weight"))
            fail(where, "WeightedL2 requires a 'weight' matrix");
        Matrix p = as_matrix(j["weight"], where + ".weight");
        try {
            return NormSpec::weighted_l2(p);
        } catch (const std::invalid_argument& err) {
            fail(where + ".weight", err.what());
        }
    }
    fail(where + ".kind",
         "unknown norm '" + kind + "' (expected L1, L2, LInf, WeightedL2)");
}

json norm_to_json(const NormSpec& norm) {
    json j;
    j["kind"] = to_string(norm.kind());
    if (norm.is_weighted()) j["weight"] = matrix_to_json(norm.weight());
    return j;
}

SystemConfig parse_system(const json& j) {
    if (!j.is_object()) fail("system", "expected an object");
    if (!j.contains("name")) fail("system", "missing 'name'");
    SystemConfig sys;
    sys.name = as_string(j["name"], "system.name");
    if (j.contains("params")) {
        const json& params = j["params"];
        if (!params.is_object()) fail("system.params", "expected an object");
        for (const auto& [key, value] : params.items())
            sys.params[key] = as_double(value, "system.params." + key);
    }
    if (j.contains("dimension"))
        sys.dimension =
            static_cast<Index>(as_integer(j["dimension"], "system.dimension"));
    if (j.contains("A")) sys.matrix_a = as_matrix(j["A"], "system.A");
    if (j.contains("b")) sys.offset_b = as_vector(j["b"], "system.b");
    if (j.contains("jacobian")) {
        const std::string source = as_string(j["jacobian"], "system.jacobian");
        if (source == "analytic")
            sys.jacobian = JacobianSource::Analytic;
        else if (source == "finite_difference")
            sys.jacobian = JacobianSource::FiniteDifference;
        else
            fail("system.jacobian",
                 "expected 'analytic' or 'finite_difference'");
    }
    return sys;
}

ClassKSpec parse_rho(const json& j) {
    if (!j.is_object()) fail("rho", "expected an object");
    if (!j.contains("kind")) fail("rho", "missing 'kind'");
    const std::string kind = as_string(j["kind"], "rho.kind");
    try {
        if (kind == "identity") return ClassKSpec::identity();
        if (kind == "power") {
            if (!j.contains("p")) fail("rho", "power requires 'p'");
            return ClassKSpec::power(as_double(j["p"], "rho.p"));
        }
        if (kind == "scaled") {
            if (!j.contains("alpha")) fail("rho", "scaled requires 'alpha'");
            if (!j.contains("p")) fail("rho", "scaled requires 'p'");
            return ClassKSpec::scaled(as_double(j["alpha"], "rho.alpha"),
                                      as_double(j["p"], "rho.p"));
        }
    } catch (const std::invalid_argument& err) {
        fail("rho", err.what());
    }
    fail("rho.kind",
         "unknown kind '" + kind + "' (expected identity, power, scaled)");
}

json rho_to_json(const ClassKSpec& rho) {
    json j;
    switch (rho.kind) {
        case ClassKSpec::Kind::Identity:
            j["kind"] = "identity";
            break;
        case ClassKSpec::Kind::Power:
            j["kind"] = "power";
            j["p"] = rho.exponent;
            break;
        case ClassKSpec::Kind::Scaled:
            j["kind"] = "scaled";
            j["alpha"] = rho.alpha;
            j["p"] = rho.exponent;
            break;
    }
    return j;
}

AuditConfig parse_audit(const json& j) {
    if (!j.is_object()) fail("audit", "expected an object");
    AuditConfig audit;
    if (j.contains("triples")) {
        const json& triples = j["triples"];
        if (!triples.is_array()) fail("audit.triples", "expected an array");
        for (std::size_t i = 0; i < triples.size(); ++i) {
            const json& t = triples[i];
            const std::string where = "audit.triples[" + std::to_string(i) + "]";
            if (!t.is_object() || !t.contains("A") || !t.contains("P") ||
                !t.contains("c"))
                fail(where, "expected an object with 'A', 'P', 'c'");
            audit.triples.push_back({as_matrix(t["A"], where + ".A"),
                                     as_matrix(t["P"], where + ".P"),
                                     as_double(t["c"], where + ".c")});
        }
    }
    if (j.contains("random")) {
        const json& r = j["random"];
        if (!r.is_object() || !r.contains("count") || !r.contains("dimension"))
            fail("audit.random", "expected an object with 'count', 'dimension'");
        RandomAuditSpec spec;
        spec.count = static_cast<int>(as_integer(r["count"], "audit.random.count"));
        spec.dimension = static_cast<Index>(
            as_integer(r["dimension"], "audit.random.dimension"));
        if (spec.count < 1) fail("audit.random.count", "must be >= 1");
        if (spec.dimension < 1) fail("audit.random.dimension", "must be >= 1");
        audit.random = spec;
    }
    if (audit.triples.empty() && !audit.random)
        fail("audit", "needs 'triples' or 'random'");
    return audit;
}

} // namespace

ExperimentConfig parse_experiment_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be an object");
    ExperimentConfig cfg;

    if (!j.contains("system")) throw ConfigError("config: missing 'system'");
    cfg.system = parse_system(j["system"]);

    if (j.contains("norm") && j.contains("norms"))
        throw ConfigError("config: give either 'norm' or 'norms', not both");
    if (j.contains("norm"))
        cfg.norms.push_back(parse_norm(j["norm"], "norm"));
    if (j.contains("norms")) {
        const json& norms = j["norms"];
        if (!norms.is_array() || norms.empty())
            throw ConfigError("norms: expected a non-empty array");
        for (std::size_t i = 0; i < norms.size(); ++i)
            cfg.norms.push_back(
                parse_norm(norms[i], "norms[" + std::to_string(i) + "]"));
    }

    if (j.contains("box")) {
        const json& box = j["box"];
        if (!box.is_object() || !box.contains("lower") || !box.contains("upper"))
            throw ConfigError("box: expected an object with 'lower', 'upper'");
        BoxDomain domain;
        domain.lower = as_vector(box["lower"], "box.lower");
        domain.upper = as_vector(box["upper"], "box.upper");
        if (domain.lower.size() != domain.upper.size())
            throw ConfigError("box: lower and upper have different lengths");
        cfg.box = domain;
    }

    if (j.contains("sampling")) {
        const json& s = j["sampling"];
        if (!s.is_object()) throw ConfigError("sampling: expected an object");
        cfg.sampling_present = true;
        if (s.contains("grid_points_per_axis"))
            cfg.sampling.grid_points_per_axis = static_cast<int>(as_integer(
                s["grid_points_per_axis"], "sampling.grid_points_per_axis"));
        if (s.contains("random_points"))
            cfg.sampling.random_points = static_cast<int>(
                as_integer(s["random_points"], "sampling.random_points"));
        if (s.contains("seed")) {
            cfg.sampling.seed = as_seed(s["seed"], "sampling.seed");
            cfg.seed_present = true;
        }
        if (cfg.sampling.grid_points_per_axis < 0)
            throw ConfigError("sampling.grid_points_per_axis: must be >= 0");
        if (cfg.sampling.grid_points_per_axis == 1)
            throw ConfigError(
                "sampling.grid_points_per_axis: must be >= 2 when set");
        if (cfg.sampling.random_points < 0)
            throw ConfigError("sampling.random_points: must be >= 0");
    }

    if (j.contains("simulation")) {
        const json& s = j["simulation"];
        if (!s.is_object()) throw ConfigError("simulation: expected an object");
        if (s.contains("x0")) cfg.x0 = as_vector(s["x0"], "simulation.x0");
        if (s.contains("xi0")) cfg.xi0 = as_vector(s["xi0"], "simulation.xi0");
        if (s.contains("t_final")) {
            cfg.t_final = as_double(s["t_final"], "simulation.t_final");
            if (*cfg.t_final <= 0.0)
                throw ConfigError("simulation.t_final: must be positive");
        }
        if (s.contains("dt")) {
            cfg.dt = as_double(s["dt"], "simulation.dt");
            if (*cfg.dt <= 0.0)
                throw ConfigError("simulation.dt: must be positive");
        }
    }

    if (j.contains("verification")) {
        const json& v = j["verification"];
        if (!v.is_object())
            throw ConfigError("verification: expected an object");
        if (v.contains("c")) cfg.c = as_double(v["c"], "verification.c");
        if (v.contains("tol")) {
            cfg.tol = as_double(v["tol"], "verification.tol");
            if (cfg.tol <= 0.0)
                throw ConfigError("verification.tol: must be positive");
        }
        if (v.contains("dini_tol")) {
            cfg.dini_tol = as_double(v["dini_tol"], "verification.dini_tol");
            if (cfg.dini_tol <= 0.0)
                throw ConfigError("verification.dini_tol: must be positive");
        }
    }

    if (j.contains("rho")) cfg.rho = parse_rho(j["rho"]);
    if (j.contains("audit")) cfg.audit = parse_audit(j["audit"]);
    if (j.contains("output_dir"))
        cfg.output_dir = as_string(j["output_dir"], "output_dir");

    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " +
                          err.what());
    }
    return parse_experiment_config(j);
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    json j;

    json sys;
    sys["name"] = cfg.system.name;
    if (!cfg.system.params.empty()) {
        json params;
        for (const auto& [key, value] : cfg.system.params) params[key] = value;
        sys["params"] = params;
    }
    if (cfg.system.dimension) sys["dimension"] = *cfg.system.dimension;
    if (cfg.system.matrix_a) sys["A"] = matrix_to_json(*cfg.system.matrix_a);
    if (cfg.system.offset_b) sys["b"] = vector_to_json(*cfg.system.offset_b);
    if (cfg.system.jacobian)
        sys["jacobian"] = *cfg.system.jacobian == JacobianSource::Analytic
                              ? "analytic"
                              : "finite_difference";
    j["system"] = sys;

    if (cfg.norms.size() == 1) {
        j["norm"] = norm_to_json(cfg.norms.front());
    } else if (cfg.norms.size() > 1) {
        json norms = json::array();
        for (const NormSpec& n : cfg.norms) norms.push_back(norm_to_json(n));
        j["norms"] = norms;
    }

    if (cfg.box) {
        j["box"] = {{"lower", vector_to_json(cfg.box->lower)},
                    {"upper", vector_to_json(cfg.box->upper)}};
    }

    if (cfg.sampling_present) {
        j["sampling"] = {
            {"grid_points_per_axis", cfg.sampling.grid_points_per_axis},
            {"random_points", cfg.sampling.random_points},
            {"seed", cfg.sampling.seed}};
    }

    json sim;
    if (cfg.x0) sim["x0"] = vector_to_json(*cfg.x0);
    if (cfg.xi0) sim["xi0"] = vector_to_json(*cfg.xi0);
    if (cfg.t_final) sim["t_final"] = *cfg.t_final;
    if (cfg.dt) sim["dt"] = *cfg.dt;
    if (!sim.empty()) j["simulation"] = sim;

    json ver;
    if (cfg.c) ver["c"] = *cfg.c;
    ver["tol"] = cfg.tol;
    ver["dini_tol"] = cfg.dini_tol;
    j["verification"] = ver;

    j["rho"] = rho_to_json(cfg.rho);

    if (cfg.audit) {
        json audit;
        if (!cfg.audit->triples.empty()) {
            json triples = json::array();
            for (const AuditTriple& t : cfg.audit->triples)
                triples.push_back({{"A", matrix_to_json(t.a)},
                                   {"P", matrix_to_json(t.p)},
                                   {"c", t.c}});
            audit["triples"] = triples;
        }
        if (cfg.audit->random) {
            audit["random"] = {{"count", cfg.audit->random->count},
                               {"dimension", cfg.audit->random->dimension}};
        }
        j["audit"] = audit;
    }

    j["output_dir"] = cfg.output_dir;
    return j;
}

} // namespace conkit
