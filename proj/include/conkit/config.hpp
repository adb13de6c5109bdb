#pragma once

#include <conkit/certify.hpp>
#include <conkit/simulate.hpp>
#include <conkit/system.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace conkit {

/// One explicit (A, P, c) triple for the equivalence audit.
struct AuditTriple {
    Matrix a;
    Matrix p;
    double c;
};

/// Random audit batch: `count` seeded draws of dimension `dimension`.
struct RandomAuditSpec {
    int count = 0;
    Index dimension = 0;
};

struct AuditConfig {
    std::vector<AuditTriple> triples;
    std::optional<RandomAuditSpec> random;
};

/// Everything a command run needs, parsed from one JSON file. Optional
/// fields stay unset when absent; each command validates the fields it
/// actually reads. Parsing is strict about types and value ranges
/// (ConfigError) but ignores unknown keys.
struct ExperimentConfig {
    SystemConfig system;
    std::vector<NormSpec> norms;          // parsed from "norm" or "norms"
    std::optional<BoxDomain> box;
    SamplingPlan sampling;
    bool sampling_present = false;
    bool seed_present = false;
    std::optional<Vector> x0;
    std::optional<Vector> xi0;
    std::optional<double> t_final;
    std::optional<double> dt;
    std::optional<double> c;
    double tol = 1e-6;
    double dini_tol = 1e-2;
    ClassKSpec rho = ClassKSpec::identity();
    std::optional<AuditConfig> audit;
    std::string output_dir = "out";
};

/// Parse from JSON text / file. Malformed JSON, wrong types, bad matrices,
/// invalid norms and out-of-range values all raise ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

/// Serialize the fields the artifact reads. parse(to_json(parse(j))) is
/// identical to parse(j).
nlohmann::json to_json(const ExperimentConfig& config);

} // namespace conkit
