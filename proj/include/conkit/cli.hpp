#pragma once

#include <string>
#include <vector>

namespace conkit {

/// Runs one CLI command. args start at the subcommand, e.g.
/// {"verify", "--config", "cubic.json", "--output", "out"}.
///
/// Subcommands: measure, certify, simulate, verify, audit-eq10.
/// Shared flags: --config <path> (required), --output <dir>, --seed <int>,
/// --quiet. Seed precedence: flag > config > CONTRACTION_KIT_SEED env > 0.
///
/// Exit codes: 0 pass, 1 verification failure, 2 usage or config error,
/// 3 numerical or I/O error.
int run_command(const std::vector<std::string>& args);

} // namespace conkit
