#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gaussflow/manifest.hpp"

namespace gaussflow {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitBudget = 2,
  kExitStepFailure = 3,
  kExitConfig = 4,
};

struct CommandOutcome {
  int exit_code = kExitOk;
  RunManifest manifest;
};

/// Subcommands. Each writes its artifacts and a manifest into the output
/// directory, prints a status line on `out` and, on failure, a
/// `error: <Kind>: <message>` line on `err`.
CommandOutcome cmd_solve(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
CommandOutcome cmd_manufacture(const std::filesystem::path& config, std::ostream& out,
                               std::ostream& err);
CommandOutcome cmd_check_aleksandrov(const std::filesystem::path& config, std::ostream& out,
                                     std::ostream& err);
CommandOutcome cmd_validate_operators(const std::filesystem::path& config, std::ostream& out,
                                      std::ostream& err);

/// Dispatch by name (solve, manufacture, check-aleksandrov, validate-operators).
CommandOutcome run_command(const std::string& name, const std::filesystem::path& config,
                           std::ostream& out, std::ostream& err);

}  // namespace gaussflow
