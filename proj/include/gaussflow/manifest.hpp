#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gaussflow/config.hpp"
#include "gaussflow/flow.hpp"

namespace gaussflow {

/// Lowercase hex SHA-256 of a file's bytes. Throws Io if unreadable.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_text(const std::string& text);

struct InputDigest {
  std::filesystem::path path;
  std::string sha256;  // empty if the file could not be read
};

/// Record of one command invocation, written even when the command fails.
struct RunManifest {
  std::string command;
  std::optional<SolverConfig> config;
  std::filesystem::path config_path;
  std::string config_sha256;
  std::vector<InputDigest> inputs;
  std::string termination;  // Converged | Budget | StepFailure | OK | error kind
  int exit_code = 0;
  std::string message;
  double wall_seconds = 0.0;
  std::optional<TraceRow> failure_row;
  std::vector<std::pair<std::string, double>> summary;

  /// Digests of the config file and every input it names.
  void record_inputs();

  std::string to_json() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace gaussflow
