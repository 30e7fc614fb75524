#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaussflow/aleksandrov.hpp"
#include "gaussflow/flow.hpp"
#include "gaussflow/sphere_grid.hpp"

namespace gaussflow {

/// Solver configuration read from a sectioned `key = value` file:
///
///   # comment
///   [grid]
///   dim = 2
///   resolution = 512
///
/// Sections: grid, densities, initial, stepping, stopping, output. Unknown
/// sections or keys are errors. Relative paths, inputs and the output
/// directory alike, resolve against the directory holding the config file.
struct SolverConfig {
  std::filesystem::path source;

  // [grid]
  int dim = 0;
  std::optional<Resolution> resolution;
  std::vector<Resolution> resolutions;

  // [densities]
  std::string f = "constant 1";
  std::string g = "constant 1";
  std::optional<bool> normalize;  // unset: on, except for a manufactured f
  std::string target;             // body preset the manufactured f is built for
  std::string manufacture_route = "oracle";
  bool aleksandrov_check = true;
  AleksandrovSettings aleksandrov;

  // [initial]
  std::string body = "sphere 1";  // preset, "file <path>" or "checkpoint <path>"
  std::string match_vg = "none";  // none | target | <number>

  // [stepping] and [stopping]
  RunSettings run;

  // [output]
  std::filesystem::path directory = ".";
  std::string trace = "trace.csv";
  std::string final_field = "final.txt";
  std::string checkpoint = "checkpoint.txt";
  std::string manufactured = "manufactured_f.txt";
  std::string margins = "margins.csv";
  std::string operators = "operators.csv";
  std::string manifest = "manifest.json";

  bool f_is_manufactured() const { return f == "manufactured"; }
  bool normalize_pair() const { return normalize.value_or(!f_is_manufactured()); }

  /// Resolves a path given in the config relative to the config's directory.
  std::filesystem::path input_path(const std::filesystem::path& p) const;

  /// Output directory, honouring GAUSSFLOW_OUTPUT_DIR (taken as given).
  std::filesystem::path output_dir() const;
  std::filesystem::path output_path(const std::string& name) const;

  /// Every input file the config refers to (densities, initial body).
  std::vector<std::filesystem::path> input_files() const;

  /// All settings after defaults, as section -> key -> text.
  std::map<std::string, std::map<std::string, std::string>> resolved() const;

  GridPtr grid() const;
};

inline constexpr const char* kOutputDirEnv = "GAUSSFLOW_OUTPUT_DIR";

/// Throws Config with the line number or the offending key names.
SolverConfig parse_config(const std::filesystem::path& path);
SolverConfig parse_config_text(const std::string& text,
                               const std::filesystem::path& source = "config");

}  // namespace gaussflow
