#include <CLI11.hpp>
#include <iostream>

#include "gaussflow/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Gauss image problem solver via a normalised Gauss curvature flow"};
  app.set_version_flag("--version", GAUSSFLOW_VERSION);
  app.require_subcommand(1);

  std::string config;
  const std::pair<const char*, const char*> commands[] = {
      {"solve", "integrate the flow and write trace, final field, checkpoint and manifest"},
      {"manufacture", "write the manufactured f for the configured target body"},
      {"check-aleksandrov", "evaluate Aleksandrov margins and write the margins CSV"},
      {"validate-operators", "refinement study of the discrete gradient and Hessian"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->add_option("config", config, "config file")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gaussflow::kExitConfig;
  }
  const auto* sub = app.get_subcommands().front();
  return gaussflow::run_command(sub->get_name(), config, std::cout, std::cerr).exit_code;
}
