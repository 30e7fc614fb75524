#include "gaussflow/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "gaussflow/aleksandrov.hpp"
#include "gaussflow/error.hpp"
#include "gaussflow/field_io.hpp"
#include "gaussflow/functionals.hpp"
#include "gaussflow/oracle.hpp"
#include "gaussflow/presets.hpp"
#include "gaussflow/validation.hpp"

namespace gaussflow {

namespace {

struct Context {
  const SolverConfig& cfg;
  RunManifest& manifest;
  std::ostream& out;
  std::ostream& err;
};

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return f;
}

DensitySpec resolve_spec(const SolverConfig& cfg, const std::string& text) {
  auto spec = DensitySpec::parse(text);
  if (spec.kind == DensitySpec::Kind::File) spec.path = cfg.input_path(spec.path);
  return spec;
}

ManufactureRoute route_of(const SolverConfig& cfg) {
  return cfg.manufacture_route == "stencil" ? ManufactureRoute::Stencil : ManufactureRoute::Oracle;
}

struct Problem {
  GridPtr grid;
  ScalarField f;
  ScalarField g;
  std::optional<ManufacturedProblem> manufactured;
};

Problem build_problem(const SolverConfig& cfg) {
  const auto grid = cfg.grid();
  auto g = resolve_spec(cfg, cfg.g).evaluate(grid);
  if (cfg.f_is_manufactured()) {
    auto mp = manufacture(BodyPreset::parse(cfg.target), g, route_of(cfg));
    auto f = mp.f;
    return {grid, std::move(f), std::move(g), std::move(mp)};
  }
  auto f = resolve_spec(cfg, cfg.f).evaluate(grid);
  return {grid, std::move(f), std::move(g), std::nullopt};
}

void summarize(RunManifest& m, const std::string& key, double v) { m.summary.emplace_back(key, v); }

int exit_for(Termination t) {
  switch (t) {
    case Termination::Converged:
      return kExitOk;
    case Termination::Budget:
      return kExitBudget;
    case Termination::StepFailure:
      return kExitStepFailure;
  }
  return kExitError;
}

int solve(Context& c) {
  const auto& cfg = c.cfg;
  auto problem = build_problem(cfg);
  const DensityPair pair(problem.f, problem.g, cfg.normalize_pair());
  summarize(c.manifest, "mass_f", pair.mass_f());
  summarize(c.manifest, "mass_g", pair.mass_g());

  if (cfg.aleksandrov_check) {
    // Advisory only; margins are defined for the normalised pair.
    const DensityPair normalized(problem.f, problem.g, true);
    const auto report = check_aleksandrov(normalized, cfg.aleksandrov);
    summarize(c.manifest, "aleksandrov_worst_margin", report.worst_margin);
    if (!report.margins_positive()) {
      c.err << "warning: Aleksandrov margin " << format_double(report.worst_margin)
            << " is not positive";
      if (report.worst_set) c.err << " at " << report.worst_set->describe_center();
      c.err << '\n';
    }
  }

  std::optional<BodyPreset> target;
  if (!cfg.target.empty()) target = BodyPreset::parse(cfg.target);

  std::optional<FlowState> restart;
  std::optional<ScalarField> h0;
  std::istringstream body_in(cfg.body);
  std::string kind;
  std::string path;
  body_in >> kind >> path;
  if (kind == "checkpoint") {
    restart = read_checkpoint(cfg.input_path(path), problem.grid);
  } else if (kind == "file") {
    h0 = read_field_on(cfg.input_path(path), problem.grid);
  } else {
    h0 = BodyPreset::parse(cfg.body).evaluate(problem.grid);
  }
  if (cfg.match_vg != "none") {
    if (restart) throw Error(ErrorKind::Config, "match_vg cannot rescale a checkpoint restart");
    double vg = 0.0;
    if (cfg.match_vg == "target") {
      vg = problem.manufactured ? problem.manufactured->target_Vg
                                : log_volume(derive_geometry(target->evaluate(problem.grid)), pair);
    } else {
      vg = parse_double(cfg.match_vg);
    }
    h0 = match_log_volume(*h0, pair, vg);
  }

  auto trace = open_output(cfg.output_path(cfg.trace));
  trace << trace_header() << '\n';
  double vg0 = 0.0;
  bool have_vg0 = false;
  double vg_drift = 0.0;
  long rows = 0;
  RunCallbacks callbacks;
  callbacks.on_row = [&](const TraceRow& row) {
    trace << trace_line(row) << '\n';
    if (!have_vg0) {
      vg0 = row.m.Vg;
      have_vg0 = true;
    }
    vg_drift = std::max(vg_drift, std::fabs(row.m.Vg - vg0));
    ++rows;
  };
  const auto checkpoint_path = cfg.output_path(cfg.checkpoint);
  callbacks.on_checkpoint = [&](const FlowState& s) {
    write_checkpoint(checkpoint_path, *problem.grid, s);
  };

  const auto result = restart ? resume(pair, *restart, cfg.run, callbacks)
                              : run(pair, *h0, cfg.run, callbacks);
  trace.close();

  const auto& fs = result.final_state;
  write_checkpoint(checkpoint_path, *problem.grid, fs);
  const ScalarField h_final(problem.grid, fs.h);
  write_field(cfg.output_path(cfg.final_field), h_final,
              {"final support function", "termination=" + std::string(to_string(result.reason)),
               "t=" + format_double(fs.t), "step=" + std::to_string(fs.step)});

  c.manifest.termination = std::string(to_string(result.reason));
  c.manifest.message = result.message;
  c.manifest.failure_row = result.failure_row;
  summarize(c.manifest, "steps", static_cast<double>(fs.step));
  summarize(c.manifest, "trace_rows", static_cast<double>(rows));
  summarize(c.manifest, "t", fs.t);
  summarize(c.manifest, "rejections", static_cast<double>(fs.rejections));
  summarize(c.manifest, "J", fs.measures.J);
  summarize(c.manifest, "Vg", fs.measures.Vg);
  summarize(c.manifest, "Vg_drift", vg_drift);
  summarize(c.manifest, "residual_sup", fs.measures.residual_sup);
  summarize(c.manifest, "residual_l2", fs.measures.residual_l2);
  if (target) {
    const auto err = recovery_error(h_final, target->evaluate(problem.grid), pair);
    summarize(c.manifest, "recovery_sup_err", err.sup_err);
    summarize(c.manifest, "recovery_l2_err", err.l2_err);
  }

  c.out << "solve: " << to_string(result.reason) << " step=" << fs.step
        << " t=" << format_double(fs.t)
        << " residual_sup=" << format_double(fs.measures.residual_sup);
  if (!result.message.empty()) c.out << " (" << result.message << ')';
  c.out << '\n';
  return exit_for(result.reason);
}

int manufacture_cmd(Context& c) {
  const auto& cfg = c.cfg;
  if (cfg.target.empty()) throw Error(ErrorKind::Config, "manufacture needs [densities] target");
  const auto grid = cfg.grid();
  const auto g = resolve_spec(cfg, cfg.g).evaluate(grid);
  const auto body = BodyPreset::parse(cfg.target);
  const auto mp = manufacture(body, g, route_of(cfg));
  write_field(cfg.output_path(cfg.manufactured), mp.f,
              {"manufactured f for target " + body.to_string(), "g=" + cfg.g,
               "route=" + cfg.manufacture_route,
               "compatibility_scale=" + format_double(mp.compatibility_scale),
               "target_Vg=" + format_double(mp.target_Vg)});
  const DensityPair pair(mp.f, g, false);
  summarize(c.manifest, "mass_f", pair.mass_f());
  summarize(c.manifest, "mass_g", pair.mass_g());
  summarize(c.manifest, "target_Vg", mp.target_Vg);
  summarize(c.manifest, "compatibility_scale", mp.compatibility_scale);
  c.manifest.termination = "OK";
  c.out << "manufacture: OK target=" << body.to_string()
        << " mass_f=" << format_double(pair.mass_f()) << " mass_g=" << format_double(pair.mass_g())
        << '\n';
  return kExitOk;
}

int aleksandrov_cmd(Context& c) {
  const auto& cfg = c.cfg;
  auto problem = build_problem(cfg);
  const DensityPair pair(problem.f, problem.g, cfg.normalize_pair());
  const auto report = check_aleksandrov(pair, cfg.aleksandrov);
  auto csv = open_output(cfg.output_path(cfg.margins));
  write_aleksandrov_csv(csv, report);
  summarize(c.manifest, "mass_gap", report.mass_gap);
  summarize(c.manifest, "worst_margin", report.worst_margin);
  summarize(c.manifest, "sets_tested", static_cast<double>(report.sets_tested));
  c.manifest.termination = "OK";
  if (report.margins_positive()) {
    c.out << "check-aleksandrov: margins positive on tested family, worst_margin="
          << format_double(report.worst_margin) << " over " << report.sets_tested << " sets\n";
  } else {
    c.out << "check-aleksandrov: negative margin " << format_double(report.worst_margin);
    if (report.worst_set) {
      c.out << " on " << (report.worst_set->kind() == SphericalConvexSet::Kind::Arc ? "arc" : "cap")
            << " center=" << report.worst_set->describe_center()
            << " angle=" << format_double(report.worst_set->angle());
    }
    c.out << '\n';
  }
  return kExitOk;
}

int validate_cmd(Context& c) {
  const auto& cfg = c.cfg;
  auto resolutions = cfg.resolutions;
  if (resolutions.empty()) resolutions = default_validation_resolutions(cfg.dim);
  const auto report = validate_operators(cfg.dim, resolutions);
  auto csv = open_output(cfg.output_path(cfg.operators));
  write_operator_csv(csv, report);
  const double og = report.min_order("gradient");
  const double oh = report.min_order("hessian");
  summarize(c.manifest, "gradient_order", og);
  summarize(c.manifest, "hessian_order", oh);
  c.manifest.termination = "OK";
  c.out << "validate-operators: dim=" << cfg.dim << " gradient_order=" << format_double(og)
        << " hessian_order=" << format_double(oh) << '\n';
  return kExitOk;
}

CommandOutcome execute(const std::string& name, const std::filesystem::path& config_path,
                       std::ostream& out, std::ostream& err,
                       const std::function<int(Context&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  CommandOutcome outcome;
  auto& m = outcome.manifest;
  m.command = name;
  m.config_path = config_path;
  std::optional<SolverConfig> cfg;
  try {
    cfg = parse_config(config_path);
    m.config = *cfg;
    m.record_inputs();
    Context ctx{*cfg, m, out, err};
    outcome.exit_code = body(ctx);
  } catch (const Error& e) {
    outcome.exit_code = e.kind() == ErrorKind::Config ? kExitConfig : kExitError;
    m.termination = std::string(to_string(e.kind()));
    m.message = e.what();
    if (!cfg) m.record_inputs();
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    outcome.exit_code = kExitError;
    m.termination = "Internal";
    m.message = e.what();
    err << "error: Internal: " << e.what() << '\n';
  }
  m.exit_code = outcome.exit_code;
  m.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::filesystem::path manifest_path = "manifest.json";
  if (cfg) {
    manifest_path = cfg->output_path(cfg->manifest);
  } else if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    manifest_path = std::filesystem::path(env) / manifest_path;
  }
  try {
    m.write(manifest_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (outcome.exit_code == kExitOk) outcome.exit_code = kExitError;
  }
  return outcome;
}

}  // namespace

CommandOutcome cmd_solve(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
  return execute("solve", config, out, err, solve);
}

CommandOutcome cmd_manufacture(const std::filesystem::path& config, std::ostream& out,
                               std::ostream& err) {
  return execute("manufacture", config, out, err, manufacture_cmd);
}

CommandOutcome cmd_check_aleksandrov(const std::filesystem::path& config, std::ostream& out,
                                     std::ostream& err) {
  return execute("check-aleksandrov", config, out, err, aleksandrov_cmd);
}

CommandOutcome cmd_validate_operators(const std::filesystem::path& config, std::ostream& out,
                                      std::ostream& err) {
  return execute("validate-operators", config, out, err, validate_cmd);
}

CommandOutcome run_command(const std::string& name, const std::filesystem::path& config,
                           std::ostream& out, std::ostream& err) {
  if (name == "solve") return cmd_solve(config, out, err);
  if (name == "manufacture") return cmd_manufacture(config, out, err);
  if (name == "check-aleksandrov") return cmd_check_aleksandrov(config, out, err);
  if (name == "validate-operators") return cmd_validate_operators(config, out, err);
  err << "error: Config: unknown command '" << name << "'\n";
  return {kExitConfig, {}};
}

}  // namespace gaussflow
