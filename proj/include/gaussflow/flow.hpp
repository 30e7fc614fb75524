#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaussflow/densities.hpp"
#include "gaussflow/geometry.hpp"
#include "gaussflow/polar_filter.hpp"
#include "gaussflow/stencils.hpp"

namespace gaussflow {

/// G(X) = |X|^n / g(X / |X|). Throws OriginCollision for |X| < 1e-12.
double weight_G(const Vec3& X, const DirectionInterpolator& g, int dim);

/// dh/dt = h - f G(X) K at every node.
ScalarField flow_rhs(const BodyGeometry& geom, const DensityPair& pair);
ScalarField flow_rhs(const ScalarField& h, const DensityPair& pair);

/// Scalar summaries of a support field, everything the stepper and the trace
/// need from one geometry pass.
struct FlowMeasures {
  double J = 0.0;
  double Vg = 0.0;
  double residual_sup = 0.0;
  double residual_l2 = 0.0;  // sqrt(sum_i w_i R_i^2)
  double dissipation = 0.0;
  BoundMonitors bounds;
  double min_radius = 0.0;  // smallest eigenvalue of b over all nodes
  /// Upper bound on the spectral radius of the linearised right-hand side.
  double stiffness = 0.0;
};

/// Allocation-free evaluator of the flow for a fixed density pair.
class FlowModel {
 public:
  FlowModel(const DensityPair& pair, bool polar_filter);

  const SphereGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int dim() const { return grid_->dim(); }
  bool filtered() const { return filter_ != nullptr; }

  /// Writes dh/dt into `out`. Returns false, leaving `out` unspecified, when h
  /// is not positive, b is not positive definite or X reaches the origin.
  bool rhs(std::span<const double> h, std::span<double> out);

  /// Applies the polar filter (if enabled) to a tendency.
  void filter(std::span<double> tendency);

  /// Throws like derive_geometry on inadmissible h.
  FlowMeasures measure(std::span<const double> h);

 private:
  double g_at(const Vec3& u) const;

  const DensityPair* pair_;
  GridPtr grid_;
  DerivativeOperator op_;
  LocalDerivatives d_;
  std::vector<double> f_;
  bool g_constant_;
  double g_value_;
  std::vector<double> symbol_;  // per node: bound on the summed derivative symbols
  std::unique_ptr<PolarFilter> filter_;
};

struct StepperSettings {
  double dt_initial = 1e-3;
  double dt_min = 1e-12;
  double dt_growth_bound = 1e3;  // dt never exceeds dt_initial * dt_growth_bound
  double dt_safety = 0.9;
  double step_tol = 1e-8;       // step-doubling error per unit h_max
  double j_allowance = 1e-12;   // added to the 10 dt^2 monotonicity allowance
  double convexity_floor = 1e-8;  // relative to h_max
  bool polar_filter = true;     // S^2 only
  bool fixed_dt = false;        // single RK4 steps of dt_initial, no adaptation

  /// Throws Config naming the offending keys.
  void validate() const;
};

struct FlowState {
  double t = 0.0;
  std::vector<double> h;
  long step = 0;
  long rejections = 0;
  double dt_next = 0.0;  // 0: not yet chosen
  FlowMeasures measures;
};

struct TraceRow {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  FlowMeasures m;
  long rejections = 0;
};

TraceRow trace_row(const FlowState& state, double dt);

/// Exact CSV columns of the trace file.
std::string trace_header();
std::string trace_line(const TraceRow& row);

/// Outcome of a single step attempt.
struct StepAttempt {
  bool accepted = false;
  std::string reason;  // why it was rejected
  double error = 0.0;  // normalised step-doubling estimate
};

class FlowEngine {
 public:
  FlowEngine(const DensityPair& pair, StepperSettings settings);

  FlowModel& model() { return model_; }
  const StepperSettings& settings() const { return settings_; }

  FlowState initial_state(const ScalarField& h0);

  /// Largest dt the explicit scheme tolerates for the given measures.
  double stable_dt(const FlowMeasures& m) const;

  /// One attempt with the given dt; on acceptance fills `next`.
  StepAttempt try_step(const FlowState& state, double dt, FlowState& next);

  /// Attempts steps from `state`, halving dt on every rejection, until one is
  /// accepted. Returns the dt used. Throws StepFailure below dt_min.
  double advance(FlowState& state);

 private:
  bool rk4(std::span<const double> y, double dt, std::span<double> out, bool reuse_k0 = false);

  const DensityPair* pair_;
  StepperSettings settings_;
  FlowModel model_;
  std::vector<double> k0_, k1_, k2_, k3_, k4_, tmp_, mid_, full_, half_;
};

enum class Termination { Converged, Budget, StepFailure };

std::string_view to_string(Termination t);

struct RunSettings {
  StepperSettings stepping;
  double max_time = 100.0;
  long max_steps = 10'000'000;
  double residual_sup_tol = 1e-6;
  double mass_balance_tol = 1e-6;
  long snapshot_interval = 0;  // steps between checkpoints, 0 disables
};

struct RunCallbacks {
  std::function<void(const TraceRow&)> on_row;
  std::function<void(const FlowState&)> on_checkpoint;
};

struct RunResult {
  FlowState final_state;
  std::vector<TraceRow> trace;
  Termination reason = Termination::Budget;
  std::string message;
  std::optional<TraceRow> failure_row;  // state at which stepping failed
};

/// Integrates until the residual drops below tolerance, the budget runs out
/// or no step can be taken. A fresh start records the initial row; a restart
/// from `resume` continues without repeating it.
RunResult run(const DensityPair& pair, const ScalarField& h0, const RunSettings& settings,
              const RunCallbacks& callbacks = {});
RunResult resume(const DensityPair& pair, FlowState state, const RunSettings& settings,
                 const RunCallbacks& callbacks = {});

/// Checkpoint: a sphere-field file whose comment lines carry t, dt_next,
/// step and rejections.
void write_checkpoint(const std::filesystem::path& path, const SphereGrid& grid,
                      const FlowState& state);
FlowState read_checkpoint(const std::filesystem::path& path, const GridPtr& grid);

}  // namespace gaussflow
