#include "gaussflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gaussflow/error.hpp"
#include "gaussflow/field_io.hpp"
#include "gaussflow/functionals.hpp"
#include "gaussflow/summation.hpp"

namespace gaussflow {

namespace {

constexpr double kOriginFloorSq = 1e-24;
// Stability boundary of classical RK4 on the negative real axis.
constexpr double kRk4RealStability = 2.785;

// f G K = f rho^n / (g det b), grouped so that spheres give exactly f h.
inline double fgk(double f, double rho, double rho_pow_n_minus_1, double g, double detb) {
  return f * (rho * (rho_pow_n_minus_1 / (g * detb)));
}

}  // namespace

double weight_G(const Vec3& X, const DirectionInterpolator& g, int dim) {
  const double r = norm(X);
  if (r < 1e-12) throw Error(ErrorKind::OriginCollision, "|X| below 1e-12");
  const Vec3 u = X * (1.0 / r);
  const double rn = dim == 2 ? r * r : r * r * r;
  return rn / g(u);
}

ScalarField flow_rhs(const BodyGeometry& geom, const DensityPair& pair) {
  if (!geom.grid->same_as(pair.grid())) {
    throw Error(ErrorKind::GridMismatch, "geometry and densities live on different grids");
  }
  const int dim = geom.dim();
  std::vector<double> out(geom.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (geom.rho[i] < 1e-12) throw Error(ErrorKind::OriginCollision, "|X| below 1e-12");
    const double rho = geom.rho[i];
    const double gu = pair.g_at()(geom.u[i]);
    out[i] = geom.h[i] - fgk(pair.f()[i], rho, dim == 2 ? rho : rho * rho, gu, geom.detb[i]);
  }
  return ScalarField(geom.grid, std::move(out));
}

ScalarField flow_rhs(const ScalarField& h, const DensityPair& pair) {
  return flow_rhs(derive_geometry(h), pair);
}

FlowModel::FlowModel(const DensityPair& pair, bool polar_filter)
    : pair_(&pair),
      grid_(pair.grid_ptr()),
      op_(grid_),
      f_(pair.f().values().begin(), pair.f().values().end()),
      g_constant_(pair.g_at().is_constant()),
      g_value_(pair.g_at().constant_value()) {
  const auto& grid = *grid_;
  symbol_.resize(grid.size());
  if (grid.dim() == 2) {
    std::fill(symbol_.begin(), symbol_.end(),
              DerivativeOperator::kSecondDerivativeSymbolMax / (grid.d_phi() * grid.d_phi()));
    return;
  }
  if (polar_filter) {
    filter_ = std::make_unique<PolarFilter>(grid);
    if (filter_->filtered_rows() == 0) filter_.reset();
  }
  const double meridional =
      DerivativeOperator::kSecondDerivativeSymbolMax / (grid.d_theta() * grid.d_theta());
  for (int j = 0; j < grid.n_theta(); ++j) {
    const double s = grid.sin_theta(j);
    const double azimuthal =
        filter_ ? filter_->azimuthal_stiffness(j)
                : DerivativeOperator::kSecondDerivativeSymbolMax /
                      (grid.d_phi() * grid.d_phi() * s * s);
    std::fill_n(symbol_.begin() + static_cast<std::ptrdiff_t>(j) * grid.n_phi(), grid.n_phi(),
                meridional + azimuthal);
  }
}

double FlowModel::g_at(const Vec3& u) const { return g_constant_ ? g_value_ : pair_->g_at()(u); }

void FlowModel::filter(std::span<double> tendency) {
  if (filter_) filter_->apply(tendency);
}

bool FlowModel::rhs(std::span<const double> h, std::span<double> out) {
  op_.apply(h, d_);
  const auto& grid = *grid_;
  const std::size_t n = h.size();
  if (grid.dim() == 2) {
    const auto nodes = grid.nodes();
    for (std::size_t i = 0; i < n; ++i) {
      const double hi = h[i];
      const double b = d_.h11[i] + hi;
      if (!(hi > 0.0) || !(b > 0.0)) return false;
      const double g1 = d_.g1[i];
      const double r2 = hi * hi + g1 * g1;
      if (!(r2 > kOriginFloorSq)) return false;
      const double rho = std::sqrt(r2);
      double gu = g_value_;
      if (!g_constant_) {
        const Vec3& x = nodes[i];
        gu = pair_->g_at().at_angle(std::atan2(hi * x.y + g1 * x.x, hi * x.x - g1 * x.y));
      }
      out[i] = hi - fgk(f_[i], rho, rho, gu, b);
    }
    return true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = h[i];
    const double b11 = d_.h11[i] + hi;
    const double b12 = d_.h12[i];
    const double b22 = d_.h22[i] + hi;
    const double det = b11 * b22 - b12 * b12;
    if (!(hi > 0.0) || !(b11 > 0.0) || !(det > 0.0)) return false;
    const double g1 = d_.g1[i];
    const double g2 = d_.g2[i];
    const double r2 = hi * hi + g1 * g1 + g2 * g2;
    if (!(r2 > kOriginFloorSq)) return false;
    const double rho = std::sqrt(r2);
    double gu = g_value_;
    if (!g_constant_) {
      const Vec3 X = hi * grid.node(i) + g1 * grid.e1(i) + g2 * grid.e2(i);
      gu = pair_->g_at()(X * (1.0 / rho));
    }
    out[i] = hi - fgk(f_[i], rho, r2, gu, det);
  }
  return true;
}

FlowMeasures FlowModel::measure(std::span<const double> h) {
  op_.apply(h, d_);
  const auto& grid = *grid_;
  const int dim = grid.dim();
  constexpr double inf = std::numeric_limits<double>::infinity();
  FlowMeasures m;
  BoundMonitors& bm = m.bounds;
  bm.h_min = bm.rho_min = bm.kappa_min = m.min_radius = inf;
  bm.h_max = bm.rho_max = bm.gradh_max = bm.K_max = -inf;
  CompensatedSum J;
  CompensatedSum V;
  CompensatedSum L2;
  CompensatedSum D;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double hi = h[i];
    if (!(hi > 0.0)) {
      throw Error(ErrorKind::NonPositiveSupport,
                  "support value " + format_double(hi) + " at node " + std::to_string(i));
    }
    Sym2 b{d_.h11[i] + hi, 0.0, 0.0};
    double g2 = 0.0;
    Vec3 X = hi * grid.node(i) + d_.g1[i] * grid.e1(i);
    if (dim == 3) {
      b.a12 = d_.h12[i];
      b.a22 = d_.h22[i] + hi;
      g2 = d_.g2[i];
      X = X + g2 * grid.e2(i);
    }
    const double lo = min_radius(b, dim);
    const double hi_r = max_radius(b, dim);
    if (!(lo > 0.0)) {
      throw Error(ErrorKind::ConvexityViolation, "smallest principal radius " + format_double(lo) +
                                                     " at node " + std::to_string(i));
    }
    const double det = determinant(b, dim);
    const double grad2 = d_.g1[i] * d_.g1[i] + g2 * g2;
    const double r2 = hi * hi + grad2;
    if (!(r2 > kOriginFloorSq)) {
      throw Error(ErrorKind::OriginCollision,
                  "boundary point at node " + std::to_string(i) + " touches the origin");
    }
    const double rho = std::sqrt(r2);
    const double rho_rest = dim == 2 ? rho : r2;
    const double gu = g_at(X * (1.0 / rho));
    const double jac = (hi / rho) * (det / rho_rest);
    const double q = gu * jac;
    const double R = q - f_[i];
    const double w = grid.weight(i);
    const double log_rho = std::log(rho);
    J.add(w * (f_[i] * std::log(hi) - q * log_rho));
    V.add(w * q * log_rho);
    L2.add(w * R * R);
    D.add(w * R * R / q);
    m.residual_sup = std::max(m.residual_sup, std::fabs(R));
    m.min_radius = std::min(m.min_radius, lo);
    const double c = fgk(f_[i], rho, rho_rest, gu, det) / lo;
    m.stiffness = std::max(m.stiffness, c * symbol_[i]);
    bm.h_min = std::min(bm.h_min, hi);
    bm.h_max = std::max(bm.h_max, hi);
    bm.rho_min = std::min(bm.rho_min, rho);
    bm.rho_max = std::max(bm.rho_max, rho);
    bm.gradh_max = std::max(bm.gradh_max, std::sqrt(grad2));
    bm.K_max = std::max(bm.K_max, 1.0 / det);
    bm.kappa_min = std::min(bm.kappa_min, 1.0 / hi_r);
  }
  m.J = J.value();
  m.Vg = V.value();
  m.residual_l2 = std::sqrt(L2.value());
  m.dissipation = D.value();
  return m;
}

void StepperSettings::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::Config, std::string(key) + " must be positive");
    }
  };
  positive(dt_initial, "dt_initial");
  positive(dt_min, "dt_min");
  positive(dt_growth_bound, "dt_growth_bound");
  positive(dt_safety, "dt_safety");
  positive(step_tol, "step_tol");
  positive(convexity_floor, "convexity_floor");
  if (!(j_allowance >= 0.0)) throw Error(ErrorKind::Config, "j_allowance must be non-negative");
  if (!(dt_min < dt_initial)) {
    throw Error(ErrorKind::Config, "dt_min (" + format_double(dt_min) +
                                       ") must be smaller than dt_initial (" +
                                       format_double(dt_initial) + ")");
  }
  if (dt_growth_bound < 1.0) throw Error(ErrorKind::Config, "dt_growth_bound must be >= 1");
  if (dt_safety > 1.0) throw Error(ErrorKind::Config, "dt_safety must not exceed 1");
}

TraceRow trace_row(const FlowState& state, double dt) {
  return {state.step, state.t, dt, state.measures, state.rejections};
}

std::string trace_header() {
  return "step,t,dt,J,Vg,residual_sup,residual_l2,h_min,h_max,rho_min,rho_max,gradh_max,K_max,"
         "kappa_min,rejections";
}

std::string trace_line(const TraceRow& row) {
  const auto& m = row.m;
  const auto& b = m.bounds;
  std::string s = std::to_string(row.step);
  for (double v : {row.t, row.dt, m.J, m.Vg, m.residual_sup, m.residual_l2, b.h_min, b.h_max,
                   b.rho_min, b.rho_max, b.gradh_max, b.K_max, b.kappa_min}) {
    s += ',';
    s += format_double(v);
  }
  s += ',';
  s += std::to_string(row.rejections);
  return s;
}

FlowEngine::FlowEngine(const DensityPair& pair, StepperSettings settings)
    : pair_(&pair), settings_(settings), model_(pair, settings.polar_filter) {
  settings_.validate();
  const std::size_t n = pair.grid().size();
  for (auto* v : {&k0_, &k1_, &k2_, &k3_, &k4_, &tmp_, &mid_, &full_, &half_}) v->resize(n);
}

FlowState FlowEngine::initial_state(const ScalarField& h0) {
  h0.require_same_grid(pair_->grid(), "initial body");
  FlowState s;
  s.h.assign(h0.values().begin(), h0.values().end());
  s.measures = model_.measure(s.h);
  return s;
}

double FlowEngine::stable_dt(const FlowMeasures& m) const {
  if (!(m.stiffness > 0.0)) return std::numeric_limits<double>::infinity();
  // Step doubling keeps the two half steps, each of which must be stable.
  return 2.0 * settings_.dt_safety * kRk4RealStability / m.stiffness;
}

bool FlowEngine::rk4(std::span<const double> y, double dt, std::span<double> out,
                     bool reuse_k0) {
  const std::size_t n = y.size();
  if (reuse_k0) {
    std::copy(k0_.begin(), k0_.end(), k1_.begin());
  } else {
    if (!model_.rhs(y, k1_)) return false;
    model_.filter(k1_);
  }
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
  if (!model_.rhs(tmp_, k2_)) return false;
  model_.filter(k2_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
  if (!model_.rhs(tmp_, k3_)) return false;
  model_.filter(k3_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
  if (!model_.rhs(tmp_, k4_)) return false;
  model_.filter(k4_);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = y[i] + dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }
  return true;
}

StepAttempt FlowEngine::try_step(const FlowState& state, double dt, FlowState& next) {
  StepAttempt attempt;
  const std::span<const double> y = state.h;
  std::span<const double> candidate;
  const double h_max = state.measures.bounds.h_max;
  if (settings_.fixed_dt) {
    if (!rk4(y, dt, full_)) {
      attempt.reason = "stage left the convex cone";
      return attempt;
    }
    candidate = full_;
  } else {
    // The full step and the first half step share their first stage.
    bool ok = model_.rhs(y, k0_);
    if (ok) model_.filter(k0_);
    ok = ok && rk4(y, dt, full_, true) && rk4(y, 0.5 * dt, mid_, true) &&
         rk4(mid_, 0.5 * dt, half_);
    if (!ok) {
      attempt.reason = "stage left the convex cone";
      return attempt;
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      diff = std::max(diff, std::fabs(half_[i] - full_[i]));
    }
    attempt.error = diff / 15.0 / (settings_.step_tol * h_max);
    if (!(attempt.error <= 1.0)) {
      attempt.reason = "step-doubling error " + format_double(attempt.error);
      return attempt;
    }
    candidate = half_;
  }

  FlowMeasures m;
  try {
    m = model_.measure(candidate);
  } catch (const Error& e) {
    attempt.reason = e.what();
    return attempt;
  }
  if (m.min_radius < settings_.convexity_floor * m.bounds.h_max) {
    attempt.reason = "convexity floor: smallest principal radius " + format_double(m.min_radius);
    return attempt;
  }
  const double allowance = 10.0 * dt * dt + settings_.j_allowance;
  if (m.J > state.measures.J + allowance) {
    attempt.reason = "J increased by " + format_double(m.J - state.measures.J);
    return attempt;
  }

  next.t = state.t + dt;
  next.h.assign(candidate.begin(), candidate.end());
  next.step = state.step + 1;
  next.rejections = state.rejections;
  next.measures = m;
  if (settings_.fixed_dt) {
    next.dt_next = settings_.dt_initial;
  } else {
    const double growth =
        attempt.error > 0.0
            ? std::clamp(settings_.dt_safety * std::pow(attempt.error, -0.2), 0.2, 2.0)
            : 2.0;
    next.dt_next = std::min({dt * growth, settings_.dt_initial * settings_.dt_growth_bound,
                             stable_dt(m)});
  }
  attempt.accepted = true;
  return attempt;
}

double FlowEngine::advance(FlowState& state) {
  double dt = settings_.dt_initial;
  if (!settings_.fixed_dt) {
    if (state.dt_next > 0.0) dt = state.dt_next;
    dt = std::min(dt, stable_dt(state.measures));
  }
  FlowState next;
  for (;;) {
    const auto attempt = try_step(state, dt, next);
    if (attempt.accepted) {
      state = std::move(next);
      return dt;
    }
    ++state.rejections;
    if (settings_.fixed_dt) {
      throw Error(ErrorKind::StepFailure, "fixed step dt = " + format_double(dt) +
                                              " rejected at t = " + format_double(state.t) +
                                              ": " + attempt.reason);
    }
    dt *= 0.5;
    if (dt < settings_.dt_min) {
      throw Error(ErrorKind::StepFailure, "dt fell below dt_min at t = " + format_double(state.t) +
                                              ": " + attempt.reason);
    }
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "Converged";
    case Termination::Budget:
      return "Budget";
    case Termination::StepFailure:
      return "StepFailure";
  }
  return "Unknown";
}

namespace {

RunResult integrate(FlowEngine& engine, FlowState state, const RunSettings& settings,
                    const RunCallbacks& callbacks, RunResult result) {
  for (;;) {
    if (state.measures.residual_sup <= settings.residual_sup_tol) {
      result.reason = Termination::Converged;
      break;
    }
    if (state.t >= settings.max_time || state.step >= settings.max_steps) {
      result.reason = Termination::Budget;
      break;
    }
    double dt = 0.0;
    try {
      dt = engine.advance(state);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::StepFailure) throw;
      result.reason = Termination::StepFailure;
      result.message = e.what();
      result.failure_row = trace_row(state, 0.0);
      break;
    }
    const auto row = trace_row(state, dt);
    result.trace.push_back(row);
    if (callbacks.on_row) callbacks.on_row(row);
    if (settings.snapshot_interval > 0 && state.step % settings.snapshot_interval == 0 &&
        callbacks.on_checkpoint) {
      callbacks.on_checkpoint(state);
    }
  }
  result.final_state = std::move(state);
  return result;
}

void require_balance(const DensityPair& pair, const RunSettings& settings) {
  if (!pair.balanced(settings.mass_balance_tol)) {
    throw Error(ErrorKind::Unnormalized,
                "density masses differ: mass_f - mass_g = " + format_double(pair.mass_gap()) +
                    " exceeds mass_balance_tol * mass_f");
  }
}

}  // namespace

RunResult run(const DensityPair& pair, const ScalarField& h0, const RunSettings& settings,
              const RunCallbacks& callbacks) {
  require_balance(pair, settings);
  FlowEngine engine(pair, settings.stepping);
  auto state = engine.initial_state(h0);
  RunResult result;
  const auto row = trace_row(state, 0.0);
  result.trace.push_back(row);
  if (callbacks.on_row) callbacks.on_row(row);
  return integrate(engine, std::move(state), settings, callbacks, std::move(result));
}

RunResult resume(const DensityPair& pair, FlowState state, const RunSettings& settings,
                 const RunCallbacks& callbacks) {
  require_balance(pair, settings);
  FlowEngine engine(pair, settings.stepping);
  if (state.h.size() != pair.grid().size()) {
    throw Error(ErrorKind::GridMismatch, "checkpoint does not match the density grid");
  }
  state.measures = engine.model().measure(state.h);
  return integrate(engine, std::move(state), settings, callbacks, RunResult{});
}

void write_checkpoint(const std::filesystem::path& path, const SphereGrid& grid,
                      const FlowState& state) {
  auto g = SphereGrid::build(grid.dim(), grid.resolution());
  const ScalarField h(g, state.h);
  write_field(path, h,
              {"checkpoint", "t=" + format_double(state.t),
               "dt_next=" + format_double(state.dt_next), "step=" + std::to_string(state.step),
               "rejections=" + std::to_string(state.rejections)});
}

FlowState read_checkpoint(const std::filesystem::path& path, const GridPtr& grid) {
  auto file = read_field_file(path);
  file.field.require_same_grid(*grid, "checkpoint");
  FlowState state;
  state.h.assign(file.field.values().begin(), file.field.values().end());
  bool have_t = false;
  for (const auto& c : file.comments) {
    const auto eq = c.find('=');
    if (eq == std::string::npos) continue;
    const auto key = c.substr(0, eq);
    const auto value = c.substr(eq + 1);
    try {
      if (key == "t") {
        state.t = parse_double(value);
        have_t = true;
      } else if (key == "dt_next") {
        state.dt_next = parse_double(value);
      } else if (key == "step") {
        state.step = std::stol(value);
      } else if (key == "rejections") {
        state.rejections = std::stol(value);
      }
    } catch (const std::exception&) {
      throw Error(ErrorKind::Io, "bad checkpoint entry '" + c + "' in " + path.string());
    }
  }
  if (!have_t) throw Error(ErrorKind::Io, "checkpoint " + path.string() + " has no t= line");
  return state;
}

}  // namespace gaussflow
