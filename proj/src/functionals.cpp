#include "gaussflow/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaussflow/aleksandrov.hpp"
#include "gaussflow/error.hpp"
#include "gaussflow/interpolation.hpp"
#include "gaussflow/summation.hpp"

namespace gaussflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_pair_grid(const BodyGeometry& geom, const DensityPair& pair) {
  if (!geom.grid->same_as(pair.grid())) {
    throw Error(ErrorKind::GridMismatch, "geometry and densities live on different grids");
  }
}

double rho_power(double rho, int dim) { return dim == 2 ? rho * rho : rho * rho * rho; }

void require_positive(const BodyGeometry& geom) {
  for (std::size_t i = 0; i < geom.size(); ++i) {
    if (!(geom.h[i] > 0.0) || !(geom.rho[i] > 0.0)) {
      throw Error(ErrorKind::NonPositiveSupport,
                  "log of non-positive h or rho at node " + std::to_string(i));
    }
  }
}

double unwrap_near(double angle, double reference) {
  return angle - kTwoPi * std::round((angle - reference) / kTwoPi);
}

PushforwardRow pushforward_arc(const BodyGeometry& geom, const DensityPair& pair,
                               const SphericalConvexSet& set, int samples) {
  const auto& grid = *geom.grid;
  const int n = static_cast<int>(grid.size());
  const double d = grid.d_phi();
  const PeriodicCubic f(pair.f().values(), d);
  const double lhs = set.angle() > 0.0
                         ? f.integral(set.center_angle() - set.angle(),
                                      set.center_angle() + set.angle())
                         : 0.0;

  std::vector<double> hprime(n);
  for (int i = 0; i < n; ++i) hprime[i] = dot(geom.gradh[i], grid.e1(i));
  const PeriodicCubic h(geom.h, d);
  const PeriodicCubic dh(hprime, d);
  const int count = std::max(samples, 2);
  double lo = 0.0;
  double hi = 0.0;
  double reference = 0.0;
  for (int s = 0; s < count; ++s) {
    const double a = set.center_angle() - set.angle() + 2.0 * set.angle() * s / (count - 1);
    const double c = std::cos(a);
    const double sn = std::sin(a);
    const double hv = h(a);
    const double dv = dh(a);
    double ua = std::atan2(hv * sn + dv * c, hv * c - dv * sn);
    if (s == 0) {
      reference = unwrap_near(ua, a);
      lo = hi = reference;
      continue;
    }
    ua = unwrap_near(ua, reference);
    lo = std::min(lo, ua);
    hi = std::max(hi, ua);
  }
  const auto g = pair.g().values();
  CompensatedSum acc;
  const int k_lo = static_cast<int>(std::floor(lo / d - 0.5)) - 1;
  const int k_hi = static_cast<int>(std::ceil(hi / d + 0.5)) + 1;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double left = (k - 0.5) * d;
    const double right = (k + 0.5) * d;
    const double overlap = std::min(hi, right) - std::max(lo, left);
    if (overlap > 0.0) acc.add(g[((k % n) + n) % n] * overlap);
  }
  const double rhs = acc.value();
  return {set, lhs, rhs, lhs - rhs};
}

PushforwardRow pushforward_cap(const BodyGeometry& geom, const DensityPair& pair,
                               const SphericalConvexSet& set, int samples) {
  const auto& grid = *geom.grid;
  const DirectionInterpolator f(pair.f());
  const double lhs = cap_integral(f, set.center(), set.angle(), 16, 64);
  std::vector<double> xs(geom.size());
  std::vector<double> ys(geom.size());
  std::vector<double> zs(geom.size());
  for (std::size_t i = 0; i < geom.size(); ++i) {
    xs[i] = geom.X[i].x;
    ys[i] = geom.X[i].y;
    zs[i] = geom.X[i].z;
  }
  const DirectionInterpolator ix(ScalarField(geom.grid, std::move(xs)));
  const DirectionInterpolator iy(ScalarField(geom.grid, std::move(ys)));
  const DirectionInterpolator iz(ScalarField(geom.grid, std::move(zs)));
  std::vector<char> hit(grid.size(), 0);
  for (const auto& p : set.sample(samples)) {
    const Vec3 u = normalized(Vec3{ix(p), iy(p), iz(p)});
    hit[grid.nearest_node(u)] = 1;
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (hit[i]) acc.add(grid.weight(i) * pair.g()[i]);
  }
  const double rhs = acc.value();
  return {set, lhs, rhs, lhs - rhs};
}

}  // namespace

double jacobian(const BodyGeometry& geom, std::size_t i) {
  const double rho = geom.rho[i];
  const double rest = geom.dim() == 2 ? rho : rho * rho;
  return (geom.h[i] / rho) * (geom.detb[i] / rest);
}

double functional_J(const BodyGeometry& geom, const DensityPair& pair) {
  require_pair_grid(geom, pair);
  require_positive(geom);
  const auto& grid = *geom.grid;
  CompensatedSum acc;
  for (std::size_t i = 0; i < geom.size(); ++i) {
    const double gu = pair.g_at()(geom.u[i]);
    acc.add(grid.weight(i) *
            (pair.f()[i] * std::log(geom.h[i]) - gu * std::log(geom.rho[i]) * jacobian(geom, i)));
  }
  return acc.value();
}

double log_volume(const BodyGeometry& geom, const DensityPair& pair) {
  require_pair_grid(geom, pair);
  require_positive(geom);
  const auto& grid = *geom.grid;
  CompensatedSum acc;
  for (std::size_t i = 0; i < geom.size(); ++i) {
    acc.add(grid.weight(i) * pair.g_at()(geom.u[i]) * std::log(geom.rho[i]) * jacobian(geom, i));
  }
  return acc.value();
}

double log_volume_direct(const ScalarField& h, const DensityPair& pair,
                         const GridPtr& directions) {
  const auto rho = radial_from_support(h, directions);
  CompensatedSum acc;
  for (std::size_t k = 0; k < directions->size(); ++k) {
    acc.add(directions->weight(k) * pair.g_at()(directions->node(k)) * std::log(rho[k]));
  }
  return acc.value();
}

double functional_J_direct(const ScalarField& h, const DensityPair& pair,
                           const GridPtr& directions) {
  h.require_same_grid(pair.grid(), "functional J");
  CompensatedSum acc;
  for (std::size_t i = 0; i < h.size(); ++i) {
    acc.add(h.grid().weight(i) * pair.f()[i] * std::log(h[i]));
  }
  return acc.value() - log_volume_direct(h, pair, directions);
}

ScalarField residual(const BodyGeometry& geom, const DensityPair& pair) {
  require_pair_grid(geom, pair);
  std::vector<double> r(geom.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = pair.g_at()(geom.u[i]) * jacobian(geom, i) - pair.f()[i];
  }
  return ScalarField(geom.grid, std::move(r));
}

double dissipation(const BodyGeometry& geom, const DensityPair& pair) {
  require_pair_grid(geom, pair);
  const auto& grid = *geom.grid;
  CompensatedSum acc;
  for (std::size_t i = 0; i < geom.size(); ++i) {
    const double gh = pair.g_at()(geom.u[i]) * geom.h[i];
    const double krn = geom.K[i] * rho_power(geom.rho[i], geom.dim());
    const double diff = gh - pair.f()[i] * krn;
    acc.add(grid.weight(i) * diff * diff / (gh * krn));
  }
  return acc.value();
}

std::vector<PushforwardRow> pushforward_check(const BodyGeometry& geom, const DensityPair& pair,
                                              const std::vector<SphericalConvexSet>& sets,
                                              int samples) {
  require_pair_grid(geom, pair);
  std::vector<PushforwardRow> rows;
  rows.reserve(sets.size());
  for (const auto& set : sets) {
    if (set.dim() != geom.dim()) {
      throw Error(ErrorKind::InvalidArgument, "test set dimension differs from the grid");
    }
    rows.push_back(geom.dim() == 2 ? pushforward_arc(geom, pair, set, samples)
                                   : pushforward_cap(geom, pair, set, samples));
  }
  return rows;
}

PushforwardRow pushforward_total(const DensityPair& pair) {
  return {std::nullopt, pair.mass_f(), pair.mass_g(), pair.mass_f() - pair.mass_g()};
}

}  // namespace gaussflow
