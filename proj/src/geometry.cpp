#include "gaussflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaussflow/error.hpp"

namespace gaussflow {

namespace {

constexpr double kOriginFloor = 1e-12;
constexpr double kDirectionFloor = 1e-9;

}  // namespace

double min_radius(const Sym2& b, int dim) { return dim == 2 ? b.a11 : min_eigenvalue(b); }

double max_radius(const Sym2& b, int dim) { return dim == 2 ? b.a11 : max_eigenvalue(b); }

double determinant(const Sym2& b, int dim) {
  return dim == 2 ? b.a11 : b.a11 * b.a22 - b.a12 * b.a12;
}

BodyGeometry derive_geometry(const ScalarField& h) {
  const auto& grid = h.grid();
  const int dim = grid.dim();
  const std::size_t n = h.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(h[i] > 0.0)) {
      throw Error(ErrorKind::NonPositiveSupport,
                  "support value " + std::to_string(h[i]) + " at node " + std::to_string(i));
    }
  }
  DerivativeOperator op(h.grid_ptr());
  LocalDerivatives d;
  op.apply(h.values(), d);

  BodyGeometry geom;
  geom.grid = h.grid_ptr();
  geom.h.assign(h.values().begin(), h.values().end());
  geom.gradh.resize(n);
  geom.b.resize(n);
  geom.detb.resize(n);
  geom.K.resize(n);
  geom.X.resize(n);
  geom.rho.resize(n);
  geom.u.resize(n);
  geom.min_radius.resize(n);
  geom.max_radius.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = h[i];
    Vec3 grad = d.g1[i] * grid.e1(i);
    Sym2 b{d.h11[i] + hi, 0.0, 0.0};
    if (dim == 3) {
      grad = grad + d.g2[i] * grid.e2(i);
      b.a12 = d.h12[i];
      b.a22 = d.h22[i] + hi;
    }
    geom.gradh[i] = grad;
    geom.b[i] = b;
    geom.min_radius[i] = min_radius(b, dim);
    geom.max_radius[i] = max_radius(b, dim);
    if (!(geom.min_radius[i] > 0.0)) {
      throw Error(ErrorKind::ConvexityViolation,
                  "smallest principal radius " + std::to_string(geom.min_radius[i]) +
                      " at node " + std::to_string(i));
    }
    geom.detb[i] = determinant(b, dim);
    geom.K[i] = 1.0 / geom.detb[i];
    geom.X[i] = grad + hi * grid.node(i);
    // x is orthogonal to the frame, so |X|^2 = h^2 + |grad h|^2 without
    // the rounding of the node's own norm.
    geom.rho[i] = std::sqrt(hi * hi + dot(grad, grad));
    if (geom.rho[i] < kOriginFloor) {
      throw Error(ErrorKind::OriginCollision, "boundary point at node " + std::to_string(i) +
                                                  " touches the origin");
    }
    geom.u[i] = geom.X[i] * (1.0 / geom.rho[i]);
  }
  return geom;
}

double convexity_check(const ScalarField& h) {
  DerivativeOperator op(h.grid_ptr());
  LocalDerivatives d;
  op.apply(h.values(), d);
  const int dim = h.grid().dim();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.size(); ++i) {
    Sym2 b{d.h11[i] + h[i], 0.0, 0.0};
    if (dim == 3) {
      b.a12 = d.h12[i];
      b.a22 = d.h22[i] + h[i];
    }
    worst = std::min(worst, min_radius(b, dim));
  }
  return worst;
}

double radial_at(const ScalarField& h, const Vec3& u) {
  const auto nodes = h.grid().nodes();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double c = dot(nodes[i], u);
    if (c > kDirectionFloor) best = std::min(best, h[i] / c);
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorKind::DegenerateDirection, "no grid normal faces the requested direction");
  }
  return best;
}

ScalarField radial_from_support(const ScalarField& h, const GridPtr& directions) {
  if (directions->dim() != h.grid().dim()) {
    throw Error(ErrorKind::GridMismatch, "direction grid dimension differs from support grid");
  }
  std::vector<double> rho(directions->size());
  for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = radial_at(h, directions->node(k));
  return ScalarField(directions, std::move(rho));
}

ScalarField radial_from_support(const ScalarField& h) {
  return radial_from_support(h, h.grid_ptr());
}

ScalarField polar_support(const ScalarField& h, const GridPtr& directions) {
  const auto rho = radial_from_support(h, directions);
  std::vector<double> inv(rho.size());
  for (std::size_t k = 0; k < inv.size(); ++k) inv[k] = 1.0 / rho[k];
  return ScalarField(directions, std::move(inv));
}

ScalarField polar_support(const ScalarField& h) { return polar_support(h, h.grid_ptr()); }

BoundMonitors diagnostics(const BodyGeometry& geom) {
  BoundMonitors m;
  m.h_min = m.rho_min = m.kappa_min = std::numeric_limits<double>::infinity();
  m.h_max = m.rho_max = m.gradh_max = m.K_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < geom.size(); ++i) {
    m.h_min = std::min(m.h_min, geom.h[i]);
    m.h_max = std::max(m.h_max, geom.h[i]);
    m.rho_min = std::min(m.rho_min, geom.rho[i]);
    m.rho_max = std::max(m.rho_max, geom.rho[i]);
    m.gradh_max = std::max(m.gradh_max, norm(geom.gradh[i]));
    m.K_max = std::max(m.K_max, geom.K[i]);
    m.kappa_min = std::min(m.kappa_min, 1.0 / geom.max_radius[i]);
  }
  return m;
}

}  // namespace gaussflow
