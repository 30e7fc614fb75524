#pragma once

#include <vector>

#include "gaussflow/scalar_field.hpp"
#include "gaussflow/stencils.hpp"

namespace gaussflow {

/// Pointwise geometry of the body with support function h, per node:
/// boundary point X = grad h + h x, radius rho = |X|, radial direction
/// u = X / rho, principal radii matrix b = Hess h + h I and Gauss curvature
/// K = 1 / det b.
struct BodyGeometry {
  GridPtr grid;
  std::vector<double> h;
  std::vector<Vec3> gradh;
  std::vector<Sym2> b;
  std::vector<double> detb;
  std::vector<double> K;
  std::vector<Vec3> X;
  std::vector<double> rho;
  std::vector<Vec3> u;
  std::vector<double> min_radius;  // smallest eigenvalue of b
  std::vector<double> max_radius;  // largest eigenvalue of b

  int dim() const { return grid->dim(); }
  std::size_t size() const { return h.size(); }
};

/// Throws NonPositiveSupport, ConvexityViolation or OriginCollision.
BodyGeometry derive_geometry(const ScalarField& h);

/// Eigenvalues of b in the node frame (b is 1x1 on the circle).
double min_radius(const Sym2& b, int dim);
double max_radius(const Sym2& b, int dim);
double determinant(const Sym2& b, int dim);

/// Minimum over nodes of the smallest eigenvalue of Hess h + h I.
double convexity_check(const ScalarField& h);

/// rho(u) = min over nodes x with <x, u> > 0 of h(x) / <x, u>.
double radial_at(const ScalarField& h, const Vec3& u);
ScalarField radial_from_support(const ScalarField& h, const GridPtr& directions);
ScalarField radial_from_support(const ScalarField& h);

/// Support function of the polar body on `directions`: 1 / rho.
ScalarField polar_support(const ScalarField& h, const GridPtr& directions);
ScalarField polar_support(const ScalarField& h);

struct BoundMonitors {
  double h_min = 0.0;
  double h_max = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double gradh_max = 0.0;
  double K_max = 0.0;
  double kappa_min = 0.0;  // min over nodes of 1 / (largest principal radius)
};

BoundMonitors diagnostics(const BodyGeometry& geom);

}  // namespace gaussflow
