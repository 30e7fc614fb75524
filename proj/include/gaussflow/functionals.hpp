#pragma once

#include <optional>
#include <vector>

#include "gaussflow/densities.hpp"
#include "gaussflow/geometry.hpp"
#include "gaussflow/spherical_sets.hpp"

namespace gaussflow {

/// Change-of-variables density h / (K rho^n) = h det b / rho^n at node i.
double jacobian(const BodyGeometry& geom, std::size_t i);

/// J = sum_i w_i [f_i log h_i - g(u_i) log rho_i h_i / (K_i rho_i^n)].
double functional_J(const BodyGeometry& geom, const DensityPair& pair);

/// V_g = sum_i w_i g(u_i) log rho_i h_i / (K_i rho_i^n).
double log_volume(const BodyGeometry& geom, const DensityPair& pair);

/// V_g evaluated directly on a direction grid with rho from the
/// support-plane minimum and g interpolated onto the directions.
double log_volume_direct(const ScalarField& h, const DensityPair& pair, const GridPtr& directions);
double functional_J_direct(const ScalarField& h, const DensityPair& pair,
                           const GridPtr& directions);

/// Monge-Ampere residual g(u) rho^-n h det b - f.
ScalarField residual(const BodyGeometry& geom, const DensityPair& pair);

/// D = int (g h - f K rho^n)^2 / (g h K rho^n) dx; along the flow dJ/dt = -D.
double dissipation(const BodyGeometry& geom, const DensityPair& pair);

struct PushforwardRow {
  std::optional<SphericalConvexSet> set;  // empty for the whole sphere
  double lhs;  // int_A f dx
  double rhs;  // int_{u(A)} g du
  double gap;
};

/// For each test set A of normals, compares the f-mass of A with the g-mass
/// of its radial image u(A). The image is traced by `samples` points of A.
/// On the circle the image arc covers grid cells fractionally; on S^2 the
/// nearest direction node of each sample is included.
std::vector<PushforwardRow> pushforward_check(const BodyGeometry& geom, const DensityPair& pair,
                                              const std::vector<SphericalConvexSet>& sets,
                                              int samples = 10000);

/// Whole-sphere case: lhs = mass_f, rhs = mass_g.
PushforwardRow pushforward_total(const DensityPair& pair);

}  // namespace gaussflow
