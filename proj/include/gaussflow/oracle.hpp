#pragma once

#include <functional>
#include <string>

#include "gaussflow/densities.hpp"
#include "gaussflow/geometry.hpp"
#include "gaussflow/presets.hpp"

namespace gaussflow {

/// f_i = g(u_i) rho_i^-n h_i det b_i with the production stencils, so that
/// (h, f, g) is an exact discrete fixed point.
ScalarField manufacture_f(const ScalarField& h_target, const ScalarField& g);

/// Pointwise geometry of a preset from Cartesian differences of its
/// homogeneous extension H, Richardson-extrapolated between steps delta and
/// delta / 2. Independent of the production stencils.
struct OracleGeometry {
  double h;
  Vec3 X;      // grad H
  Sym2 b;      // tangential block of the Cartesian Hessian in the node frame
  double detb;
};

OracleGeometry oracle_geometry(const BodyPreset& body, const SphereGrid& grid, std::size_t i,
                               double delta);

/// f from the oracle geometry with delta = a quarter of the grid spacing.
ScalarField oracle_f(const BodyPreset& body, const ScalarField& g);

enum class ManufactureRoute { Stencil, Oracle };

struct ManufacturedProblem {
  ScalarField h_target;
  ScalarField g;
  ScalarField f;
  double target_Vg;
  /// Oracle route: factor applied to the oracle f so that its quadrature
  /// mass equals sum_i w_i g(u_i) J_i at the target, the discrete
  /// compatibility condition of the flow's fixed point. 1 for the stencil route.
  double compatibility_scale = 1.0;
};

ManufacturedProblem manufacture(const BodyPreset& body, const ScalarField& g,
                                ManufactureRoute route);

struct RecoveryError {
  double sup_err;
  double l2_err;
  double scale;  // factor applied to h_final before comparison
};

/// Rescales h_final so that its V_g equals the target's (the discrete
/// counterpart of the factor exp((V_g(target) - V_g(final)) / mass_g)) and compares.
RecoveryError recovery_error(const ScalarField& h_final, const ScalarField& h_target,
                             const DensityPair& pair);

/// Multiplies h by the factor that makes its V_g equal `target_vg`. Exact at
/// the discrete level because the change-of-variables density is 0-homogeneous.
ScalarField match_log_volume(const ScalarField& h, const DensityPair& pair, double target_vg);

struct ChangeOfVariablesCheck {
  double lhs;  // sum_i w_i phi(u_i) h_i / (K_i rho_i^n)
  double rhs;  // quadrature of phi on the direction grid
  double gap;
};

ChangeOfVariablesCheck verify_change_of_variables(const ScalarField& h,
                                                  const std::function<double(const Vec3&)>& phi,
                                                  const GridPtr& directions);

}  // namespace gaussflow
