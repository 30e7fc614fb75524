#pragma once

#include <span>
#include <vector>

#include "gaussflow/scalar_field.hpp"
#include "gaussflow/vec3.hpp"

namespace gaussflow {

/// Symmetric 2x2 matrix. On the circle only a11 is meaningful.
struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;
};

double min_eigenvalue(const Sym2& m);
double max_eigenvalue(const Sym2& m);

/// Frame components of the first and second covariant derivatives at every
/// node: g1, g2 are the gradient components along (e1, e2) and h11, h12, h22
/// the Hessian entries. For the circle only g1 and h11 are filled.
///
/// `pad` is scratch space for the ghost-extended copy of the input.
struct LocalDerivatives {
  std::vector<double> g1, g2, h11, h12, h22;
  std::vector<double> pad;
};

/// Fourth-order centered differences on the node lattice.
///
/// On S^2 the stencil runs through the pole along the great circle: a row
/// index r < 0 maps to row -1 - r and r >= n_theta to 2 n_theta - 1 - r, both
/// with the longitude shifted by half a turn. The extended function
/// h(theta, phi) is smooth in (theta, phi) across the pole, so no special
/// treatment is needed beyond the ghost rows.
class DerivativeOperator {
 public:
  static constexpr int kHalfWidth = 2;

  explicit DerivativeOperator(GridPtr grid);

  const SphereGrid& grid() const { return *grid_; }

  void apply(std::span<const double> h, LocalDerivatives& out) const;

  /// Largest magnitude of the discrete second-derivative symbol, per unit
  /// squared spacing (16/3 for the five-point stencil).
  static constexpr double kSecondDerivativeSymbolMax = 16.0 / 3.0;

 private:
  void apply_circle(std::span<const double> h, LocalDerivatives& out) const;
  void apply_sphere(std::span<const double> h, LocalDerivatives& out) const;

  GridPtr grid_;
  std::vector<double> cot_;
  std::vector<double> inv_sin_;
};

/// Covariant gradient as ambient tangent vectors g1 e1 + g2 e2.
std::vector<Vec3> gradient(const ScalarField& field);
std::vector<Vec3> gradient(const ScalarField& field, const SphereGrid& grid);

/// Covariant Hessian in each node's orthonormal frame.
std::vector<Sym2> hessian(const ScalarField& field);
std::vector<Sym2> hessian(const ScalarField& field, const SphereGrid& grid);

/// Quadrature sum of w_i v_i in node order with compensated summation.
double integrate(const ScalarField& field);
double integrate(const ScalarField& field, const SphereGrid& grid);

}  // namespace gaussflow
