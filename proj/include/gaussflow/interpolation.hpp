#pragma once

#include <span>
#include <vector>

#include "gaussflow/scalar_field.hpp"

namespace gaussflow {

/// Evaluates a nodal field at arbitrary unit directions: periodic four-point
/// cubic on the circle, bilinear in (theta, phi) on S^2 with the same
/// cross-pole continuation as the derivative stencils.
class DirectionInterpolator {
 public:
  DirectionInterpolator() = default;
  explicit DirectionInterpolator(const ScalarField& field);

  double operator()(const Vec3& u) const;

  /// Circle only: value at polar angle `angle` (any real).
  double at_angle(double angle) const;

  bool is_constant() const { return constant_; }
  double constant_value() const { return values_.empty() ? 0.0 : values_[0]; }

 private:
  double bilinear(const Vec3& u) const;

  GridPtr grid_;
  std::vector<double> values_;
  bool constant_ = false;
};

/// Periodic cubic (four-point Lagrange) interpolant of circle data with
/// exact arc integrals.
class PeriodicCubic {
 public:
  PeriodicCubic(std::span<const double> values, double spacing);

  double operator()(double angle) const;
  double derivative(double angle) const;

  /// Integral of the interpolant over [a, b] (a <= b, any reals, b - a may
  /// exceed a full turn).
  double integral(double a, double b) const;

  double total() const { return total_; }

 private:
  double cumulative(double angle) const;
  double cell_partial(int cell, double s) const;

  std::vector<double> values_;
  std::vector<double> prefix_;
  double spacing_;
  double total_ = 0.0;
};

}  // namespace gaussflow
