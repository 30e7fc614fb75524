#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gaussflow/sphere_grid.hpp"

namespace gaussflow {

/// Per-node real values on a grid. Immutable once built; all values finite.
class ScalarField {
 public:
  ScalarField(GridPtr grid, std::vector<double> values);

  static ScalarField constant(GridPtr grid, double value);
  static ScalarField from_function(GridPtr grid, const std::function<double(const Vec3&)>& fn);

  const SphereGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double min() const;
  double max() const;

  /// Same values multiplied by `s`.
  ScalarField scaled(double s) const;

  /// Throws GridMismatch unless `other` lives on an equivalent grid.
  void require_same_grid(const SphereGrid& other, const char* what) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

}  // namespace gaussflow
