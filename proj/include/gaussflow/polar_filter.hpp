#pragma once

#include <memory>
#include <span>
#include <vector>

#include "gaussflow/sphere_grid.hpp"

namespace gaussflow {

/// Damps high azimuthal wavenumbers on rows near the poles of a
/// latitude-longitude grid. Mode m on row j is scaled by
///   min(1, sigma_theta_max sin^2(theta_j) / sigma_phi(m))
/// where sigma are the symbols of the five-point second difference, so that
/// the azimuthal stiffness of every row never exceeds the meridional one.
/// All factors are positive and the zero mode is untouched.
class PolarFilter {
 public:
  explicit PolarFilter(const SphereGrid& grid);
  ~PolarFilter();
  PolarFilter(const PolarFilter&) = delete;
  PolarFilter& operator=(const PolarFilter&) = delete;

  /// Filters `values` (one per node, row-major) in place.
  void apply(std::span<double> values);

  bool row_filtered(int j) const { return !factors_[j].empty(); }
  std::size_t filtered_rows() const;

  /// Largest azimuthal second-difference symbol that survives on row j,
  /// including the 1/sin^2 metric factor.
  double azimuthal_stiffness(int j) const { return stiffness_[j]; }

 private:
  struct Plans;

  int n_theta_;
  int n_phi_;
  std::vector<std::vector<double>> factors_;
  std::vector<double> stiffness_;
  std::unique_ptr<Plans> plans_;
};

/// Symbol of minus the five-point second difference at wavenumber m.
double second_difference_symbol(int m, double spacing);

}  // namespace gaussflow
