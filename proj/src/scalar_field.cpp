#include "gaussflow/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaussflow/error.hpp"

namespace gaussflow {

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw Error(ErrorKind::InvalidArgument, "field without a grid");
  if (values_.size() != grid_->size()) {
    throw Error(ErrorKind::GridMismatch, "field has " + std::to_string(values_.size()) +
                                             " values but grid has " +
                                             std::to_string(grid_->size()) + " nodes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorKind::NonFinite, "field value at node " + std::to_string(i) + " is not finite");
    }
  }
}

ScalarField ScalarField::constant(GridPtr grid, double value) {
  const std::size_t n = grid->size();
  return ScalarField(std::move(grid), std::vector<double>(n, value));
}

ScalarField ScalarField::from_function(GridPtr grid,
                                       const std::function<double(const Vec3&)>& fn) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid->node(i));
  return ScalarField(std::move(grid), std::move(v));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField ScalarField::scaled(double s) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= s;
  return ScalarField(grid_, std::move(v));
}

void ScalarField::require_same_grid(const SphereGrid& other, const char* what) const {
  if (!grid_->same_as(other)) {
    throw Error(ErrorKind::GridMismatch, std::string(what) + ": field grid " +
                                             grid_->resolution_string() + " (dim " +
                                             std::to_string(grid_->dim()) + ") vs " +
                                             other.resolution_string() + " (dim " +
                                             std::to_string(other.dim()) + ")");
  }
}

}  // namespace gaussflow
