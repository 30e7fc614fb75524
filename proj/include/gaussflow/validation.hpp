#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaussflow/sphere_grid.hpp"

namespace gaussflow {

/// Test field given by a smooth ambient extension F with its Cartesian
/// gradient and Hessian. On the sphere the covariant gradient is the
/// tangential part of grad F and the covariant Hessian in the frame is
/// e_a^T D^2F e_b - <grad F, x> delta_ab.
struct OperatorTestField {
  std::string name;
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> grad;
  std::function<void(const Vec3&, double (&)[3][3])> hess;
};

/// Fields exercised for each dimension: 2 + x1 and x1 x2 on the circle,
/// x3, x1 and x1 x2 on S^2.
std::vector<OperatorTestField> operator_test_fields(int dim);

struct OperatorErrorRow {
  std::string field;
  std::string quantity;  // gradient | hessian | tangency
  std::string resolution;
  double max_error = 0.0;
  double observed_order = 0.0;  // NaN on the coarsest grid
};

struct OperatorReport {
  int dim = 0;
  std::vector<OperatorErrorRow> rows;

  /// Smallest observed order over fields for a quantity.
  double min_order(const std::string& quantity) const;
};

/// Max-node errors of the covariant gradient and Hessian on each resolution,
/// with the order observed between consecutive resolutions. Resolutions must
/// double from one entry to the next.
OperatorReport validate_operators(int dim, const std::vector<Resolution>& resolutions);

std::vector<Resolution> default_validation_resolutions(int dim);

/// CSV with header field,quantity,resolution,max_error,observed_order.
void write_operator_csv(std::ostream& out, const OperatorReport& report);

}  // namespace gaussflow
