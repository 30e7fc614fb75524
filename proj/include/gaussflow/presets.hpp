#pragma once

#include <string>
#include <vector>

#include "gaussflow/scalar_field.hpp"

namespace gaussflow {

/// Smooth uniformly convex bodies given by the 1-homogeneous extension
/// H(y) of their support function:
///   sphere r                 H = r |y|
///   ellipse a b              H = sqrt(a^2 y1^2 + b^2 y2^2)            (dim 2)
///   ellipsoid a b c          H = sqrt(a^2 y1^2 + b^2 y2^2 + c^2 y3^2) (dim 3)
///   smooth_cube p [eps]      H = (sum y_i^p)^(1/p) + eps |y|, even p
/// The eps |y| term keeps the smoothed cube uniformly convex; without it the
/// principal radii vanish on the coordinate axes.
struct BodyPreset {
  enum class Kind { Sphere, Ellipse, Ellipsoid, SmoothCube };

  Kind kind = Kind::Sphere;
  std::vector<double> params{1.0};

  static BodyPreset parse(const std::string& text);
  /// True if `text` names a preset rather than a file.
  static bool is_preset(const std::string& text);
  std::string to_string() const;

  /// Ambient dimension the preset requires, 0 if it fits both.
  int required_dim() const;

  double support(const Vec3& y) const;
  ScalarField evaluate(const GridPtr& grid) const;
};

}  // namespace gaussflow
