#pragma once

#include <string>
#include <vector>

#include "gaussflow/vec3.hpp"

namespace gaussflow {

/// Closed arc on S^1 (center angle, half-width) or closed cap on S^2 (center
/// vector, opening angle). The angle lies in [0, pi/2]; zero is the single
/// point produced as the polar of a closed half-circle or hemisphere.
class SphericalConvexSet {
 public:
  enum class Kind { Arc, Cap };

  static SphericalConvexSet arc(double center_angle, double half_width);
  static SphericalConvexSet cap(const Vec3& center, double opening);

  Kind kind() const { return kind_; }
  int dim() const { return kind_ == Kind::Arc ? 2 : 3; }
  const Vec3& center() const { return center_; }
  /// Arc only: center angle normalised to [0, 2 pi).
  double center_angle() const { return center_angle_; }
  double angle() const { return angle_; }

  bool contains(const Vec3& point) const;

  /// Measure on the sphere: 2 * half-width, or 2 pi (1 - cos opening).
  double measure() const;

  /// `count` points covering the set: uniform in angle for arcs,
  /// an area-uniform polar lattice for caps.
  std::vector<Vec3> sample(int count) const;

  std::string describe_center() const;

 private:
  SphericalConvexSet(Kind kind, const Vec3& center, double center_angle, double angle)
      : kind_(kind), center_(center), center_angle_(center_angle), angle_(angle) {}

  Kind kind_;
  Vec3 center_;
  double center_angle_;
  double angle_;
};

/// omega* = { v : <u, v> <= 0 for all u in omega }.
SphericalConvexSet polar_set(const SphericalConvexSet& omega);

/// Membership by angular distance to the center (closed set).
bool membership(const SphericalConvexSet& omega, const Vec3& point);

/// Orthonormal pair spanning the plane orthogonal to `axis`.
void tangent_basis(const Vec3& axis, Vec3& t1, Vec3& t2);

}  // namespace gaussflow
