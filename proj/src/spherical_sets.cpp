#include "gaussflow/spherical_sets.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gaussflow/error.hpp"
#include "gaussflow/field_io.hpp"

namespace gaussflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundaryTol = 1e-12;

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0.0 ? a + 2.0 * kPi : a;
}

void check_angle(double angle, const char* what) {
  if (!(angle >= 0.0 && angle <= kPi / 2 + kBoundaryTol)) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + " must lie in [0, pi/2], got " + format_double(angle));
  }
}

}  // namespace

SphericalConvexSet SphericalConvexSet::arc(double center_angle, double half_width) {
  check_angle(half_width, "arc half-width");
  const double c = wrap_angle(center_angle);
  return {Kind::Arc, {std::cos(c), std::sin(c), 0.0}, c, std::min(half_width, kPi / 2)};
}

SphericalConvexSet SphericalConvexSet::cap(const Vec3& center, double opening) {
  check_angle(opening, "cap opening");
  const double len = norm(center);
  if (!(std::fabs(len - 1.0) < 1e-9)) {
    throw Error(ErrorKind::InvalidArgument, "cap center must be a unit vector");
  }
  return {Kind::Cap, center * (1.0 / len), 0.0, std::min(opening, kPi / 2)};
}

bool SphericalConvexSet::contains(const Vec3& point) const {
  return angular_distance(center_, point) <= angle_ + kBoundaryTol;
}

double SphericalConvexSet::measure() const {
  if (kind_ == Kind::Arc) return 2.0 * angle_;
  return 2.0 * kPi * (1.0 - std::cos(angle_));
}

std::vector<Vec3> SphericalConvexSet::sample(int count) const {
  std::vector<Vec3> pts;
  if (count <= 0) return pts;
  if (kind_ == Kind::Arc) {
    pts.reserve(count);
    for (int s = 0; s < count; ++s) {
      const double a = count == 1 ? center_angle_
                                  : center_angle_ - angle_ + 2.0 * angle_ * s / (count - 1);
      pts.push_back({std::cos(a), std::sin(a), 0.0});
    }
    return pts;
  }
  Vec3 t1;
  Vec3 t2;
  tangent_basis(center_, t1, t2);
  const int rings = std::max(1, static_cast<int>(std::sqrt(count / kPi)));
  const int per_ring = std::max(1, count / rings);
  const double c_lo = std::cos(angle_);
  pts.reserve(static_cast<std::size_t>(rings) * per_ring + 1);
  pts.push_back(center_);
  for (int r = 0; r < rings; ++r) {
    const double cz = 1.0 - (1.0 - c_lo) * (r + 1.0) / rings;
    const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
    for (int k = 0; k < per_ring; ++k) {
      const double psi = 2.0 * kPi * (k + 0.5 * (r % 2)) / per_ring;
      pts.push_back(cz * center_ + sz * (std::cos(psi) * t1 + std::sin(psi) * t2));
    }
  }
  return pts;
}

std::string SphericalConvexSet::describe_center() const {
  if (kind_ == Kind::Arc) return format_double(center_angle_);
  return format_double(center_.x) + " " + format_double(center_.y) + " " +
         format_double(center_.z);
}

SphericalConvexSet polar_set(const SphericalConvexSet& omega) {
  const double rest = std::max(0.0, kPi / 2 - omega.angle());
  if (omega.kind() == SphericalConvexSet::Kind::Arc) {
    return SphericalConvexSet::arc(omega.center_angle() + kPi, rest);
  }
  return SphericalConvexSet::cap(-omega.center(), rest);
}

bool membership(const SphericalConvexSet& omega, const Vec3& point) {
  return omega.contains(point);
}

void tangent_basis(const Vec3& axis, Vec3& t1, Vec3& t2) {
  const Vec3 helper = std::fabs(axis.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  t1 = normalized(cross(helper, axis));
  t2 = cross(axis, t1);
}

}  // namespace gaussflow
