#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaussflow/vec3.hpp"

namespace gaussflow {

/// Grid resolution. For the circle only `n_phi` (N equispaced angles) is used
/// and `n_theta` is 1; on S^2 it is the latitude x longitude node count.
struct Resolution {
  int n_theta = 1;
  int n_phi = 0;

  bool operator==(const Resolution&) const = default;
};

/// Discretisation of S^{n-1} for n = 2 (equispaced circle) or n = 3
/// (latitude-longitude grid, rows offset half a cell from the poles).
///
/// Node i of the S^2 grid sits at colatitude theta_j = (j + 1/2) pi / n_theta
/// and longitude phi_k = 2 pi k / n_phi with i = j * n_phi + k. Latitude weights
/// are Fejer's first rule in cos(theta), so quadrature is exact for
/// spherical harmonics well beyond the stencil order. Each node carries a
/// fixed orthonormal tangent frame: e_theta on the circle (counter-clockwise),
/// (e_theta, e_phi) on S^2.
class SphereGrid {
 public:
  static constexpr int kMinCircleNodes = 4;
  static constexpr int kMinStencilNodes = 8;
  static constexpr int kMinLatitudeRows = 4;

  static std::shared_ptr<const SphereGrid> circle(int n);
  static std::shared_ptr<const SphereGrid> lat_lon(int n_theta, int n_phi);
  static std::shared_ptr<const SphereGrid> build(int dim, Resolution res);

  /// Parses "512" (dim 2) or "64x128" (dim 3).
  static Resolution parse_resolution(int dim, std::string_view text);

  int dim() const { return dim_; }
  std::size_t size() const { return nodes_.size(); }
  Resolution resolution() const { return res_; }
  int n_theta() const { return res_.n_theta; }
  int n_phi() const { return res_.n_phi; }
  double d_theta() const { return d_theta_; }
  double d_phi() const { return d_phi_; }

  std::span<const Vec3> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  const Vec3& node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const Vec3& e1(std::size_t i) const { return e1_[i]; }
  const Vec3& e2(std::size_t i) const { return e2_[i]; }

  /// Colatitude of row j (S^2) or angle of node k (circle).
  double theta(int j) const { return theta_[j]; }
  double sin_theta(int j) const { return sin_theta_[j]; }
  double cos_theta(int j) const { return cos_theta_[j]; }
  double phi(int k) const { return k * d_phi_; }

  /// 2 pi for the circle, 4 pi for S^2.
  double measure() const;

  /// True when the grid is fine enough for the 5-point derivative stencils.
  bool supports_derivatives() const;

  std::string resolution_string() const;

  /// Index of the node closest (in angle) to the unit vector `v`.
  std::size_t nearest_node(const Vec3& v) const;

  /// Typical angular spacing around node i.
  double local_spacing(std::size_t i) const;

  bool same_as(const SphereGrid& other) const {
    return dim_ == other.dim_ && res_ == other.res_;
  }

 private:
  SphereGrid() = default;

  int dim_ = 2;
  Resolution res_;
  double d_theta_ = 0.0;
  double d_phi_ = 0.0;
  std::vector<Vec3> nodes_;
  std::vector<Vec3> e1_;
  std::vector<Vec3> e2_;
  std::vector<double> weights_;
  std::vector<double> theta_;
  std::vector<double> sin_theta_;
  std::vector<double> cos_theta_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

}  // namespace gaussflow
