#include "gaussflow/sphere_grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "gaussflow/error.hpp"

namespace gaussflow {

namespace {

constexpr double kPi = std::numbers::pi;

int parse_int(std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::InvalidArgument, "bad resolution '" + std::string(text) + "'");
  }
  return value;
}

// Fejer's first rule on [-1, 1] at t_j = cos((j + 1/2) pi / n).
std::vector<double> fejer_weights(int n) {
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) {
    const double theta = (j + 0.5) * kPi / n;
    double s = 0.0;
    for (int k = 1; k <= n / 2; ++k) {
      s += std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    }
    w[j] = 2.0 / n * (1.0 - 2.0 * s);
  }
  return w;
}

}  // namespace

std::shared_ptr<const SphereGrid> SphereGrid::circle(int n) {
  if (n < kMinCircleNodes) {
    throw Error(ErrorKind::ResolutionTooLow,
                "circle grid needs at least " + std::to_string(kMinCircleNodes) + " nodes, got " +
                    std::to_string(n));
  }
  auto grid = std::shared_ptr<SphereGrid>(new SphereGrid());
  grid->dim_ = 2;
  grid->res_ = {1, n};
  grid->d_phi_ = 2.0 * kPi / n;
  grid->d_theta_ = grid->d_phi_;
  grid->nodes_.resize(n);
  grid->e1_.resize(n);
  grid->e2_.assign(n, Vec3{});
  grid->weights_.assign(n, grid->d_phi_);
  grid->theta_.resize(n);
  grid->sin_theta_.resize(n);
  grid->cos_theta_.resize(n);
  for (int k = 0; k < n; ++k) {
    const double a = k * grid->d_phi_;
    const double c = std::cos(a);
    const double s = std::sin(a);
    grid->theta_[k] = a;
    grid->cos_theta_[k] = c;
    grid->sin_theta_[k] = s;
    grid->nodes_[k] = {c, s, 0.0};
    grid->e1_[k] = {-s, c, 0.0};
  }
  return grid;
}

std::shared_ptr<const SphereGrid> SphereGrid::lat_lon(int n_theta, int n_phi) {
  if (n_theta < kMinLatitudeRows || n_phi < kMinStencilNodes) {
    throw Error(ErrorKind::ResolutionTooLow,
                "latitude-longitude grid needs n_theta >= " + std::to_string(kMinLatitudeRows) +
                    " and n_phi >= " + std::to_string(kMinStencilNodes) + ", got " +
                    std::to_string(n_theta) + "x" + std::to_string(n_phi));
  }
  if (n_phi % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument,
                "n_phi must be even for cross-pole continuation, got " + std::to_string(n_phi));
  }
  auto grid = std::shared_ptr<SphereGrid>(new SphereGrid());
  grid->dim_ = 3;
  grid->res_ = {n_theta, n_phi};
  grid->d_theta_ = kPi / n_theta;
  grid->d_phi_ = 2.0 * kPi / n_phi;
  const auto lat_w = fejer_weights(n_theta);
  const std::size_t n = static_cast<std::size_t>(n_theta) * n_phi;
  grid->nodes_.resize(n);
  grid->e1_.resize(n);
  grid->e2_.resize(n);
  grid->weights_.resize(n);
  grid->theta_.resize(n_theta);
  grid->sin_theta_.resize(n_theta);
  grid->cos_theta_.resize(n_theta);
  for (int j = 0; j < n_theta; ++j) {
    const double th = (j + 0.5) * grid->d_theta_;
    const double st = std::sin(th);
    const double ct = std::cos(th);
    grid->theta_[j] = th;
    grid->sin_theta_[j] = st;
    grid->cos_theta_[j] = ct;
    for (int k = 0; k < n_phi; ++k) {
      const double ph = k * grid->d_phi_;
      const double cp = std::cos(ph);
      const double sp = std::sin(ph);
      const std::size_t i = static_cast<std::size_t>(j) * n_phi + k;
      grid->nodes_[i] = {st * cp, st * sp, ct};
      grid->e1_[i] = {ct * cp, ct * sp, -st};
      grid->e2_[i] = {-sp, cp, 0.0};
      grid->weights_[i] = lat_w[j] * grid->d_phi_;
    }
  }
  return grid;
}

std::shared_ptr<const SphereGrid> SphereGrid::build(int dim, Resolution res) {
  if (dim == 2) return circle(res.n_phi);
  if (dim == 3) return lat_lon(res.n_theta, res.n_phi);
  throw Error(ErrorKind::UnsupportedDimension,
              "ambient dimension must be 2 or 3, got " + std::to_string(dim));
}

Resolution SphereGrid::parse_resolution(int dim, std::string_view text) {
  if (dim == 2) return {1, parse_int(text)};
  if (dim == 3) {
    const auto x = text.find('x');
    if (x == std::string_view::npos) {
      throw Error(ErrorKind::InvalidArgument,
                  "dim=3 resolution must look like <n_theta>x<n_phi>, got '" + std::string(text) + "'");
    }
    return {parse_int(text.substr(0, x)), parse_int(text.substr(x + 1))};
  }
  throw Error(ErrorKind::UnsupportedDimension,
              "ambient dimension must be 2 or 3, got " + std::to_string(dim));
}

double SphereGrid::measure() const { return dim_ == 2 ? 2.0 * kPi : 4.0 * kPi; }

bool SphereGrid::supports_derivatives() const {
  if (dim_ == 2) return res_.n_phi >= kMinStencilNodes;
  return res_.n_theta >= kMinLatitudeRows && res_.n_phi >= kMinStencilNodes;
}

std::string SphereGrid::resolution_string() const {
  if (dim_ == 2) return std::to_string(res_.n_phi);
  return std::to_string(res_.n_theta) + "x" + std::to_string(res_.n_phi);
}

std::size_t SphereGrid::nearest_node(const Vec3& v) const {
  const int np = res_.n_phi;
  double ph = std::atan2(v.y, v.x);
  if (ph < 0.0) ph += 2.0 * kPi;
  const int k0 = static_cast<int>(std::floor(ph / d_phi_));
  if (dim_ == 2) {
    const double frac = ph / d_phi_ - k0;
    return static_cast<std::size_t>(((frac < 0.5 ? k0 : k0 + 1) % np + np) % np);
  }
  const double th = std::acos(std::clamp(v.z, -1.0, 1.0));
  const int j0 = static_cast<int>(std::floor(th / d_theta_ - 0.5));
  std::size_t best = 0;
  double best_d = 1e300;
  for (int dj = -1; dj <= 2; ++dj) {
    const int j = std::clamp(j0 + dj, 0, res_.n_theta - 1);
    for (int dk = -1; dk <= 2; ++dk) {
      const int k = ((k0 + dk) % np + np) % np;
      const std::size_t i = static_cast<std::size_t>(j) * np + k;
      const double d = angular_distance(nodes_[i], v);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
  }
  // Near a pole every longitude is close; fall back to a full row scan.
  if (j0 <= 0 || j0 >= res_.n_theta - 2) {
    const int j = j0 <= 0 ? 0 : res_.n_theta - 1;
    for (int k = 0; k < np; ++k) {
      const std::size_t i = static_cast<std::size_t>(j) * np + k;
      const double d = angular_distance(nodes_[i], v);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
  }
  return best;
}

double SphereGrid::local_spacing(std::size_t i) const {
  if (dim_ == 2) return d_phi_;
  const int j = static_cast<int>(i / res_.n_phi);
  return std::max(d_theta_, d_phi_ * sin_theta_[j]);
}

}  // namespace gaussflow
