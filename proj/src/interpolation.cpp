#include "gaussflow/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaussflow/error.hpp"
#include "gaussflow/summation.hpp"

namespace gaussflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Cubic {
  double a, b, c, d;
};

// Lagrange cubic through (-1, fm), (0, f0), (1, f1), (2, f2) in s = local cell coordinate.
Cubic cubic_coefficients(double fm, double f0, double f1, double f2) {
  return {(-fm + 3.0 * f0 - 3.0 * f1 + f2) / 6.0, 0.5 * fm - f0 + 0.5 * f1,
          -fm / 3.0 - 0.5 * f0 + f1 - f2 / 6.0, f0};
}

int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

}  // namespace

DirectionInterpolator::DirectionInterpolator(const ScalarField& field)
    : grid_(field.grid_ptr()), values_(field.values().begin(), field.values().end()) {
  constant_ = std::all_of(values_.begin(), values_.end(),
                          [&](double v) { return v == values_.front(); });
}

double DirectionInterpolator::operator()(const Vec3& u) const {
  if (constant_) return values_[0];
  if (grid_->dim() == 2) return at_angle(std::atan2(u.y, u.x));
  return bilinear(u);
}

double DirectionInterpolator::at_angle(double angle) const {
  if (constant_) return values_[0];
  const int n = static_cast<int>(values_.size());
  const double q = angle / grid_->d_phi();
  const double fl = std::floor(q);
  const double s = q - fl;
  const int c = wrap(static_cast<int>(fl), n);
  const auto cf = cubic_coefficients(values_[wrap(c - 1, n)], values_[c], values_[wrap(c + 1, n)],
                                     values_[wrap(c + 2, n)]);
  return ((cf.a * s + cf.b) * s + cf.c) * s + cf.d;
}

double DirectionInterpolator::bilinear(const Vec3& u) const {
  const int nt = grid_->n_theta();
  const int np = grid_->n_phi();
  const double theta = std::atan2(std::hypot(u.x, u.y), u.z);
  double phi = std::atan2(u.y, u.x);
  if (phi < 0.0) phi += kTwoPi;
  const double t = theta / grid_->d_theta() - 0.5;
  const double p = phi / grid_->d_phi();
  const int j0 = std::clamp(static_cast<int>(std::floor(t)), -1, nt - 1);
  const int k0 = static_cast<int>(std::floor(p));
  const double a = std::clamp(t - j0, 0.0, 1.0);
  const double b = p - k0;
  auto at = [&](int r, int k) {
    if (r < 0) {
      r = -1 - r;
      k += np / 2;
    } else if (r >= nt) {
      r = 2 * nt - 1 - r;
      k += np / 2;
    }
    return values_[static_cast<std::size_t>(r) * np + wrap(k, np)];
  };
  const double top = (1.0 - b) * at(j0, k0) + b * at(j0, k0 + 1);
  const double bottom = (1.0 - b) * at(j0 + 1, k0) + b * at(j0 + 1, k0 + 1);
  return (1.0 - a) * top + a * bottom;
}

PeriodicCubic::PeriodicCubic(std::span<const double> values, double spacing)
    : values_(values.begin(), values.end()), spacing_(spacing) {
  const int n = static_cast<int>(values_.size());
  if (n < 4) throw Error(ErrorKind::ResolutionTooLow, "cubic interpolation needs 4 nodes");
  prefix_.resize(n + 1);
  CompensatedSum acc;
  prefix_[0] = 0.0;
  for (int c = 0; c < n; ++c) {
    acc.add(spacing_ *
            (-values_[wrap(c - 1, n)] + 13.0 * values_[c] + 13.0 * values_[wrap(c + 1, n)] -
             values_[wrap(c + 2, n)]) /
            24.0);
    prefix_[c + 1] = acc.value();
  }
  total_ = prefix_[n];
}

double PeriodicCubic::operator()(double angle) const {
  const int n = static_cast<int>(values_.size());
  const double q = angle / spacing_;
  const double fl = std::floor(q);
  const double s = q - fl;
  const int c = wrap(static_cast<int>(fl), n);
  const auto cf = cubic_coefficients(values_[wrap(c - 1, n)], values_[c], values_[wrap(c + 1, n)],
                                     values_[wrap(c + 2, n)]);
  return ((cf.a * s + cf.b) * s + cf.c) * s + cf.d;
}

double PeriodicCubic::derivative(double angle) const {
  const int n = static_cast<int>(values_.size());
  const double q = angle / spacing_;
  const double fl = std::floor(q);
  const double s = q - fl;
  const int c = wrap(static_cast<int>(fl), n);
  const auto cf = cubic_coefficients(values_[wrap(c - 1, n)], values_[c], values_[wrap(c + 1, n)],
                                     values_[wrap(c + 2, n)]);
  return ((3.0 * cf.a * s + 2.0 * cf.b) * s + cf.c) / spacing_;
}

double PeriodicCubic::cell_partial(int cell, double s) const {
  const int n = static_cast<int>(values_.size());
  const auto cf = cubic_coefficients(values_[wrap(cell - 1, n)], values_[cell],
                                     values_[wrap(cell + 1, n)], values_[wrap(cell + 2, n)]);
  return spacing_ * s * (((cf.a * 0.25 * s + cf.b / 3.0) * s + cf.c * 0.5) * s + cf.d);
}

double PeriodicCubic::cumulative(double angle) const {
  const int n = static_cast<int>(values_.size());
  const double q = angle / spacing_;
  const double turns = std::floor(q / n);
  const double rem = q - turns * n;
  int c = static_cast<int>(std::floor(rem));
  double s = rem - c;
  if (c >= n) {
    c = n - 1;
    s = 1.0;
  }
  return turns * total_ + prefix_[c] + cell_partial(c, s);
}

double PeriodicCubic::integral(double a, double b) const { return cumulative(b) - cumulative(a); }

}  // namespace gaussflow
