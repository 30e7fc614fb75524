#include "gaussflow/polar_filter.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

#include "gaussflow/error.hpp"

namespace gaussflow {

struct PolarFilter::Plans {
  double* real = nullptr;
  fftw_complex* spectrum = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(int n) {
    real = fftw_alloc_real(n);
    spectrum = fftw_alloc_complex(n / 2 + 1);
    // FFTW_ESTIMATE keeps plans, and therefore results, independent of timing.
    forward = fftw_plan_dft_r2c_1d(n, real, spectrum, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, spectrum, real, FFTW_ESTIMATE);
    if (!real || !spectrum || !forward || !backward) {
      throw Error(ErrorKind::InvalidArgument, "cannot set up azimuthal transforms");
    }
  }
  ~Plans() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spectrum);
  }
};

double second_difference_symbol(int m, double spacing) {
  const double a = m * spacing;
  return (2.5 - (8.0 / 3.0) * std::cos(a) + std::cos(2.0 * a) / 6.0) / (spacing * spacing);
}

PolarFilter::PolarFilter(const SphereGrid& grid)
    : n_theta_(grid.n_theta()), n_phi_(grid.n_phi()) {
  if (grid.dim() != 3) throw Error(ErrorKind::UnsupportedDimension, "polar filter needs S^2");
  const double meridional = 16.0 / (3.0 * grid.d_theta() * grid.d_theta());
  const int modes = n_phi_ / 2 + 1;
  factors_.resize(n_theta_);
  stiffness_.resize(n_theta_);
  for (int j = 0; j < n_theta_; ++j) {
    const double s2 = grid.sin_theta(j) * grid.sin_theta(j);
    std::vector<double> row(modes, 1.0);
    bool any = false;
    double worst = 0.0;
    for (int m = 1; m < modes; ++m) {
      const double sigma = second_difference_symbol(m, grid.d_phi()) / s2;
      if (sigma > meridional) {
        row[m] = meridional / sigma;
        any = true;
      }
      worst = std::max(worst, row[m] * sigma);
    }
    stiffness_[j] = worst;
    if (any) factors_[j] = std::move(row);
  }
  if (filtered_rows() > 0) plans_ = std::make_unique<Plans>(n_phi_);
}

PolarFilter::~PolarFilter() = default;

std::size_t PolarFilter::filtered_rows() const {
  return static_cast<std::size_t>(
      std::count_if(factors_.begin(), factors_.end(), [](const auto& f) { return !f.empty(); }));
}

void PolarFilter::apply(std::span<double> values) {
  if (!plans_) return;
  const double inv_n = 1.0 / n_phi_;
  for (int j = 0; j < n_theta_; ++j) {
    const auto& factor = factors_[j];
    if (factor.empty()) continue;
    double* row = values.data() + static_cast<std::size_t>(j) * n_phi_;
    std::copy(row, row + n_phi_, plans_->real);
    fftw_execute(plans_->forward);
    for (std::size_t m = 0; m < factor.size(); ++m) {
      plans_->spectrum[m][0] *= factor[m] * inv_n;
      plans_->spectrum[m][1] *= factor[m] * inv_n;
    }
    fftw_execute(plans_->backward);
    std::copy(plans_->real, plans_->real + n_phi_, row);
  }
}

}  // namespace gaussflow
