#include "gaussflow/stencils.hpp"

#include <cmath>

#include "gaussflow/error.hpp"
#include "gaussflow/summation.hpp"

namespace gaussflow {

namespace {

// Five-point differences along a line with the given memory stride, written in
// difference form so that constants give exactly zero.
inline double d1(const double* c, std::ptrdiff_t s) {
  return (8.0 * (c[s] - c[-s]) - (c[2 * s] - c[-2 * s])) / 12.0;
}

inline double d2(const double* c, std::ptrdiff_t s) {
  return (16.0 * (c[s] - 2.0 * c[0] + c[-s]) - (c[2 * s] - 2.0 * c[0] + c[-2 * s])) / 12.0;
}

void require_derivatives(const SphereGrid& grid) {
  if (!grid.supports_derivatives()) {
    throw Error(ErrorKind::ResolutionTooLow,
                "grid " + grid.resolution_string() + " is too coarse for derivative stencils");
  }
}

}  // namespace

double min_eigenvalue(const Sym2& m) {
  const double mean = 0.5 * (m.a11 + m.a22);
  const double half_diff = 0.5 * (m.a11 - m.a22);
  return mean - std::hypot(half_diff, m.a12);
}

double max_eigenvalue(const Sym2& m) {
  const double mean = 0.5 * (m.a11 + m.a22);
  const double half_diff = 0.5 * (m.a11 - m.a22);
  return mean + std::hypot(half_diff, m.a12);
}

DerivativeOperator::DerivativeOperator(GridPtr grid) : grid_(std::move(grid)) {
  require_derivatives(*grid_);
  if (grid_->dim() == 3) {
    const int nt = grid_->n_theta();
    cot_.resize(nt);
    inv_sin_.resize(nt);
    for (int j = 0; j < nt; ++j) {
      cot_[j] = grid_->cos_theta(j) / grid_->sin_theta(j);
      inv_sin_[j] = 1.0 / grid_->sin_theta(j);
    }
  }
}

void DerivativeOperator::apply(std::span<const double> h, LocalDerivatives& out) const {
  if (h.size() != grid_->size()) {
    throw Error(ErrorKind::GridMismatch, "derivative input has " + std::to_string(h.size()) +
                                             " values, grid has " +
                                             std::to_string(grid_->size()));
  }
  const std::size_t n = h.size();
  out.g1.resize(n);
  out.h11.resize(n);
  if (grid_->dim() == 2) {
    apply_circle(h, out);
  } else {
    out.g2.resize(n);
    out.h12.resize(n);
    out.h22.resize(n);
    apply_sphere(h, out);
  }
}

void DerivativeOperator::apply_circle(std::span<const double> h, LocalDerivatives& out) const {
  const int n = static_cast<int>(h.size());
  out.pad.resize(n + 4);
  double* p = out.pad.data() + 2;
  for (int i = 0; i < n; ++i) p[i] = h[i];
  p[-2] = h[n - 2];
  p[-1] = h[n - 1];
  p[n] = h[0];
  p[n + 1] = h[1];
  const double inv_d = 1.0 / grid_->d_phi();
  const double inv_d2 = inv_d * inv_d;
  for (int i = 0; i < n; ++i) {
    const double* c = p + i;
    out.g1[i] = d1(c, 1) * inv_d;
    out.h11[i] = d2(c, 1) * inv_d2;
  }
}

void DerivativeOperator::apply_sphere(std::span<const double> h, LocalDerivatives& out) const {
  const int nt = grid_->n_theta();
  const int np = grid_->n_phi();
  const int half = np / 2;
  const int stride = np + 4;
  out.pad.resize(static_cast<std::size_t>(nt + 4) * stride);
  for (int r = -2; r < nt + 2; ++r) {
    int src = r;
    int shift = 0;
    if (r < 0) {
      src = -1 - r;
      shift = half;
    } else if (r >= nt) {
      src = 2 * nt - 1 - r;
      shift = half;
    }
    const double* row = h.data() + static_cast<std::size_t>(src) * np;
    double* dst = out.pad.data() + static_cast<std::size_t>(r + 2) * stride + 2;
    for (int c = -2; c < np + 2; ++c) {
      int sc = (c + shift) % np;
      if (sc < 0) sc += np;
      dst[c] = row[sc];
    }
  }

  const double inv_dt = 1.0 / grid_->d_theta();
  const double inv_dp = 1.0 / grid_->d_phi();
  const double inv_dt2 = inv_dt * inv_dt;
  const double inv_dp2 = inv_dp * inv_dp;
  const double inv_dtdp = inv_dt * inv_dp;
  for (int j = 0; j < nt; ++j) {
    const double cot = cot_[j];
    const double is = inv_sin_[j];
    const double* base = out.pad.data() + static_cast<std::size_t>(j + 2) * stride + 2;
    for (int k = 0; k < np; ++k) {
      const double* c = base + k;
      const double ht = d1(c, stride) * inv_dt;
      const double hp = d1(c, 1) * inv_dp;
      const double htt = d2(c, stride) * inv_dt2;
      const double hpp = d2(c, 1) * inv_dp2;
      const double htp =
          (8.0 * (d1(c + stride, 1) - d1(c - stride, 1)) -
           (d1(c + 2 * stride, 1) - d1(c - 2 * stride, 1))) /
          12.0 * inv_dtdp;
      const std::size_t i = static_cast<std::size_t>(j) * np + k;
      out.g1[i] = ht;
      out.g2[i] = hp * is;
      out.h11[i] = htt;
      out.h12[i] = (htp - cot * hp) * is;
      out.h22[i] = hpp * is * is + cot * ht;
    }
  }
}

std::vector<Vec3> gradient(const ScalarField& field) {
  DerivativeOperator op(field.grid_ptr());
  LocalDerivatives d;
  op.apply(field.values(), d);
  const auto& grid = field.grid();
  std::vector<Vec3> out(field.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = d.g1[i] * grid.e1(i);
    if (grid.dim() == 3) out[i] = out[i] + d.g2[i] * grid.e2(i);
  }
  return out;
}

std::vector<Vec3> gradient(const ScalarField& field, const SphereGrid& grid) {
  field.require_same_grid(grid, "gradient");
  return gradient(field);
}

std::vector<Sym2> hessian(const ScalarField& field) {
  DerivativeOperator op(field.grid_ptr());
  LocalDerivatives d;
  op.apply(field.values(), d);
  std::vector<Sym2> out(field.size());
  const bool sphere = field.grid().dim() == 3;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].a11 = d.h11[i];
    if (sphere) {
      out[i].a12 = d.h12[i];
      out[i].a22 = d.h22[i];
    }
  }
  return out;
}

std::vector<Sym2> hessian(const ScalarField& field, const SphereGrid& grid) {
  field.require_same_grid(grid, "hessian");
  return hessian(field);
}

double integrate(const ScalarField& field) {
  return weighted_sum(field.grid().weights(), field.values());
}

double integrate(const ScalarField& field, const SphereGrid& grid) {
  field.require_same_grid(grid, "integrate");
  return integrate(field);
}

}  // namespace gaussflow
