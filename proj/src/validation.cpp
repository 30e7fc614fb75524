#include "gaussflow/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "gaussflow/error.hpp"
#include "gaussflow/field_io.hpp"
#include "gaussflow/scalar_field.hpp"
#include "gaussflow/stencils.hpp"

namespace gaussflow {

namespace {

using Hess = double[3][3];

void zero(Hess& m) {
  for (auto& row : m) std::fill(std::begin(row), std::end(row), 0.0);
}

double quad(const Hess& m, const Vec3& a, const Vec3& b) {
  const double av[3] = {a.x, a.y, a.z};
  const double bv[3] = {b.x, b.y, b.z};
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) s += av[k] * m[k][l] * bv[l];
  }
  return s;
}

OperatorTestField linear(std::string name, double c, Vec3 a) {
  return {std::move(name), [=](const Vec3& x) { return c + dot(a, x); },
          [=](const Vec3&) { return a; }, [](const Vec3&, Hess& m) { zero(m); }};
}

OperatorTestField x1x2() {
  return {"x1x2", [](const Vec3& x) { return x.x * x.y; },
          [](const Vec3& x) { return Vec3{x.y, x.x, 0.0}; },
          [](const Vec3&, Hess& m) {
            zero(m);
            m[0][1] = m[1][0] = 1.0;
          }};
}

}  // namespace

std::vector<OperatorTestField> operator_test_fields(int dim) {
  if (dim == 2) return {linear("2+x1", 2.0, {1.0, 0.0, 0.0}), x1x2()};
  if (dim == 3) {
    return {linear("x3", 0.0, {0.0, 0.0, 1.0}), linear("x1", 0.0, {1.0, 0.0, 0.0}), x1x2()};
  }
  throw Error(ErrorKind::UnsupportedDimension, "dim must be 2 or 3");
}

std::vector<Resolution> default_validation_resolutions(int dim) {
  if (dim == 2) return {{1, 128}, {1, 256}, {1, 512}};
  return {{16, 32}, {32, 64}, {64, 128}};
}

double OperatorReport::min_order(const std::string& quantity) const {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (r.quantity == quantity && std::isfinite(r.observed_order)) {
      out = std::min(out, r.observed_order);
    }
  }
  return out;
}

OperatorReport validate_operators(int dim, const std::vector<Resolution>& resolutions) {
  if (resolutions.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "operator validation needs at least two resolutions");
  }
  OperatorReport report;
  report.dim = dim;
  for (const auto& field : operator_test_fields(dim)) {
    double prev_grad = 0.0;
    double prev_hess = 0.0;
    for (std::size_t r = 0; r < resolutions.size(); ++r) {
      const auto grid = SphereGrid::build(dim, resolutions[r]);
      const auto h = ScalarField::from_function(grid, field.value);
      const auto grad = gradient(h);
      const auto hess = hessian(h);
      double eg = 0.0;
      double eh = 0.0;
      double et = 0.0;
      for (std::size_t i = 0; i < grid->size(); ++i) {
        const Vec3& x = grid->node(i);
        const Vec3 G = field.grad(x);
        const double radial = dot(G, x);
        const Vec3 exact = G - x * radial;
        eg = std::max(eg, norm(grad[i] - exact));
        et = std::max(et, std::fabs(dot(grad[i], x)));
        Hess m;
        field.hess(x, m);
        const Vec3& e1 = grid->e1(i);
        eh = std::max(eh, std::fabs(hess[i].a11 - (quad(m, e1, e1) - radial)));
        if (dim == 3) {
          const Vec3& e2 = grid->e2(i);
          eh = std::max(eh, std::fabs(hess[i].a12 - quad(m, e1, e2)));
          eh = std::max(eh, std::fabs(hess[i].a22 - (quad(m, e2, e2) - radial)));
        }
      }
      const double nan = std::numeric_limits<double>::quiet_NaN();
      const auto res = grid->resolution_string();
      report.rows.push_back({field.name, "gradient", res, eg, r == 0 ? nan : std::log2(prev_grad / eg)});
      report.rows.push_back({field.name, "hessian", res, eh, r == 0 ? nan : std::log2(prev_hess / eh)});
      report.rows.push_back({field.name, "tangency", res, et, nan});
      prev_grad = eg;
      prev_hess = eh;
    }
  }
  return report;
}

void write_operator_csv(std::ostream& out, const OperatorReport& report) {
  out << "field,quantity,resolution,max_error,observed_order\n";
  for (const auto& r : report.rows) {
    out << r.field << ',' << r.quantity << ',' << r.resolution << ',' << format_double(r.max_error)
        << ',' << (std::isfinite(r.observed_order) ? format_double(r.observed_order) : "") << '\n';
  }
}

}  // namespace gaussflow
