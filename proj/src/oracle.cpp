#include "gaussflow/oracle.hpp"

#include <cmath>

#include "gaussflow/error.hpp"
#include "gaussflow/functionals.hpp"
#include "gaussflow/interpolation.hpp"
#include "gaussflow/summation.hpp"

namespace gaussflow {

namespace {

Vec3 axis(int k) {
  Vec3 e;
  (k == 0 ? e.x : k == 1 ? e.y : e.z) = 1.0;
  return e;
}

double component(const Vec3& v, int k) { return k == 0 ? v.x : k == 1 ? v.y : v.z; }

struct Cartesian {
  double grad[3] = {0.0, 0.0, 0.0};
  double hess[3][3] = {{0.0}};
};

Cartesian central_differences(const BodyPreset& body, const Vec3& x, int n, double d) {
  Cartesian c;
  const double h0 = body.support(x);
  for (int k = 0; k < n; ++k) {
    const Vec3 ek = axis(k) * d;
    const double hp = body.support(x + ek);
    const double hm = body.support(x - ek);
    c.grad[k] = (hp - hm) / (2.0 * d);
    c.hess[k][k] = (hp - 2.0 * h0 + hm) / (d * d);
    for (int l = k + 1; l < n; ++l) {
      const Vec3 el = axis(l) * d;
      const double v = (body.support(x + ek + el) - body.support(x + ek - el) -
                        body.support(x - ek + el) + body.support(x - ek - el)) /
                       (4.0 * d * d);
      c.hess[k][l] = c.hess[l][k] = v;
    }
  }
  return c;
}

double quad_form(const Cartesian& c, const Vec3& a, const Vec3& b, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) s += component(a, k) * c.hess[k][l] * component(b, l);
  }
  return s;
}

double oracle_spacing(const SphereGrid& grid) {
  return 0.25 * (grid.dim() == 2 ? grid.d_phi() : grid.d_theta());
}

}  // namespace

ScalarField manufacture_f(const ScalarField& h_target, const ScalarField& g) {
  g.require_same_grid(h_target.grid(), "manufacture_f");
  const auto geom = derive_geometry(h_target);
  const DirectionInterpolator gi(g);
  std::vector<double> f(geom.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = gi(geom.u[i]) * jacobian(geom, i);
  return ScalarField(h_target.grid_ptr(), std::move(f));
}

OracleGeometry oracle_geometry(const BodyPreset& body, const SphereGrid& grid, std::size_t i,
                               double delta) {
  const int n = grid.dim();
  const Vec3& x = grid.node(i);
  const auto coarse = central_differences(body, x, n, delta);
  const auto fine = central_differences(body, x, n, 0.5 * delta);
  Cartesian r;
  for (int k = 0; k < n; ++k) {
    r.grad[k] = (4.0 * fine.grad[k] - coarse.grad[k]) / 3.0;
    for (int l = 0; l < n; ++l) r.hess[k][l] = (4.0 * fine.hess[k][l] - coarse.hess[k][l]) / 3.0;
  }
  OracleGeometry o;
  o.h = body.support(x);
  o.X = {r.grad[0], r.grad[1], n == 3 ? r.grad[2] : 0.0};
  const Vec3& e1 = grid.e1(i);
  o.b.a11 = quad_form(r, e1, e1, n);
  if (n == 3) {
    const Vec3& e2 = grid.e2(i);
    o.b.a12 = quad_form(r, e1, e2, n);
    o.b.a22 = quad_form(r, e2, e2, n);
    o.detb = o.b.a11 * o.b.a22 - o.b.a12 * o.b.a12;
  } else {
    o.detb = o.b.a11;
  }
  return o;
}

ScalarField oracle_f(const BodyPreset& body, const ScalarField& g) {
  const auto& grid = g.grid();
  const int n = grid.dim();
  const DirectionInterpolator gi(g);
  const double delta = oracle_spacing(grid);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto o = oracle_geometry(body, grid, i, delta);
    if (!(min_radius(o.b, n) > 0.0)) {
      throw Error(ErrorKind::ConvexityViolation,
                  "target " + body.to_string() + " is not uniformly convex at node " +
                      std::to_string(i));
    }
    const double r = norm(o.X);
    const double rn = n == 2 ? r * r : r * r * r;
    f[i] = gi(o.X * (1.0 / r)) * o.h * o.detb / rn;
  }
  return ScalarField(g.grid_ptr(), std::move(f));
}

ManufacturedProblem manufacture(const BodyPreset& body, const ScalarField& g,
                                ManufactureRoute route) {
  auto h = body.evaluate(g.grid_ptr());
  const auto geom = derive_geometry(h);
  const DirectionInterpolator gi(g);
  CompensatedSum image_mass;
  CompensatedSum vg;
  for (std::size_t i = 0; i < geom.size(); ++i) {
    const double q = gi(geom.u[i]) * jacobian(geom, i);
    image_mass.add(g.grid().weight(i) * q);
    vg.add(g.grid().weight(i) * q * std::log(geom.rho[i]));
  }
  if (route == ManufactureRoute::Stencil) {
    auto f = manufacture_f(h, g);
    return {std::move(h), g, std::move(f), vg.value(), 1.0};
  }
  const auto raw = oracle_f(body, g);
  const double scale = image_mass.value() / integrate(raw);
  return {std::move(h), g, raw.scaled(scale), vg.value(), scale};
}

namespace {

// V_g(c h) = V_g(h) + log(c) * sum_i w_i g(u_i) J_i at the discrete level,
// because u and J do not change under scaling.
double volume_factor(const BodyGeometry& geom, const DensityPair& pair, double target_vg) {
  CompensatedSum image_mass;
  for (std::size_t i = 0; i < geom.size(); ++i) {
    image_mass.add(geom.grid->weight(i) * pair.g_at()(geom.u[i]) * jacobian(geom, i));
  }
  return std::exp((target_vg - log_volume(geom, pair)) / image_mass.value());
}

}  // namespace

ScalarField match_log_volume(const ScalarField& h, const DensityPair& pair, double target_vg) {
  return h.scaled(volume_factor(derive_geometry(h), pair, target_vg));
}

RecoveryError recovery_error(const ScalarField& h_final, const ScalarField& h_target,
                             const DensityPair& pair) {
  h_final.require_same_grid(h_target.grid(), "recovery_error");
  const double v_target = log_volume(derive_geometry(h_target), pair);
  const double scale = volume_factor(derive_geometry(h_final), pair, v_target);
  double sup = 0.0;
  CompensatedSum l2;
  for (std::size_t i = 0; i < h_final.size(); ++i) {
    const double e = scale * h_final[i] - h_target[i];
    sup = std::max(sup, std::fabs(e));
    l2.add(h_final.grid().weight(i) * e * e);
  }
  return {sup, std::sqrt(l2.value()), scale};
}

ChangeOfVariablesCheck verify_change_of_variables(const ScalarField& h,
                                                  const std::function<double(const Vec3&)>& phi,
                                                  const GridPtr& directions) {
  const auto geom = derive_geometry(h);
  CompensatedSum lhs;
  for (std::size_t i = 0; i < geom.size(); ++i) {
    lhs.add(geom.grid->weight(i) * phi(geom.u[i]) * jacobian(geom, i));
  }
  CompensatedSum rhs;
  for (std::size_t k = 0; k < directions->size(); ++k) {
    rhs.add(directions->weight(k) * phi(directions->node(k)));
  }
  return {lhs.value(), rhs.value(), lhs.value() - rhs.value()};
}

}  // namespace gaussflow
