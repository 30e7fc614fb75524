#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gaussflow/error.hpp"
#include "gaussflow/geometry.hpp"
#include "gaussflow/presets.hpp"

using namespace gaussflow;
using std::numbers::pi;

namespace {

double ellipse_h(double t) { return std::sqrt(4 * std::cos(t) * std::cos(t) + std::sin(t) * std::sin(t)); }

ScalarField ellipse(int n) { return BodyPreset::parse("ellipse 2 1").evaluate(SphereGrid::circle(n)); }

}  // namespace

TEST_CASE("unit sphere geometry") {
  for (const auto& g : {SphereGrid::circle(64), SphereGrid::lat_lon(16, 32)}) {
    const auto geom = derive_geometry(ScalarField::constant(g, 1.0));
    for (std::size_t i = 0; i < g->size(); ++i) {
      CHECK(norm(geom.X[i] - g->node(i)) <= 1e-15);
      CHECK(geom.rho[i] == 1.0);
      CHECK(norm(geom.u[i] - g->node(i)) <= 1e-15);
      CHECK(geom.b[i].a11 == 1.0);
      CHECK(geom.b[i].a12 == 0.0);
      CHECK(geom.K[i] == 1.0);
    }
  }
}

TEST_CASE("sphere of radius 2 on the circle") {
  const auto geom = derive_geometry(ScalarField::constant(SphereGrid::circle(64), 2.0));
  for (std::size_t i = 0; i < geom.size(); ++i) {
    CHECK(geom.K[i] == 0.5);
    CHECK(geom.rho[i] == 2.0);
  }
}

TEST_CASE("ellipse a=2 b=1 against closed-form curvature radius") {
  const auto geom = derive_geometry(ellipse(512));
  CHECK(geom.b[0].a11 == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(geom.K[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(geom.X[0].x == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::fabs(geom.X[0].y) <= 1e-12);
  CHECK(geom.rho[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(geom.u[0].x == doctest::Approx(1.0).epsilon(1e-12));
  // Radius of curvature a^2 b^2 / h^3 everywhere.
  const double d = 2 * pi / 512;
  double worst = 0.0;
  for (std::size_t i = 0; i < geom.size(); ++i) {
    const double h = ellipse_h(i * d);
    worst = std::max(worst, std::fabs(geom.b[i].a11 - 4.0 / (h * h * h)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("geometry invariants") {
  for (const auto& h : {ellipse(256), BodyPreset::parse("ellipsoid 1.5 1.2 1").evaluate(SphereGrid::lat_lon(32, 64))}) {
    const auto geom = derive_geometry(h);
    const auto& g = *geom.grid;
    for (std::size_t i = 0; i < geom.size(); ++i) {
      const double r2 = dot(geom.gradh[i], geom.gradh[i]) + h[i] * h[i];
      CHECK(std::fabs(geom.rho[i] * geom.rho[i] - r2) <= 1e-10 * r2);
      CHECK(std::fabs(geom.K[i] * geom.detb[i] - 1.0) <= 1e-12);
      CHECK(norm(geom.u[i] * geom.rho[i] - (geom.gradh[i] + h[i] * g.node(i))) <= 1e-10 * geom.rho[i]);
      CHECK(geom.min_radius[i] > 0.0);
    }
  }
}

TEST_CASE("scale covariance is exact for powers of two") {
  for (const auto& h : {ellipse(128), BodyPreset::parse("ellipsoid 1.5 1.2 1").evaluate(SphereGrid::lat_lon(16, 32))}) {
    const auto a = derive_geometry(h);
    const auto b = derive_geometry(h.scaled(2.0));
    const int n = h.grid().dim();
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(b.rho[i] == 2.0 * a.rho[i]);
      CHECK(b.b[i].a11 == 2.0 * a.b[i].a11);
      CHECK(b.K[i] == a.K[i] * std::pow(2.0, -(n - 1)));
    }
  }
}

TEST_CASE("derive_geometry errors") {
  const auto g = SphereGrid::circle(64);
  try {
    derive_geometry(ScalarField::from_function(g, [](const Vec3& x) {
      const double t = std::atan2(x.y, x.x);
      return 1.0 + 0.9 * std::cos(3 * t);
    }));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConvexityViolation);
  }
  try {
    derive_geometry(ScalarField::from_function(g, [](const Vec3& x) { return x.x; }));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveSupport);
  }
}

TEST_CASE("radial function from support planes") {
  const auto g = SphereGrid::circle(512);
  const auto rc = radial_from_support(ScalarField::constant(g, 1.7));
  for (std::size_t i = 0; i < rc.size(); ++i) CHECK(rc[i] == doctest::Approx(1.7).epsilon(1e-15));

  SUBCASE("unit square, node values only") {
    const auto h = ScalarField::from_function(g, [](const Vec3& x) { return std::fabs(x.x) + std::fabs(x.y); });
    const Vec3 u{std::cos(pi / 4), std::sin(pi / 4), 0.0};
    // Brute-force oracle: minimum of h(x) / <x, u> over a dense sweep.
    double oracle = 1e300;
    for (int k = 0; k < 1000000; ++k) {
      const double t = 2 * pi * k / 1000000;
      const double c = std::cos(t) * u.x + std::sin(t) * u.y;
      if (c > 1e-9) oracle = std::min(oracle, (std::fabs(std::cos(t)) + std::fabs(std::sin(t))) / c);
    }
    CHECK(oracle == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(radial_at(h, u) == doctest::Approx(oracle).epsilon(1e-12));
  }
  SUBCASE("ellipse") { CHECK(radial_at(ellipse(512), {1, 0, 0}) == doctest::Approx(2.0).epsilon(1e-12)); }
}

TEST_CASE("radial function agrees with the local radius") {
  // At u = u(x_i) the support-plane minimum is attained at node i itself.
  const auto h = ellipse(128);
  const auto geom = derive_geometry(h);
  for (std::size_t i = 0; i < geom.size(); ++i) {
    CHECK(std::fabs(radial_at(h, geom.u[i]) - geom.rho[i]) <= 1e-13);
  }
}

TEST_CASE("radial function off the normal grid converges at second order") {
  // Closed-form radius of the ellipse a=2, b=1: ab / sqrt(b^2 cos^2 + a^2 sin^2).
  const auto dirs = SphereGrid::circle(997);
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const auto rho = radial_from_support(ellipse(n), dirs);
    double worst = 0.0;
    for (std::size_t k = 0; k < dirs->size(); ++k) {
      const Vec3& u = dirs->node(k);
      const double exact = 2.0 / std::sqrt(u.x * u.x + 4.0 * u.y * u.y);
      worst = std::max(worst, std::fabs(rho[k] - exact));
    }
    if (prev > 0.0) CHECK(std::log2(prev / worst) >= 1.9);
    prev = worst;
  }
}

TEST_CASE("polar support") {
  const auto g = SphereGrid::circle(256);
  const auto p2 = polar_support(ScalarField::constant(g, 2.0));
  for (std::size_t i = 0; i < p2.size(); ++i) CHECK(p2[i] == doctest::Approx(0.5));
  const auto p1 = polar_support(ScalarField::constant(g, 1.0));
  for (std::size_t i = 0; i < p1.size(); ++i) CHECK(p1[i] == doctest::Approx(1.0));
  const auto pe = polar_support(ellipse(512));
  CHECK(pe[0] == doctest::Approx(0.5).epsilon(1e-12));

  // Applying it twice returns the body up to interpolation error.
  const auto h = ellipse(512);
  const auto back = polar_support(polar_support(h));
  double worst = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) worst = std::max(worst, std::fabs(back[i] - h[i]));
  CHECK(worst <= 1e-3);
}

TEST_CASE("convexity_check") {
  const auto g = SphereGrid::circle(128);
  CHECK(convexity_check(ScalarField::constant(g, 1.0)) == doctest::Approx(1.0));
  CHECK(convexity_check(ScalarField::constant(g, 3.0)) == doctest::Approx(3.0));
  CHECK(convexity_check(ellipse(512)) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("diagnostics") {
  const auto d1 = diagnostics(derive_geometry(ScalarField::constant(SphereGrid::circle(64), 1.0)));
  CHECK(d1.h_min == 1.0);
  CHECK(d1.h_max == 1.0);
  CHECK(d1.rho_min == 1.0);
  CHECK(d1.rho_max == 1.0);
  CHECK(d1.gradh_max == 0.0);
  CHECK(d1.K_max == 1.0);
  CHECK(d1.kappa_min == 1.0);

  const auto d2 = diagnostics(derive_geometry(ScalarField::constant(SphereGrid::lat_lon(16, 32), 2.0)));
  CHECK(d2.K_max == doctest::Approx(0.25));
  CHECK(d2.kappa_min == doctest::Approx(0.5));

  // Dense sweep of |h'| = 3 |cos t sin t| / h for the ellipse.
  double oracle = 0.0;
  for (int k = 0; k < 1000000; ++k) {
    const double t = 2 * pi * k / 1000000;
    oracle = std::max(oracle, 3 * std::fabs(std::cos(t) * std::sin(t)) / ellipse_h(t));
  }
  const auto de = diagnostics(derive_geometry(ellipse(1024)));
  CHECK(de.gradh_max == doctest::Approx(oracle).epsilon(1e-5));
}
