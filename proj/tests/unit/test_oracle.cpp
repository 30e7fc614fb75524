#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gaussflow/error.hpp"
#include "gaussflow/functionals.hpp"
#include "gaussflow/oracle.hpp"
#include "gaussflow/presets.hpp"

using namespace gaussflow;
using std::numbers::pi;

namespace {

double sup_diff(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a[i] - b[i]));
  return s;
}

}  // namespace

TEST_CASE("manufacture_f examples") {
  const auto c = SphereGrid::circle(512);
  const auto one = ScalarField::constant(c, 1.0);
  SUBCASE("h = 3 gives f = 1") {
    const auto f = manufacture_f(ScalarField::constant(c, 3.0), one);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("h = 1 gives f = 1 in both dimensions") {
    for (const auto& g : {c, SphereGrid::lat_lon(16, 32)}) {
      const auto f = manufacture_f(ScalarField::constant(g, 1.0), ScalarField::constant(g, 1.0));
      for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == 1.0);
    }
  }
  SUBCASE("ellipse at theta = 0") {
    const auto f = manufacture_f(BodyPreset::parse("ellipse 2 1").evaluate(c), one);
    CHECK(f[0] == doctest::Approx(0.25).epsilon(1e-8));
  }
  SUBCASE("non-convex targets are refused") {
    const auto h = ScalarField::from_function(c, [](const Vec3& x) {
      return 1.0 + 0.9 * std::cos(3 * std::atan2(x.y, x.x));
    });
    try {
      manufacture_f(h, one);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConvexityViolation);
    }
  }
}

TEST_CASE("manufactured problems are mass balanced") {
  for (const auto route : {ManufactureRoute::Stencil, ManufactureRoute::Oracle}) {
    for (const auto& [grid, body] : {std::pair{SphereGrid::circle(256), "ellipse 2 1"},
                                     std::pair{SphereGrid::circle(256), "smooth_cube 4 0.2"},
                                     std::pair{SphereGrid::lat_lon(32, 64), "ellipsoid 1.5 1.2 1"}}) {
      const auto mp = manufacture(BodyPreset::parse(body), ScalarField::constant(grid, 1.0), route);
      CHECK(mp.f.min() > 0.0);
      const double mf = integrate(mp.f);
      const double mg = integrate(mp.g);
      // Stencil route: balance is the discrete change of variables, accurate
      // to quadrature error. Oracle route: balanced by the compatibility scale.
      CHECK(std::fabs(mf - mg) <= 1e-3 * mg);
      if (route == ManufactureRoute::Stencil) CHECK(mp.compatibility_scale == 1.0);
      CHECK(mp.target_Vg == doctest::Approx(log_volume(derive_geometry(mp.h_target),
                                                        DensityPair(mp.f, mp.g, false))));
    }
  }
}

TEST_CASE("oracle f agrees with the stencil f at the stencil order") {
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const auto g = SphereGrid::circle(n);
    const auto body = BodyPreset::parse("ellipse 2 1");
    const auto one = ScalarField::constant(g, 1.0);
    const double e = sup_diff(manufacture_f(body.evaluate(g), one), oracle_f(body, one));
    if (prev > 0.0) CHECK(std::log2(prev / e) >= 3.5);
    prev = e;
  }
  // The oracle against the closed form: curvature radius a^2 b^2 / h^3, so
  // f = h * 4 / h^3 / rho^2.
  const auto g = SphereGrid::circle(128);
  const auto f = oracle_f(BodyPreset::parse("ellipse 2 1"), ScalarField::constant(g, 1.0));
  double worst = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Vec3& x = g->node(i);
    const double h = std::sqrt(4 * x.x * x.x + x.y * x.y);
    const double rho2 = (16 * x.x * x.x + x.y * x.y) / (h * h);
    worst = std::max(worst, std::fabs(f[i] - 4.0 / (h * h * rho2)));
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("oracle geometry at a node") {
  const auto g = SphereGrid::lat_lon(16, 32);
  const auto body = BodyPreset::parse("sphere 2");
  for (std::size_t i : {std::size_t{0}, std::size_t{77}, g->size() - 1}) {
    const auto o = oracle_geometry(body, *g, i, 1e-3);
    CHECK(o.h == doctest::Approx(2.0));
    CHECK(norm(o.X - g->node(i) * 2.0) <= 1e-8);
    CHECK(o.detb == doctest::Approx(4.0).epsilon(1e-6));
  }
}

TEST_CASE("recovery_error") {
  const auto g = SphereGrid::circle(256);
  const auto pair = DensityPair(ScalarField::constant(g, 1.0), ScalarField::constant(g, 1.0), false);
  const auto h = BodyPreset::parse("ellipse 2 1").evaluate(g);
  const auto same = recovery_error(h, h, pair);
  CHECK(same.sup_err == 0.0);
  CHECK(same.l2_err == 0.0);
  const auto twice = recovery_error(h.scaled(2.0), h, pair);
  CHECK(twice.scale == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(twice.sup_err <= 1e-14);
  CHECK(twice.l2_err <= 1e-14);
  CHECK_THROWS_AS(recovery_error(ScalarField::constant(SphereGrid::circle(128), 1.0), h, pair), Error);
}

TEST_CASE("match_log_volume") {
  const auto g = SphereGrid::circle(256);
  const auto pair = DensityPair(ScalarField::constant(g, 1.0), ScalarField::constant(g, 1.0), false);
  const auto h = match_log_volume(ScalarField::constant(g, 1.0), pair, 2 * pi * std::log(4.0 / 3.0));
  CHECK(h[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  const auto e = match_log_volume(BodyPreset::parse("ellipse 2 1").evaluate(g), pair, 0.7);
  CHECK(log_volume(derive_geometry(e), pair) == doctest::Approx(0.7).epsilon(1e-13));
}

TEST_CASE("change of variables") {
  SUBCASE("unit sphere with phi = 1 gives the sphere's measure") {
    const auto c = SphereGrid::circle(128);
    const auto r2 = verify_change_of_variables(ScalarField::constant(c, 1.0), [](const Vec3&) { return 1.0; }, c);
    CHECK(r2.lhs == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK(r2.rhs == doctest::Approx(2 * pi).epsilon(1e-14));
    const auto s = SphereGrid::lat_lon(32, 64);
    const auto r3 = verify_change_of_variables(ScalarField::constant(s, 1.0), [](const Vec3&) { return 1.0; }, s);
    CHECK(r3.lhs == doctest::Approx(4 * pi).epsilon(1e-12));
    CHECK(std::fabs(r3.gap) <= 1e-12);
  }
  SUBCASE("h = 2: the Jacobian is one, so only quadrature error remains") {
    const auto phi = [](const Vec3& u) { return std::exp(u.x) * (1.0 + 0.5 * u.y * u.z); };
    const auto s = SphereGrid::lat_lon(32, 64);
    const auto r = verify_change_of_variables(ScalarField::constant(s, 2.0), phi, SphereGrid::lat_lon(48, 96));
    CHECK(std::fabs(r.gap) <= 1e-10);
    const auto c = SphereGrid::circle(128);
    const auto rc = verify_change_of_variables(ScalarField::constant(c, 2.0), phi, SphereGrid::circle(200));
    CHECK(std::fabs(rc.gap) <= 1e-12);
  }
  SUBCASE("ellipse with phi = u1^2: the gap shrinks at second order or better") {
    const auto phi = [](const Vec3& u) { return u.x * u.x; };
    const auto dirs = SphereGrid::circle(1000);
    double prev = 0.0;
    for (int n : {64, 128, 256}) {
      const auto r = verify_change_of_variables(BodyPreset::parse("ellipse 2 1").evaluate(SphereGrid::circle(n)), phi,
                                                dirs);
      CHECK(r.rhs == doctest::Approx(pi).epsilon(1e-13));
      const double e = std::fabs(r.gap);
      if (prev > 0.0) CHECK(std::log2(prev / e) >= 1.9);
      prev = e;
    }
  }
}

TEST_CASE("body presets") {
  CHECK(BodyPreset::parse("ellipse 2 1").required_dim() == 2);
  CHECK(BodyPreset::parse("ellipsoid 1.5 1.2 1").required_dim() == 3);
  CHECK(BodyPreset::parse("sphere 2").required_dim() == 0);
  CHECK(BodyPreset::is_preset("smooth_cube 4"));
  CHECK_FALSE(BodyPreset::is_preset("file x.txt"));
  CHECK_THROWS_AS(BodyPreset::parse("ellipse 2"), Error);
  CHECK_THROWS_AS(BodyPreset::parse("sphere -1"), Error);
  CHECK_THROWS_AS(BodyPreset::parse("smooth_cube 3"), Error);
  CHECK(BodyPreset::parse("smooth_cube 6 0.1").to_string() == "smooth_cube 6 0.1");
  CHECK(BodyPreset::parse("ellipse 2 1").support({0.6, 0.8, 0}) == doctest::Approx(std::sqrt(1.44 + 0.64)));
}
