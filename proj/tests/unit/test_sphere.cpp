#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gaussflow/error.hpp"
#include "gaussflow/field_io.hpp"
#include "gaussflow/spherical_sets.hpp"
#include "gaussflow/stencils.hpp"
#include "gaussflow/summation.hpp"

using namespace gaussflow;
using std::numbers::pi;

namespace {

double angle_of(const Vec3& v) { return std::atan2(v.y, v.x); }

double latitude_band_area(double t0, double t1) { return 2.0 * pi * (std::cos(t0) - std::cos(t1)); }

}  // namespace

TEST_CASE("circle grid with four nodes") {
  const auto g = SphereGrid::circle(4);
  REQUIRE(g->size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(g->node(k).x == doctest::Approx(std::cos(k * pi / 2)).epsilon(1e-15));
    CHECK(g->node(k).y == doctest::Approx(std::sin(k * pi / 2)).epsilon(1e-15));
    CHECK(g->weight(k) == doctest::Approx(pi / 2).epsilon(1e-15));
  }
}

TEST_CASE("circle weights sum to 2 pi") {
  const auto g = SphereGrid::circle(512);
  CompensatedSum s;
  for (double w : g->weights()) s.add(w);
  CHECK(std::fabs(s.value() - 2 * pi) <= 1e-12);
}

TEST_CASE("lat-lon weights reproduce the sphere area and band areas") {
  const auto g = SphereGrid::lat_lon(64, 128);
  CompensatedSum s;
  for (double w : g->weights()) s.add(w);
  CHECK(std::fabs(s.value() - 4 * pi) <= 1e-6);

  // Each node carries a slice of the area of its latitude band.
  double band = 0.0;
  for (int k = 0; k < 128; ++k) band += g->weight(static_cast<std::size_t>(k));
  const double dt = pi / 64;
  CHECK(band == doctest::Approx(latitude_band_area(0.0, dt)).epsilon(2e-3));
}

TEST_CASE("grid invariants: unit nodes, positive weights, deterministic order") {
  for (const auto& g : {SphereGrid::circle(64), SphereGrid::lat_lon(16, 32)}) {
    for (std::size_t i = 0; i < g->size(); ++i) {
      CHECK(std::fabs(norm(g->node(i)) - 1.0) <= 1e-14);
      CHECK(g->weight(i) > 0.0);
    }
  }
  const auto a = SphereGrid::lat_lon(8, 16);
  const auto b = SphereGrid::lat_lon(8, 16);
  for (std::size_t i = 0; i < a->size(); ++i) CHECK(a->node(i).z == b->node(i).z);
  // No node sits on a pole.
  for (std::size_t i = 0; i < a->size(); ++i) CHECK(std::fabs(a->node(i).z) < 1.0);
}

TEST_CASE("build_grid rejects bad input") {
  CHECK_THROWS_AS(SphereGrid::build(4, {1, 16}), Error);
  try {
    SphereGrid::build(3, {2, 4});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ResolutionTooLow);
  }
  CHECK(SphereGrid::parse_resolution(3, "64x128") == Resolution{64, 128});
  CHECK(SphereGrid::parse_resolution(2, "512").n_phi == 512);
}

TEST_CASE("derivatives need at least eight nodes per periodic direction") {
  const auto g = SphereGrid::circle(4);
  CHECK_FALSE(g->supports_derivatives());
  const ScalarField h = ScalarField::constant(g, 1.0);
  CHECK_THROWS_AS(gradient(h), Error);
}

TEST_CASE("gradient on the circle") {
  const auto g = SphereGrid::circle(256);
  SUBCASE("constant field has zero gradient exactly") {
    for (const auto& v : gradient(ScalarField::constant(g, 1.0))) CHECK(norm(v) == 0.0);
  }
  SUBCASE("cos theta") {
    const auto h = ScalarField::from_function(g, [](const Vec3& x) { return x.x; });
    const auto grad = gradient(h);
    const double d = 2 * pi / 256;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double t = i * d;
      // d/dtheta cos = -sin; tangent e_theta = (-sin, cos).
      CHECK(std::fabs(dot(grad[i], g->e1(i)) + std::sin(t)) <= d * d);
      CHECK(std::fabs(dot(grad[i], g->node(i))) <= 1e-12);
    }
  }
}

TEST_CASE("hessian on the circle") {
  const auto g = SphereGrid::circle(256);
  for (const auto& m : hessian(ScalarField::constant(g, 1.0))) CHECK(m.a11 == 0.0);
  const auto hs = hessian(ScalarField::from_function(g, [](const Vec3& x) { return x.x; }));
  const double d = 2 * pi / 256;
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(std::fabs(hs[i].a11 + std::cos(i * d)) <= d * d);
  }
}

namespace {

// Max errors of the covariant gradient and Hessian of x3 on S^2 at one
// resolution. Analytic: grad x3 = e3 - x3 x, Hess x3 = -x3 I.
std::pair<double, double> x3_errors(int nt) {
  const auto g = SphereGrid::lat_lon(nt, 2 * nt);
  const auto h = ScalarField::from_function(g, [](const Vec3& x) { return x.z; });
  const auto grad = gradient(h);
  const auto hs = hessian(h);
  double eg = 0.0;
  double eh = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Vec3& x = g->node(i);
    eg = std::max(eg, norm(grad[i] - (Vec3{0, 0, 1} - x * x.z)));
    eh = std::max({eh, std::fabs(hs[i].a11 + x.z), std::fabs(hs[i].a22 + x.z),
                   std::fabs(hs[i].a12)});
  }
  return {eg, eh};
}

}  // namespace

TEST_CASE("x3 on S^2: gradient and harmonic hessian converge at second order or better") {
  const auto [g1, h1] = x3_errors(16);
  const auto [g2, h2] = x3_errors(32);
  const auto [g3, h3] = x3_errors(64);
  CHECK(std::log2(g1 / g2) >= 1.9);
  CHECK(std::log2(g2 / g3) >= 1.9);
  CHECK(std::log2(h1 / h2) >= 1.9);
  CHECK(std::log2(h2 / h3) >= 1.9);
  CHECK(g3 <= 1e-5);
}

TEST_CASE("hessian is symmetric and gradient tangent on S^2") {
  const auto g = SphereGrid::lat_lon(16, 32);
  const auto h =
      ScalarField::from_function(g, [](const Vec3& x) { return 2.0 + x.x * x.y + 0.3 * x.z; });
  const auto grad = gradient(h);
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(std::fabs(dot(grad[i], g->node(i))) <= 1e-12);
  }
}

TEST_CASE("integrate") {
  const auto c = SphereGrid::circle(512);
  CHECK(std::fabs(integrate(ScalarField::constant(c, 1.0)) - 2 * pi) <= 1e-12);
  const auto s = SphereGrid::lat_lon(64, 128);
  CHECK(std::fabs(integrate(ScalarField::from_function(s, [](const Vec3& x) { return x.z; }))) <=
        1e-10);
  // int x3^2 over S^2 = 4 pi / 3.
  CHECK(integrate(ScalarField::from_function(s, [](const Vec3& x) { return x.z * x.z; })) ==
        doctest::Approx(4 * pi / 3).epsilon(1e-10));
  CHECK(std::fabs(integrate(ScalarField::from_function(s, [](const Vec3& x) { return x.x; }))) <=
        1e-10);
  CHECK(integrate(ScalarField::from_function(s, [](const Vec3& x) { return x.y * x.y; })) ==
        doctest::Approx(4 * pi / 3).epsilon(1e-10));
}

TEST_CASE("integrate is bit-reproducible") {
  const auto s = SphereGrid::lat_lon(32, 64);
  const auto f = ScalarField::from_function(s, [](const Vec3& x) { return std::exp(x.x + 0.1 * x.z); });
  CHECK(integrate(f) == integrate(f));
}

TEST_CASE("scalar fields reject bad values") {
  const auto g = SphereGrid::circle(8);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(7, 1.0)), Error);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(8, std::nan(""))), Error);
  const auto other = SphereGrid::circle(16);
  CHECK_THROWS_AS(gradient(ScalarField::constant(g, 1.0), *other), Error);
}

namespace {

// Sampling oracle: every sampled v of the candidate polar has <u, v> <= 0 for
// every sampled u of omega, and points just outside it violate that.
void check_polar_by_sampling(const SphericalConvexSet& omega) {
  const auto star = polar_set(omega);
  const auto us = omega.sample(400);
  for (const auto& v : star.sample(400)) {
    double worst = -1.0;
    for (const auto& u : us) worst = std::max(worst, dot(u, v));
    CHECK(worst <= 1e-12);
  }
  const auto wider = star.kind() == SphericalConvexSet::Kind::Arc
                         ? SphericalConvexSet::arc(star.center_angle(), star.angle() + 0.05)
                         : SphericalConvexSet::cap(star.center(), star.angle() + 0.05);
  const auto ring = wider.sample(400);
  double worst = -1.0;
  for (const auto& v : ring) {
    if (membership(star, v)) continue;
    for (const auto& u : us) worst = std::max(worst, dot(u, v));
  }
  CHECK(worst > 0.0);
}

}  // namespace

TEST_CASE("polar sets") {
  SUBCASE("closed semicircle has a single-point polar") {
    const auto p = polar_set(SphericalConvexSet::arc(0.0, pi / 2));
    CHECK(p.angle() == doctest::Approx(0.0));
    CHECK(p.center_angle() == doctest::Approx(pi));
  }
  SUBCASE("cap about e3") {
    const auto omega = SphericalConvexSet::cap({0, 0, 1}, pi / 4);
    const auto p = polar_set(omega);
    CHECK(p.center().z == doctest::Approx(-1.0));
    CHECK(p.angle() == doctest::Approx(pi / 4));
    check_polar_by_sampling(omega);
  }
  SUBCASE("arc at pi/3") {
    const auto omega = SphericalConvexSet::arc(pi / 3, pi / 6);
    const auto p = polar_set(omega);
    CHECK(p.center_angle() == doctest::Approx(pi / 3 + pi));
    CHECK(p.angle() == doctest::Approx(pi / 3));
    check_polar_by_sampling(omega);
  }
  SUBCASE("involution on the family") {
    for (double w : {0.1, 0.7, 1.3}) {
      const auto a = SphericalConvexSet::arc(0.4, w);
      const auto aa = polar_set(polar_set(a));
      CHECK(aa.angle() == doctest::Approx(w).epsilon(1e-14));
      CHECK(std::fabs(std::remainder(aa.center_angle() - 0.4, 2 * pi)) <= 1e-14);
      const auto c = SphericalConvexSet::cap(normalized(Vec3{1, 2, 3}), w);
      const auto cc = polar_set(polar_set(c));
      CHECK(cc.angle() == doctest::Approx(w).epsilon(1e-14));
      CHECK(dot(cc.center(), c.center()) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(SphericalConvexSet::arc(0.0, 2.0), Error);
}

TEST_CASE("membership is closed") {
  const auto cap = SphericalConvexSet::cap({0, 0, 1}, pi / 4);
  CHECK(membership(cap, {0, 0, 1}));
  CHECK_FALSE(membership(cap, {0, 0, -1}));
  const auto arc = SphericalConvexSet::arc(0.0, pi / 6);
  CHECK(membership(arc, {std::cos(pi / 6), std::sin(pi / 6), 0}));
  CHECK_FALSE(membership(arc, {std::cos(pi / 5), std::sin(pi / 5), 0}));
  CHECK(angle_of(arc.center()) == doctest::Approx(0.0));
}

TEST_CASE("set measures") {
  CHECK(SphericalConvexSet::arc(1.0, 0.3).measure() == doctest::Approx(0.6));
  CHECK(SphericalConvexSet::cap({1, 0, 0}, pi / 2).measure() == doctest::Approx(2 * pi));
}

TEST_CASE("field files round-trip exactly") {
  const auto g = SphereGrid::lat_lon(8, 16);
  const auto f =
      ScalarField::from_function(g, [](const Vec3& x) { return std::exp(0.3 * x.x) / 3.0; });
  std::stringstream io;
  write_field(io, f, {"note one", "t=0.5"});
  const auto text = io.str();
  CHECK(text.rfind("sphere-field v1 dim=3 res=8x16\n", 0) == 0);
  const auto back = read_field_file(io);
  REQUIRE(back.comments.size() == 2);
  CHECK(back.comments[1] == "t=0.5");
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back.field[i] == f[i]);

  std::stringstream bad("sphere-field v1 dim=2 res=8\n1\n2\n");
  CHECK_THROWS_AS(read_field(bad), Error);
  CHECK(format_double(0.1) == "0.1");
  CHECK(parse_double(" 2.5 ") == 2.5);
}
