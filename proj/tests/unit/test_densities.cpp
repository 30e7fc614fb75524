#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gaussflow/aleksandrov.hpp"
#include "gaussflow/error.hpp"
#include "gaussflow/functionals.hpp"
#include "gaussflow/oracle.hpp"
#include "gaussflow/presets.hpp"

using namespace gaussflow;
using std::numbers::pi;

namespace {

DensityPair constant_pair(const GridPtr& g) {
  return make_density_pair(DensitySpec::parse("constant 1"), DensitySpec::parse("constant 1"), g, true);
}

// Trapezoid oracle on 10^6 points for the ellipse a=2, b=1 with f = g = 1:
// int log h(theta) dtheta and int log rho(u) du in closed form.
std::pair<double, double> ellipse_oracle() {
  const int n = 1000000;
  double lh = 0.0;
  double lr = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 2 * pi * k / n;
    const double c = std::cos(t);
    const double s = std::sin(t);
    lh += std::log(std::sqrt(4 * c * c + s * s));
    lr += std::log(2.0 / std::sqrt(c * c + 4 * s * s));
  }
  return {lh * 2 * pi / n, lr * 2 * pi / n};
}

}  // namespace

TEST_CASE("density specs") {
  CHECK(DensitySpec::parse("constant 2").param == 2.0);
  CHECK(DensitySpec::parse("linear 0.5 1 0").kind == DensitySpec::Kind::Linear);
  CHECK(DensitySpec::parse("file a/b.txt").path == "a/b.txt");
  CHECK_THROWS_AS(DensitySpec::parse("gaussian 1"), Error);
  CHECK_THROWS_AS(DensitySpec::parse("linear 1.5 1 0"), Error);
  const auto s = DensitySpec::parse("exp 0.3 0 0 1");
  CHECK(DensitySpec::parse(s.to_string()).param == 0.3);
}

TEST_CASE("make_density_pair") {
  SUBCASE("constant pair on the circle") {
    const auto p = constant_pair(SphereGrid::circle(512));
    CHECK(p.mass_f() == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK(p.mass_g() == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK(p.normalized());
  }
  SUBCASE("1 + 0.5 cos theta is already balanced") {
    const auto p = make_density_pair(DensitySpec::parse("linear 0.5 1 0"), DensitySpec::parse("constant 1"),
                                     SphereGrid::circle(512), false);
    CHECK(p.mass_f() == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK(p.balanced(1e-12));
  }
  SUBCASE("normalisation rescales g to the exponential's mass") {
    const auto p = make_density_pair(DensitySpec::parse("exp 0.3 0 0 1"), DensitySpec::parse("constant 5"),
                                     SphereGrid::lat_lon(64, 128), true);
    // int exp(0.3 x3) dA = 2 pi (e^0.3 - e^-0.3) / 0.3.
    const double mass = 2 * pi * (std::exp(0.3) - std::exp(-0.3)) / 0.3;
    CHECK(p.mass_f() == doctest::Approx(mass).epsilon(1e-10));
    CHECK(p.g()[0] == doctest::Approx(mass / (4 * pi)).epsilon(1e-10));
    CHECK(std::fabs(p.mass_gap()) <= 1e-12 * p.mass_f());
  }
  SUBCASE("non-positive densities are rejected") {
    const auto g = SphereGrid::circle(16);
    try {
      DensityPair(ScalarField::from_function(g, [](const Vec3& x) { return x.x; }), ScalarField::constant(g, 1.0),
                  false);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonPositiveDensity);
    }
    CHECK_THROWS_AS(DensityPair(ScalarField::constant(g, 1.0), ScalarField::constant(SphereGrid::circle(32), 1.0),
                                false),
                    Error);
  }
}

TEST_CASE("Aleksandrov margins for the constant pair on the circle") {
  const auto r = check_aleksandrov(constant_pair(SphereGrid::circle(64)));
  CHECK(r.sets_tested > 0);
  for (const auto& row : r.rows) CHECK(std::fabs(row.margin - pi) <= 1e-10);
  CHECK(r.margins_positive());
  std::ostringstream csv;
  write_aleksandrov_csv(csv, r);
  CHECK(csv.str().rfind("set_kind,center,angle,integral_f,integral_g_polar,margin\n", 0) == 0);
}

TEST_CASE("Aleksandrov margins for the constant pair on S^2") {
  AleksandrovSettings s;
  s.center_stride = 37;
  const auto r = check_aleksandrov(constant_pair(SphereGrid::lat_lon(32, 64)), s);
  for (const auto& row : r.rows) {
    const double t = row.set.angle();
    CHECK(std::fabs(row.margin - 2 * pi * (std::cos(t) + std::sin(t))) <= 1e-6);
  }
  CHECK(r.worst_margin == doctest::Approx(2 * pi).epsilon(1e-6));
}

TEST_CASE("a narrow bump violates the condition on its arc") {
  const auto g = SphereGrid::circle(512);
  auto f = DensitySpec::parse("bump 350 1 0").evaluate(g);
  f = f.scaled(2 * pi / integrate(f));
  const DensityPair pair(f, ScalarField::constant(g, 1.0), true);
  const auto r = check_aleksandrov(pair);
  CHECK(r.worst_margin < 0.0);
  REQUIRE(r.worst_set.has_value());
  CHECK(r.worst_set->contains({1, 0, 0}));
  CHECK(r.worst_set->angle() <= pi / 2);
}

TEST_CASE("unnormalised pairs are refused") {
  const auto g = SphereGrid::circle(64);
  const DensityPair p(ScalarField::constant(g, 2.0), ScalarField::constant(g, 1.0), false);
  try {
    check_aleksandrov(p);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unnormalized);
  }
}

TEST_CASE("functional J and log-volume on spheres") {
  for (const auto& g : {SphereGrid::circle(64), SphereGrid::lat_lon(16, 32)}) {
    const auto pair = constant_pair(g);
    CHECK(functional_J(derive_geometry(ScalarField::constant(g, 1.0)), pair) == 0.0);
    CHECK(std::fabs(functional_J(derive_geometry(ScalarField::constant(g, 3.0)), pair)) <= 1e-13);
    CHECK(log_volume(derive_geometry(ScalarField::constant(g, 1.0)), pair) == 0.0);
  }
  const auto g = SphereGrid::circle(64);
  CHECK(log_volume(derive_geometry(ScalarField::constant(g, 2.0)), constant_pair(g)) ==
        doctest::Approx(2 * pi * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("ellipse J and V_g against a dense quadrature oracle") {
  const auto [lh, lr] = ellipse_oracle();
  double prev = 0.0;
  for (int n : {256, 512}) {
    const auto g = SphereGrid::circle(n);
    const auto pair = constant_pair(g);
    const auto geom = derive_geometry(BodyPreset::parse("ellipse 2 1").evaluate(g));
    const double ev = std::fabs(log_volume(geom, pair) - lr);
    const double ej = std::fabs(functional_J(geom, pair) - (lh - lr));
    CHECK(ej == doctest::Approx(ev).epsilon(1e-6));
    if (prev > 0.0) {
      CHECK(ev <= 1e-7);
      CHECK(prev / ev >= 8.0);
    }
    prev = ev;
  }
}

TEST_CASE("V_g via the change of variables agrees with direct quadrature") {
  // The direct route takes rho from the support-plane minimum, which is only
  // second-order accurate; its error must shrink accordingly.
  const auto [lh, lr] = ellipse_oracle();
  const auto dirs = SphereGrid::circle(2048);
  double prev = 0.0;
  for (int n : {128, 256, 512}) {
    const auto g = SphereGrid::circle(n);
    const auto pair = constant_pair(g);
    const auto h = BodyPreset::parse("ellipse 2 1").evaluate(g);
    const double e = std::fabs(log_volume_direct(h, pair, dirs) - log_volume(derive_geometry(h), pair));
    CHECK(std::fabs(functional_J_direct(h, pair, dirs) - (lh - lr)) <= 2 * e + 1e-7);
    if (prev > 0.0) CHECK(prev / e >= 3.0);
    prev = e;
  }
  CHECK(prev <= 2e-4);
}

TEST_CASE("change of variables on S^2 against direct quadrature") {
  const auto fine = SphereGrid::lat_lon(64, 128);
  const auto body = BodyPreset::parse("ellipsoid 1.5 1.2 1");
  const double via = log_volume(derive_geometry(body.evaluate(fine)), constant_pair(fine));
  const auto dirs = SphereGrid::lat_lon(32, 64);
  double prev = 0.0;
  for (int nt : {16, 32}) {
    const auto g = SphereGrid::lat_lon(nt, 2 * nt);
    const double e = std::fabs(log_volume_direct(body.evaluate(g), constant_pair(g), dirs) - via);
    if (prev > 0.0) CHECK(prev / e >= 3.0);
    prev = e;
  }
}

TEST_CASE("residual") {
  const auto g = SphereGrid::circle(64);
  const auto r0 = residual(derive_geometry(ScalarField::constant(g, 2.5)), constant_pair(g));
  for (std::size_t i = 0; i < r0.size(); ++i) CHECK(r0[i] == 0.0);
  const DensityPair p(ScalarField::constant(g, 2.0), ScalarField::constant(g, 1.0), false);
  const auto r = residual(derive_geometry(ScalarField::constant(g, 1.0)), p);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == -1.0);
}

TEST_CASE("pushforward identity") {
  SUBCASE("identity map for the unit sphere") {
    for (const auto& g : {SphereGrid::circle(256), SphereGrid::lat_lon(64, 128)}) {
      const auto pair = constant_pair(g);
      const auto geom = derive_geometry(ScalarField::constant(g, 1.0));
      std::vector<SphericalConvexSet> sets;
      if (g->dim() == 2) {
        for (int k = 0; k < 8; ++k) sets.push_back(SphericalConvexSet::arc(0.7 * k, 0.2 + 0.15 * k));
      } else {
        sets.push_back(SphericalConvexSet::cap(normalized(Vec3{1, 2, 3}), 0.6));
        sets.push_back(SphericalConvexSet::cap(normalized(Vec3{1, 0, 0.2}), 0.3));
      }
      const auto rows = pushforward_check(geom, pair, sets);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        // Nearest-node rasterisation on S^2 can gain a band one cell wide.
        const double band = 2 * pi * std::sin(sets[k].angle()) * g->d_theta();
        CHECK(std::fabs(rows[k].gap) <= (g->dim() == 2 ? 1e-6 : band));
      }
    }
  }
  SUBCASE("manufactured ellipse") {
    const auto g = SphereGrid::circle(512);
    const auto mp = manufacture(BodyPreset::parse("ellipse 2 1"), ScalarField::constant(g, 1.0),
                                ManufactureRoute::Stencil);
    const DensityPair pair(mp.f, mp.g, false);
    const auto rows = pushforward_check(derive_geometry(mp.h_target), pair, {SphericalConvexSet::arc(0.0, pi / 4)});
    CHECK(std::fabs(rows[0].gap) <= 1e-4 * pair.mass_f());
  }
  SUBCASE("whole sphere") {
    const auto t = pushforward_total(constant_pair(SphereGrid::circle(64)));
    CHECK(t.lhs == doctest::Approx(2 * pi));
    CHECK(t.gap == 0.0);
  }
}
