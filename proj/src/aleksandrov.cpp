#include "gaussflow/aleksandrov.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <ostream>

#include "gaussflow/error.hpp"
#include "gaussflow/field_io.hpp"
#include "gaussflow/summation.hpp"

namespace gaussflow {

namespace {

constexpr double kPi = std::numbers::pi;

void consider(AleksandrovReport& report, AleksandrovRow row) {
  if (report.sets_tested == 0 || row.margin < report.worst_margin) {
    report.worst_margin = row.margin;
    report.worst_set = row.set;
  }
  ++report.sets_tested;
  report.rows.push_back(std::move(row));
}

void check_arcs(const DensityPair& pair, AleksandrovReport& report) {
  const auto& grid = pair.grid();
  const int n = static_cast<int>(grid.size());
  const double d = grid.d_phi();
  const PeriodicCubic f(pair.f().values(), d);
  const PeriodicCubic g(pair.g().values(), d);
  const double mass_f = pair.mass_f();
  report.rows.reserve(static_cast<std::size_t>(n) * (n / 2));
  for (int i = 0; i < n; ++i) {
    const double start = i * d;
    for (int m = 1; 2 * m <= n; ++m) {
      const double length = m * d;
      const auto omega = SphericalConvexSet::arc(start + 0.5 * length, 0.5 * length);
      const auto polar = polar_set(omega);
      const double in_f = f.integral(start, start + length);
      const double c = start + 0.5 * length + kPi;
      const double w = polar.angle();
      const double in_g = w > 0.0 ? g.integral(c - w, c + w) : 0.0;
      consider(report, {omega, in_f, in_g, mass_f - in_f - in_g});
    }
  }
}

void check_caps(const DensityPair& pair, const AleksandrovSettings& s, AleksandrovReport& report) {
  if (s.cap_angles < 1 || s.center_stride < 1) {
    throw Error(ErrorKind::InvalidArgument, "cap sweep needs cap_angles >= 1 and stride >= 1");
  }
  const auto& grid = pair.grid();
  const DirectionInterpolator f(pair.f());
  const auto& g = pair.g_at();
  const double mass_f = pair.mass_f();
  for (std::size_t i = 0; i < grid.size(); i += s.center_stride) {
    const Vec3& c = grid.node(i);
    for (int k = 1; k <= s.cap_angles; ++k) {
      const double opening = k * kPi / (2.0 * s.cap_angles);
      const auto omega = SphericalConvexSet::cap(c, opening);
      const auto polar = polar_set(omega);
      const double in_f = cap_integral(f, c, opening, s.radial_points, s.azimuthal_points);
      const double in_g =
          cap_integral(g, polar.center(), polar.angle(), s.radial_points, s.azimuthal_points);
      consider(report, {omega, in_f, in_g, mass_f - in_f - in_g});
    }
  }
}

template <int Points>
double gauss_cap(const DirectionInterpolator& field, const Vec3& center, double opening,
                 int azimuthal_points) {
  Vec3 t1;
  Vec3 t2;
  tangent_basis(center, t1, t2);
  std::vector<Vec3> ring(azimuthal_points);
  for (int k = 0; k < azimuthal_points; ++k) {
    const double psi = 2.0 * kPi * k / azimuthal_points;
    ring[k] = std::cos(psi) * t1 + std::sin(psi) * t2;
  }
  auto annulus = [&](double gamma) {
    const double cg = std::cos(gamma);
    const double sg = std::sin(gamma);
    if (field.is_constant()) return field.constant_value() * 2.0 * kPi * sg;
    CompensatedSum acc;
    for (const auto& r : ring) acc.add(field(cg * center + sg * r));
    return acc.value() * (2.0 * kPi / azimuthal_points) * sg;
  };
  return boost::math::quadrature::gauss<double, Points>::integrate(annulus, 0.0, opening);
}

}  // namespace

double cap_integral(const DirectionInterpolator& field, const Vec3& center, double opening,
                    int radial_points, int azimuthal_points) {
  if (opening <= 0.0) return 0.0;
  if (azimuthal_points < 4) {
    throw Error(ErrorKind::InvalidArgument, "cap quadrature needs at least 4 azimuthal points");
  }
  if (radial_points <= 8) return gauss_cap<8>(field, center, opening, azimuthal_points);
  if (radial_points <= 16) return gauss_cap<16>(field, center, opening, azimuthal_points);
  if (radial_points <= 32) return gauss_cap<32>(field, center, opening, azimuthal_points);
  return gauss_cap<64>(field, center, opening, azimuthal_points);
}

AleksandrovReport check_aleksandrov(const DensityPair& pair, const AleksandrovSettings& settings) {
  if (!pair.normalized()) {
    throw Error(ErrorKind::Unnormalized,
                "Aleksandrov check needs equal masses; mass_f - mass_g = " +
                    format_double(pair.mass_gap()));
  }
  AleksandrovReport report;
  report.mass_gap = pair.mass_gap();
  if (pair.grid().dim() == 2) {
    check_arcs(pair, report);
  } else {
    check_caps(pair, settings, report);
  }
  return report;
}

void write_aleksandrov_csv(std::ostream& out, const AleksandrovReport& report) {
  out << "set_kind,center,angle,integral_f,integral_g_polar,margin\n";
  for (const auto& row : report.rows) {
    out << (row.set.kind() == SphericalConvexSet::Kind::Arc ? "arc" : "cap") << ','
        << row.set.describe_center() << ',' << format_double(row.set.angle()) << ','
        << format_double(row.integral_f) << ',' << format_double(row.integral_g_polar) << ','
        << format_double(row.margin) << '\n';
  }
}

}  // namespace gaussflow
