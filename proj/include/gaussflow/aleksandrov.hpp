#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "gaussflow/densities.hpp"
#include "gaussflow/spherical_sets.hpp"

namespace gaussflow {

struct AleksandrovSettings {
  /// S^2: openings k pi / (2 m) for k = 1..m.
  int cap_angles = 8;
  /// S^2: caps are centred on every `center_stride`-th node.
  int center_stride = 1;
  /// S^2 cap quadrature: Gauss-Legendre points in the polar angle and
  /// trapezoid points in the azimuth around the cap center.
  int radial_points = 16;
  int azimuthal_points = 64;
};

struct AleksandrovRow {
  SphericalConvexSet set;
  double integral_f;
  double integral_g_polar;
  double margin;
};

struct AleksandrovReport {
  double mass_gap = 0.0;
  double worst_margin = 0.0;
  std::optional<SphericalConvexSet> worst_set;
  std::size_t sets_tested = 0;
  std::vector<AleksandrovRow> rows;

  bool margins_positive() const { return worst_margin > 0.0; }
};

/// Margins mass_f - int_omega f - int_{omega*} g over arcs with endpoints on
/// grid nodes (circle) or over caps centred on grid nodes (S^2).
/// Throws Unnormalized unless the pair is normalized.
AleksandrovReport check_aleksandrov(const DensityPair& pair,
                                    const AleksandrovSettings& settings = {});

/// Integral over a cap of the bilinear interpolant of `field`.
double cap_integral(const DirectionInterpolator& field, const Vec3& center, double opening,
                    int radial_points, int azimuthal_points);

/// CSV with header set_kind,center,angle,integral_f,integral_g_polar,margin.
void write_aleksandrov_csv(std::ostream& out, const AleksandrovReport& report);

}  // namespace gaussflow
