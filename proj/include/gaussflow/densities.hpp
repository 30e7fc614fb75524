#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "gaussflow/interpolation.hpp"
#include "gaussflow/scalar_field.hpp"

namespace gaussflow {

/// A density preset or field file, parsed from text such as
///   constant 1
///   linear 0.5 1 0          (1 + a <x, d>, |a| < 1)
///   exp 0.3 0 0 1           (exp(a <x, d>))
///   bump 400 1 0            (exp(kappa (<x, d> - 1)), a narrow positive bump)
///   file densities/f.txt
/// Direction vectors are normalised; missing trailing components are zero.
struct DensitySpec {
  enum class Kind { Constant, Linear, Exp, Bump, File };

  Kind kind = Kind::Constant;
  double param = 1.0;
  Vec3 direction{1.0, 0.0, 0.0};
  std::filesystem::path path;

  static DensitySpec parse(const std::string& text);
  std::string to_string() const;

  ScalarField evaluate(const GridPtr& grid) const;
};

/// Densities f (on normals x) and g (on radial directions u) with their
/// quadrature masses.
class DensityPair {
 public:
  /// Validates positivity and a shared grid. With `normalize`, g is rescaled by
  /// mass_f / mass_g.
  DensityPair(ScalarField f, ScalarField g, bool normalize);

  const ScalarField& f() const { return f_; }
  const ScalarField& g() const { return g_; }
  const DirectionInterpolator& g_at() const { return g_interp_; }
  const SphereGrid& grid() const { return f_.grid(); }
  const GridPtr& grid_ptr() const { return f_.grid_ptr(); }
  double mass_f() const { return mass_f_; }
  double mass_g() const { return mass_g_; }
  double mass_gap() const { return mass_f_ - mass_g_; }
  bool normalized() const { return normalized_; }

  /// |mass_f - mass_g| <= tol * mass_f.
  bool balanced(double tol) const;

 private:
  ScalarField f_;
  ScalarField g_;
  DirectionInterpolator g_interp_;
  double mass_f_;
  double mass_g_;
  bool normalized_;
};

inline constexpr double kNormalizedTolerance = 1e-12;

DensityPair make_density_pair(const DensitySpec& spec_f, const DensitySpec& spec_g,
                              const GridPtr& grid, bool normalize);

}  // namespace gaussflow
