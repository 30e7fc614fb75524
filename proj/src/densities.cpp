#include "gaussflow/densities.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "gaussflow/error.hpp"
#include "gaussflow/field_io.hpp"
#include "gaussflow/stencils.hpp"

namespace gaussflow {

namespace {

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

Vec3 parse_direction(const std::vector<std::string>& words, std::size_t first,
                     const std::string& text) {
  double c[3] = {0.0, 0.0, 0.0};
  const std::size_t count = words.size() - first;
  if (count < 1 || count > 3) {
    throw Error(ErrorKind::Config, "density '" + text + "' needs a 2 or 3 component direction");
  }
  for (std::size_t k = 0; k < count; ++k) c[k] = parse_double(words[first + k]);
  const Vec3 d{c[0], c[1], c[2]};
  if (!(norm(d) > 0.0)) throw Error(ErrorKind::Config, "density '" + text + "' has zero direction");
  return normalized(d);
}

}  // namespace

DensitySpec DensitySpec::parse(const std::string& text) {
  const auto words = split_words(text);
  if (words.empty()) throw Error(ErrorKind::Config, "empty density specification");
  DensitySpec spec;
  const std::string& kind = words[0];
  try {
    if (kind == "constant") {
      if (words.size() != 2) throw Error(ErrorKind::Config, "usage: constant <c>");
      spec.kind = Kind::Constant;
      spec.param = parse_double(words[1]);
    } else if (kind == "linear" || kind == "exp" || kind == "bump") {
      if (words.size() < 3) throw Error(ErrorKind::Config, "usage: " + kind + " <a> <direction>");
      spec.kind = kind == "linear" ? Kind::Linear : kind == "exp" ? Kind::Exp : Kind::Bump;
      spec.param = parse_double(words[1]);
      spec.direction = parse_direction(words, 2, text);
      if (spec.kind == Kind::Linear && !(std::fabs(spec.param) < 1.0)) {
        throw Error(ErrorKind::Config, "linear density needs |a| < 1");
      }
    } else if (kind == "file") {
      if (words.size() != 2) throw Error(ErrorKind::Config, "usage: file <path>");
      spec.kind = Kind::File;
      spec.path = words[1];
    } else {
      throw Error(ErrorKind::Config, "unknown density kind '" + kind + "'");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw Error(ErrorKind::Config, "density '" + text + "': " + e.what());
  }
  return spec;
}

std::string DensitySpec::to_string() const {
  auto dir = [&] {
    return format_double(direction.x) + " " + format_double(direction.y) + " " +
           format_double(direction.z);
  };
  switch (kind) {
    case Kind::Constant:
      return "constant " + format_double(param);
    case Kind::Linear:
      return "linear " + format_double(param) + " " + dir();
    case Kind::Exp:
      return "exp " + format_double(param) + " " + dir();
    case Kind::Bump:
      return "bump " + format_double(param) + " " + dir();
    case Kind::File:
      return "file " + path.string();
  }
  return {};
}

ScalarField DensitySpec::evaluate(const GridPtr& grid) const {
  switch (kind) {
    case Kind::Constant:
      return ScalarField::constant(grid, param);
    case Kind::Linear:
      return ScalarField::from_function(
          grid, [&](const Vec3& x) { return 1.0 + param * dot(x, direction); });
    case Kind::Exp:
      return ScalarField::from_function(
          grid, [&](const Vec3& x) { return std::exp(param * dot(x, direction)); });
    case Kind::Bump:
      return ScalarField::from_function(
          grid, [&](const Vec3& x) { return std::exp(param * (dot(x, direction) - 1.0)); });
    case Kind::File:
      return read_field_on(path, grid);
  }
  throw Error(ErrorKind::InvalidArgument, "bad density kind");
}

DensityPair::DensityPair(ScalarField f, ScalarField g, bool normalize)
    : f_(std::move(f)), g_(std::move(g)) {
  g_.require_same_grid(f_.grid(), "density pair");
  for (std::size_t i = 0; i < f_.size(); ++i) {
    if (!(f_[i] > 0.0) || !(g_[i] > 0.0)) {
      throw Error(ErrorKind::NonPositiveDensity,
                  "densities must be positive; node " + std::to_string(i) + " has f = " +
                      format_double(f_[i]) + ", g = " + format_double(g_[i]));
    }
  }
  mass_f_ = integrate(f_);
  mass_g_ = integrate(g_);
  if (normalize) {
    g_ = g_.scaled(mass_f_ / mass_g_);
    mass_g_ = integrate(g_);
  }
  g_interp_ = DirectionInterpolator(g_);
  normalized_ = balanced(kNormalizedTolerance);
}

bool DensityPair::balanced(double tol) const {
  return std::fabs(mass_f_ - mass_g_) <= tol * mass_f_;
}

DensityPair make_density_pair(const DensitySpec& spec_f, const DensitySpec& spec_g,
                              const GridPtr& grid, bool normalize) {
  return DensityPair(spec_f.evaluate(grid), spec_g.evaluate(grid), normalize);
}

}  // namespace gaussflow
