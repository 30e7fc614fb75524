#include "gaussflow/presets.hpp"

#include <cmath>
#include <sstream>

#include "gaussflow/error.hpp"
#include "gaussflow/field_io.hpp"

namespace gaussflow {

namespace {

constexpr double kDefaultCubeEps = 0.25;

std::vector<std::string> words_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> w;
  std::string s;
  while (in >> s) w.push_back(s);
  return w;
}

}  // namespace

bool BodyPreset::is_preset(const std::string& text) {
  const auto w = words_of(text);
  if (w.empty()) return false;
  return w[0] == "sphere" || w[0] == "ellipse" || w[0] == "ellipsoid" || w[0] == "smooth_cube";
}

BodyPreset BodyPreset::parse(const std::string& text) {
  const auto w = words_of(text);
  if (w.empty()) throw Error(ErrorKind::Config, "empty body specification");
  BodyPreset p;
  std::vector<double> v;
  try {
    for (std::size_t i = 1; i < w.size(); ++i) v.push_back(parse_double(w[i]));
  } catch (const Error&) {
    throw Error(ErrorKind::Config, "body '" + text + "': parameters must be numbers");
  }
  auto need = [&](std::size_t lo, std::size_t hi, const char* usage) {
    if (v.size() < lo || v.size() > hi) throw Error(ErrorKind::Config, std::string("usage: ") + usage);
  };
  if (w[0] == "sphere") {
    need(0, 1, "sphere [r]");
    p.kind = Kind::Sphere;
    p.params = v.empty() ? std::vector<double>{1.0} : v;
  } else if (w[0] == "ellipse") {
    need(2, 2, "ellipse <a> <b>");
    p.kind = Kind::Ellipse;
    p.params = v;
  } else if (w[0] == "ellipsoid") {
    need(3, 3, "ellipsoid <a> <b> <c>");
    p.kind = Kind::Ellipsoid;
    p.params = v;
  } else if (w[0] == "smooth_cube") {
    need(1, 2, "smooth_cube <p> [eps]");
    p.kind = Kind::SmoothCube;
    p.params = {v[0], v.size() > 1 ? v[1] : kDefaultCubeEps};
    const double e = p.params[0];
    if (e < 2.0 || std::fmod(e, 2.0) != 0.0) {
      throw Error(ErrorKind::Config, "smooth_cube exponent must be an even integer");
    }
    if (!(p.params[1] > 0.0)) throw Error(ErrorKind::Config, "smooth_cube eps must be positive");
    return p;
  } else {
    throw Error(ErrorKind::Config, "unknown body preset '" + w[0] + "'");
  }
  for (double x : p.params) {
    if (!(x > 0.0)) throw Error(ErrorKind::Config, "body '" + text + "' needs positive sizes");
  }
  return p;
}

std::string BodyPreset::to_string() const {
  std::string s;
  switch (kind) {
    case Kind::Sphere:
      s = "sphere";
      break;
    case Kind::Ellipse:
      s = "ellipse";
      break;
    case Kind::Ellipsoid:
      s = "ellipsoid";
      break;
    case Kind::SmoothCube:
      s = "smooth_cube";
      break;
  }
  for (double p : params) s += " " + format_double(p);
  return s;
}

int BodyPreset::required_dim() const {
  switch (kind) {
    case Kind::Ellipse:
      return 2;
    case Kind::Ellipsoid:
      return 3;
    default:
      return 0;
  }
}

double BodyPreset::support(const Vec3& y) const {
  switch (kind) {
    case Kind::Sphere:
      return params[0] * norm(y);
    case Kind::Ellipse:
      return std::hypot(params[0] * y.x, params[1] * y.y);
    case Kind::Ellipsoid: {
      const double a = params[0] * y.x;
      const double b = params[1] * y.y;
      const double c = params[2] * y.z;
      return std::sqrt(a * a + b * b + c * c);
    }
    case Kind::SmoothCube: {
      const double p = params[0];
      const double s = std::pow(std::fabs(y.x), p) + std::pow(std::fabs(y.y), p) +
                       std::pow(std::fabs(y.z), p);
      return std::pow(s, 1.0 / p) + params[1] * norm(y);
    }
  }
  return 0.0;
}

ScalarField BodyPreset::evaluate(const GridPtr& grid) const {
  const int need = required_dim();
  if (need != 0 && need != grid->dim()) {
    throw Error(ErrorKind::Config, to_string() + " needs dim = " + std::to_string(need));
  }
  // Nodes are unit vectors; r |x| would round away from r.
  if (kind == Kind::Sphere) return ScalarField::constant(grid, params[0]);
  return ScalarField::from_function(grid, [&](const Vec3& x) { return support(x); });
}

}  // namespace gaussflow
