#include "gaussflow/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "gaussflow/densities.hpp"
#include "gaussflow/error.hpp"
#include "gaussflow/field_io.hpp"
#include "gaussflow/presets.hpp"

namespace gaussflow {

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw Error(ErrorKind::Config, "expected true or false, got '" + v + "'");
}

double parse_number(const std::string& v) {
  try {
    return parse_double(v);
  } catch (const Error&) {
    throw Error(ErrorKind::Config, "expected a number, got '" + v + "'");
  }
}

long parse_integer(const std::string& v) {
  std::size_t used = 0;
  long out = 0;
  try {
    out = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) {
    throw Error(ErrorKind::Config, "expected an integer, got '" + v + "'");
  }
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::string s = v;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string resolution_text(int dim, Resolution r) {
  return dim == 3 ? std::to_string(r.n_theta) + "x" + std::to_string(r.n_phi)
                  : std::to_string(r.n_phi);
}

Resolution parse_res(int dim, const std::string& v) {
  try {
    return SphereGrid::parse_resolution(dim, v);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
}

using Setter = std::function<void(SolverConfig&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& setters() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"grid",
       {
           {"dim", [](SolverConfig& c, const std::string& v) { c.dim = static_cast<int>(parse_integer(v)); }},
           {"resolution", [](SolverConfig& c, const std::string& v) { c.resolution = parse_res(c.dim, v); }},
           {"resolutions",
            [](SolverConfig& c, const std::string& v) {
              c.resolutions.clear();
              for (const auto& w : split_list(v)) c.resolutions.push_back(parse_res(c.dim, w));
            }},
       }},
      {"densities",
       {
           {"f", [](SolverConfig& c, const std::string& v) { c.f = v; }},
           {"g", [](SolverConfig& c, const std::string& v) { c.g = v; }},
           {"normalize", [](SolverConfig& c, const std::string& v) { c.normalize = parse_bool(v); }},
           {"target", [](SolverConfig& c, const std::string& v) { c.target = v; }},
           {"manufacture_route", [](SolverConfig& c, const std::string& v) { c.manufacture_route = v; }},
           {"aleksandrov_check", [](SolverConfig& c, const std::string& v) { c.aleksandrov_check = parse_bool(v); }},
           {"aleksandrov_cap_angles",
            [](SolverConfig& c, const std::string& v) { c.aleksandrov.cap_angles = static_cast<int>(parse_integer(v)); }},
           {"aleksandrov_center_stride",
            [](SolverConfig& c, const std::string& v) { c.aleksandrov.center_stride = static_cast<int>(parse_integer(v)); }},
       }},
      {"initial",
       {
           {"body", [](SolverConfig& c, const std::string& v) { c.body = v; }},
           {"match_vg", [](SolverConfig& c, const std::string& v) { c.match_vg = v; }},
       }},
      {"stepping",
       {
           {"dt_initial", [](SolverConfig& c, const std::string& v) { c.run.stepping.dt_initial = parse_number(v); }},
           {"dt_min", [](SolverConfig& c, const std::string& v) { c.run.stepping.dt_min = parse_number(v); }},
           {"dt_growth_bound", [](SolverConfig& c, const std::string& v) { c.run.stepping.dt_growth_bound = parse_number(v); }},
           {"dt_safety", [](SolverConfig& c, const std::string& v) { c.run.stepping.dt_safety = parse_number(v); }},
           {"step_tol", [](SolverConfig& c, const std::string& v) { c.run.stepping.step_tol = parse_number(v); }},
           {"j_allowance", [](SolverConfig& c, const std::string& v) { c.run.stepping.j_allowance = parse_number(v); }},
           {"polar_filter", [](SolverConfig& c, const std::string& v) { c.run.stepping.polar_filter = parse_bool(v); }},
           {"fixed_dt", [](SolverConfig& c, const std::string& v) { c.run.stepping.fixed_dt = parse_bool(v); }},
       }},
      {"stopping",
       {
           {"max_time", [](SolverConfig& c, const std::string& v) { c.run.max_time = parse_number(v); }},
           {"max_steps", [](SolverConfig& c, const std::string& v) { c.run.max_steps = parse_integer(v); }},
           {"residual_sup_tol", [](SolverConfig& c, const std::string& v) { c.run.residual_sup_tol = parse_number(v); }},
           {"convexity_floor", [](SolverConfig& c, const std::string& v) { c.run.stepping.convexity_floor = parse_number(v); }},
           {"mass_balance_tol", [](SolverConfig& c, const std::string& v) { c.run.mass_balance_tol = parse_number(v); }},
       }},
      {"output",
       {
           {"directory", [](SolverConfig& c, const std::string& v) { c.directory = v; }},
           {"trace", [](SolverConfig& c, const std::string& v) { c.trace = v; }},
           {"final", [](SolverConfig& c, const std::string& v) { c.final_field = v; }},
           {"checkpoint", [](SolverConfig& c, const std::string& v) { c.checkpoint = v; }},
           {"snapshot_interval", [](SolverConfig& c, const std::string& v) { c.run.snapshot_interval = parse_integer(v); }},
           {"manufactured", [](SolverConfig& c, const std::string& v) { c.manufactured = v; }},
           {"margins", [](SolverConfig& c, const std::string& v) { c.margins = v; }},
           {"operators", [](SolverConfig& c, const std::string& v) { c.operators = v; }},
           {"manifest", [](SolverConfig& c, const std::string& v) { c.manifest = v; }},
       }},
  };
  return table;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::Config, message);
}

void validate(const SolverConfig& c) {
  require(c.dim == 2 || c.dim == 3, "[grid] dim must be 2 or 3");
  c.run.stepping.validate();
  require(c.run.residual_sup_tol > 0.0, "residual_sup_tol must be positive");
  require(c.run.max_time > 0.0, "max_time must be positive");
  require(c.run.max_steps > 0, "max_steps must be positive");
  require(c.run.mass_balance_tol > 0.0, "mass_balance_tol must be positive");
  require(c.run.snapshot_interval >= 0, "snapshot_interval must be non-negative");
  require(c.aleksandrov.cap_angles >= 1, "aleksandrov_cap_angles must be at least 1");
  require(c.aleksandrov.center_stride >= 1, "aleksandrov_center_stride must be at least 1");
  require(c.manufacture_route == "oracle" || c.manufacture_route == "stencil",
          "manufacture_route must be 'oracle' or 'stencil'");
  if (c.f_is_manufactured()) {
    require(!c.target.empty(), "f = manufactured needs [densities] target");
  } else {
    DensitySpec::parse(c.f);
  }
  DensitySpec::parse(c.g);
  if (!c.target.empty()) {
    const auto t = BodyPreset::parse(c.target);
    require(t.required_dim() == 0 || t.required_dim() == c.dim,
            "target '" + c.target + "' does not fit dim = " + std::to_string(c.dim));
  }
  const auto body = trim(c.body);
  if (body.rfind("file ", 0) != 0 && body.rfind("checkpoint ", 0) != 0) {
    const auto b = BodyPreset::parse(body);
    require(b.required_dim() == 0 || b.required_dim() == c.dim,
            "body '" + c.body + "' does not fit dim = " + std::to_string(c.dim));
  }
  if (c.match_vg != "none" && c.match_vg != "target") {
    parse_number(c.match_vg);
  }
  if (c.match_vg == "target") require(!c.target.empty(), "match_vg = target needs a target");
}

}  // namespace

std::filesystem::path SolverConfig::input_path(const std::filesystem::path& p) const {
  if (p.is_absolute()) return p;
  return source.parent_path() / p;
}

std::filesystem::path SolverConfig::output_dir() const {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return input_path(directory);
}

std::filesystem::path SolverConfig::output_path(const std::string& name) const {
  return output_dir() / name;
}

std::vector<std::filesystem::path> SolverConfig::input_files() const {
  std::vector<std::filesystem::path> files;
  auto add_spec = [&](const std::string& text) {
    std::istringstream in(text);
    std::string kind;
    std::string path;
    in >> kind >> path;
    if ((kind == "file" || kind == "checkpoint") && !path.empty()) files.push_back(input_path(path));
  };
  if (!f_is_manufactured()) add_spec(f);
  add_spec(g);
  add_spec(body);
  return files;
}

std::map<std::string, std::map<std::string, std::string>> SolverConfig::resolved() const {
  std::map<std::string, std::map<std::string, std::string>> r;
  const auto& s = run.stepping;
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  r["grid"]["dim"] = std::to_string(dim);
  if (resolution) r["grid"]["resolution"] = resolution_text(dim, *resolution);
  if (!resolutions.empty()) {
    std::string list;
    for (const auto& res : resolutions) list += (list.empty() ? "" : ",") + resolution_text(dim, res);
    r["grid"]["resolutions"] = list;
  }
  r["densities"]["f"] = f;
  r["densities"]["g"] = g;
  r["densities"]["normalize"] = b(normalize_pair());
  if (!target.empty()) r["densities"]["target"] = target;
  r["densities"]["manufacture_route"] = manufacture_route;
  r["densities"]["aleksandrov_check"] = b(aleksandrov_check);
  r["densities"]["aleksandrov_cap_angles"] = std::to_string(aleksandrov.cap_angles);
  r["densities"]["aleksandrov_center_stride"] = std::to_string(aleksandrov.center_stride);
  r["initial"]["body"] = body;
  r["initial"]["match_vg"] = match_vg;
  r["stepping"]["dt_initial"] = format_double(s.dt_initial);
  r["stepping"]["dt_min"] = format_double(s.dt_min);
  r["stepping"]["dt_growth_bound"] = format_double(s.dt_growth_bound);
  r["stepping"]["dt_safety"] = format_double(s.dt_safety);
  r["stepping"]["step_tol"] = format_double(s.step_tol);
  r["stepping"]["j_allowance"] = format_double(s.j_allowance);
  r["stepping"]["polar_filter"] = b(s.polar_filter);
  r["stepping"]["fixed_dt"] = b(s.fixed_dt);
  r["stopping"]["max_time"] = format_double(run.max_time);
  r["stopping"]["max_steps"] = std::to_string(run.max_steps);
  r["stopping"]["residual_sup_tol"] = format_double(run.residual_sup_tol);
  r["stopping"]["convexity_floor"] = format_double(s.convexity_floor);
  r["stopping"]["mass_balance_tol"] = format_double(run.mass_balance_tol);
  r["output"]["directory"] = output_dir().string();
  r["output"]["trace"] = trace;
  r["output"]["final"] = final_field;
  r["output"]["checkpoint"] = checkpoint;
  r["output"]["snapshot_interval"] = std::to_string(run.snapshot_interval);
  r["output"]["manufactured"] = manufactured;
  r["output"]["margins"] = margins;
  r["output"]["operators"] = operators;
  r["output"]["manifest"] = manifest;
  return r;
}

GridPtr SolverConfig::grid() const {
  if (!resolution) throw Error(ErrorKind::Config, "[grid] resolution is required");
  return SphereGrid::build(dim, *resolution);
}

SolverConfig parse_config_text(const std::string& text, const std::filesystem::path& source) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  const auto& table = setters();
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string where = source.string() + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::Config, where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!table.contains(section)) {
        throw Error(ErrorKind::Config, where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config, where + "expected 'key = value'");
    }
    if (section.empty()) throw Error(ErrorKind::Config, where + "key outside of any section");
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string::npos) value = trim(value.substr(0, hash));
    if (!table.at(section).contains(key)) {
      throw Error(ErrorKind::Config, where + "unknown key '" + key + "' in [" + section + "]");
    }
    for (const auto& e : entries) {
      if (e.section == section && e.key == key) {
        throw Error(ErrorKind::Config, where + "duplicate key '" + key + "' in [" + section + "]");
      }
    }
    entries.push_back({section, key, value, line_no});
  }

  SolverConfig cfg;
  cfg.source = source;
  // dim first: resolutions are parsed against it.
  std::stable_partition(entries.begin(), entries.end(),
                        [](const Entry& e) { return e.section == "grid" && e.key == "dim"; });
  for (const auto& e : entries) {
    try {
      table.at(e.section).at(e.key)(cfg, e.value);
    } catch (const Error& err) {
      throw Error(ErrorKind::Config, source.string() + ":" + std::to_string(e.line) + ": " +
                                         e.section + "." + e.key + ": " + err.what());
    }
  }
  try {
    validate(cfg);
  } catch (const Error& err) {
    throw Error(ErrorKind::Config, source.string() + ": " + err.what());
  }
  return cfg;
}

SolverConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace gaussflow
