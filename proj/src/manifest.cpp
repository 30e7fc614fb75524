#include "gaussflow/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <json.hpp>

#include "gaussflow/error.hpp"
#include "gaussflow/field_io.hpp"

namespace gaussflow {

namespace {

using Json = nlohmann::ordered_json;

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error(ErrorKind::Io, "sha256 unavailable");
    }
  }
  void update(const char* data, std::size_t n) { EVP_DigestUpdate(ctx_.get(), data, n); }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md.data(), &len);
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 15];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

// Non-finite numbers become strings so the manifest stays valid JSON.
Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Json row_json(const TraceRow& r) {
  const auto& m = r.m;
  const auto& b = m.bounds;
  return Json{{"step", r.step},           {"t", number(r.t)},
              {"dt", number(r.dt)},       {"J", number(m.J)},
              {"Vg", number(m.Vg)},       {"residual_sup", number(m.residual_sup)},
              {"residual_l2", number(m.residual_l2)},
              {"h_min", number(b.h_min)}, {"h_max", number(b.h_max)},
              {"rho_min", number(b.rho_min)}, {"rho_max", number(b.rho_max)},
              {"gradh_max", number(b.gradh_max)}, {"K_max", number(b.K_max)},
              {"kappa_min", number(b.kappa_min)}, {"rejections", r.rejections}};
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  Sha256 sha;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    sha.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return sha.hex();
}

std::string sha256_text(const std::string& text) {
  Sha256 sha;
  sha.update(text.data(), text.size());
  return sha.hex();
}

void RunManifest::record_inputs() {
  inputs.clear();
  if (!config_path.empty()) {
    try {
      config_sha256 = sha256_file(config_path);
    } catch (const Error&) {
      config_sha256.clear();
    }
  }
  if (!config) return;
  for (const auto& p : config->input_files()) {
    InputDigest d{p, {}};
    try {
      d.sha256 = sha256_file(p);
    } catch (const Error&) {
    }
    inputs.push_back(d);
  }
}

std::string RunManifest::to_json() const {
  Json j;
  j["tool"] = "gaussflow";
  j["version"] = GAUSSFLOW_VERSION;
  j["command"] = command;
  j["config_path"] = config_path.string();
  j["config_sha256"] = config_sha256;
  if (config) {
    Json c = Json::object();
    for (const auto& [section, keys] : config->resolved()) {
      for (const auto& [k, v] : keys) c[section][k] = v;
    }
    j["config"] = c;
  } else {
    j["config"] = nullptr;
  }
  Json in = Json::array();
  for (const auto& d : inputs) {
    in.push_back({{"path", d.path.string()},
                  {"sha256", d.sha256.empty() ? Json(nullptr) : Json(d.sha256)}});
  }
  j["inputs"] = in;
  j["termination"] = termination;
  j["exit_code"] = exit_code;
  j["message"] = message;
  j["wall_seconds"] = wall_seconds;
  j["failure_row"] = failure_row ? row_json(*failure_row) : Json(nullptr);
  Json s = Json::object();
  for (const auto& [k, v] : summary) s[k] = number(v);
  j["summary"] = s;
  return j.dump(2) + "\n";
}

void RunManifest::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << to_json();
}

}  // namespace gaussflow
