#include "gaussflow/field_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gaussflow/error.hpp"

namespace gaussflow {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error(ErrorKind::Io, "cannot format number");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorKind::InvalidArgument, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

void write_field(std::ostream& out, const ScalarField& field,
                 const std::vector<std::string>& comments) {
  const auto& grid = field.grid();
  out << "sphere-field v1 dim=" << grid.dim() << " res=" << grid.resolution_string() << '\n';
  for (const auto& c : comments) out << "# " << c << '\n';
  for (double v : field.values()) out << format_double(v) << '\n';
}

void write_field(const std::filesystem::path& path, const ScalarField& field,
                 const std::vector<std::string>& comments) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_field(out, field, comments);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

FieldFile read_field_file(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::Io, "empty field file");
  std::istringstream hs(header);
  std::string magic;
  std::string version;
  std::string dim_tok;
  std::string res_tok;
  hs >> magic >> version >> dim_tok >> res_tok;
  if (magic != "sphere-field" || version != "v1" || dim_tok.rfind("dim=", 0) != 0 ||
      res_tok.rfind("res=", 0) != 0) {
    throw Error(ErrorKind::Io, "bad field header: '" + header + "'");
  }
  int dim = 0;
  try {
    dim = std::stoi(dim_tok.substr(4));
  } catch (const std::exception&) {
    throw Error(ErrorKind::Io, "bad dim in field header: '" + header + "'");
  }
  auto grid = SphereGrid::build(dim, SphereGrid::parse_resolution(dim, res_tok.substr(4)));
  std::vector<double> values;
  std::vector<std::string> comments;
  values.reserve(grid->size());
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto start = line.find_first_not_of(" \t", 1);
      comments.push_back(start == std::string::npos ? std::string() : line.substr(start));
      continue;
    }
    try {
      values.push_back(parse_double(line));
    } catch (const Error&) {
      throw Error(ErrorKind::Io, "line " + std::to_string(line_no) + ": not a number");
    }
  }
  if (values.size() != grid->size()) {
    throw Error(ErrorKind::GridMismatch, "field file has " + std::to_string(values.size()) +
                                             " values, header implies " +
                                             std::to_string(grid->size()));
  }
  return {ScalarField(grid, std::move(values)), std::move(comments)};
}

FieldFile read_field_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  return read_field_file(in);
}

ScalarField read_field(std::istream& in) { return read_field_file(in).field; }

ScalarField read_field(const std::filesystem::path& path) { return read_field_file(path).field; }

ScalarField read_field_on(const std::filesystem::path& path, const GridPtr& grid) {
  auto field = read_field(path);
  field.require_same_grid(*grid, path.string().c_str());
  return ScalarField(grid, std::vector<double>(field.values().begin(), field.values().end()));
}

}  // namespace gaussflow
