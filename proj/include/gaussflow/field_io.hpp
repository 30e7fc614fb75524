#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaussflow/scalar_field.hpp"

namespace gaussflow {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

double parse_double(std::string_view text);

/// Text format:
///   sphere-field v1 dim=<2|3> res=<N|NthetaxNphi>
///   [# comment lines]
///   one value per line in node order
void write_field(std::ostream& out, const ScalarField& field,
                 const std::vector<std::string>& comments = {});
void write_field(const std::filesystem::path& path, const ScalarField& field,
                 const std::vector<std::string>& comments = {});

struct FieldFile {
  ScalarField field;
  std::vector<std::string> comments;  // text after "# ", in file order
};

FieldFile read_field_file(std::istream& in);
FieldFile read_field_file(const std::filesystem::path& path);

ScalarField read_field(std::istream& in);
ScalarField read_field(const std::filesystem::path& path);

/// Reads a field and checks it matches `grid`; the returned field shares `grid`.
ScalarField read_field_on(const std::filesystem::path& path, const GridPtr& grid);

}  // namespace gaussflow
