#pragma once

#include "geomedian/data_model.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace geomedian::csv {

/// Parsed CSV content before validation into a Sample.
struct Table {
  std::optional<std::vector<std::string>> header;
  std::vector<std::vector<double>> rows;
};

/// Comma-separated reals, one observation per line. The first line is taken
/// as a header when any of its fields fails to parse as a number. Blank lines
/// are skipped. Ragged or non-numeric data lines raise ParseError.
Table read_table(std::istream& in);

Sample read_sample(std::istream& in);
Sample read_sample(const std::filesystem::path& path);

/// Writes one observation per line using shortest round-trip formatting.
void write_matrix(std::ostream& out, const Matrix& values,
                  const std::optional<std::vector<std::string>>& header = std::nullopt);
void write_sample(std::ostream& out, const Sample& sample,
                  const std::optional<std::vector<std::string>>& header = std::nullopt);

/// Formats a double so that parsing it back yields the same value.
std::string format_real(double value);

}  // namespace geomedian::csv
