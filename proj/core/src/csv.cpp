#include "geomedian/csv.hpp"

#include "geomedian/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace geomedian::csv {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_real(std::string_view field) {
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

Table read_table(std::istream& in) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    std::vector<double> values;
    values.reserve(fields.size());
    bool numeric = true;
    for (const auto field : fields) {
      const auto parsed = parse_real(field);
      if (!parsed) {
        numeric = false;
        break;
      }
      values.push_back(*parsed);
    }
    if (first) {
      first = false;
      width = fields.size();
      if (!numeric) {
        table.header.emplace(fields.begin(), fields.end());
        continue;
      }
    }
    if (!numeric) {
      throw Error(ErrorCode::ParseError,
                  "non-numeric field on line " + std::to_string(line_no));
    }
    if (values.size() != width) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + " has " +
                                             std::to_string(values.size()) + " fields, expected " +
                                             std::to_string(width));
    }
    table.rows.push_back(std::move(values));
  }
  return table;
}

Sample read_sample(std::istream& in) { return validate_sample(read_table(in).rows); }

Sample read_sample(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_sample(in);
}

std::string format_real(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buffer, ptr);
}

void write_matrix(std::ostream& out, const Matrix& values,
                  const std::optional<std::vector<std::string>>& header) {
  if (header) {
    for (std::size_t j = 0; j < header->size(); ++j) {
      if (j) out << ',';
      out << (*header)[j];
    }
    out << '\n';
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out << ',';
      out << format_real(values(i, j));
    }
    out << '\n';
  }
}

void write_sample(std::ostream& out, const Sample& sample,
                  const std::optional<std::vector<std::string>>& header) {
  write_matrix(out, sample.values(), header);
}

}  // namespace geomedian::csv
