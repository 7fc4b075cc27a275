#include "dks/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

namespace dks {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line, std::size_t row) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quote on row " + std::to_string(row), row, 0);
  fields.push_back(was_quoted ? field : trim(field));
  return fields;
}

bool is_missing(const std::string& cell) {
  std::string lower(cell);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower.empty() || lower == "na" || lower == "nan" || lower == "null";
}

std::optional<double> parse_number(const std::string& cell) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string location(std::size_t row, std::size_t column) {
  return "row " + std::to_string(row) + ", column " + std::to_string(column);
}

}  // namespace

TimeSeries parse_csv(std::istream& in, const CsvOptions& options) {
  std::string line;
  std::size_t row = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++row;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (row == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError("empty input: header row required", 0, 0);
  std::vector<std::string> header = split_fields(line, row);
  const std::size_t offset = options.timestamp_column ? 1 : 0;
  if (header.size() <= offset) throw ParseError("header has no variable columns", row, 0);
  std::vector<std::string> names(header.begin() + static_cast<long>(offset), header.end());
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j].empty()) throw ParseError("empty variable name at " + location(row, j + offset + 1), row, j + offset + 1);
    for (std::size_t i = 0; i < j; ++i) {
      if (names[i] == names[j]) {
        throw ParseError("duplicate header '" + names[j] + "' at " + location(row, j + offset + 1), row, j + offset + 1);
      }
    }
  }

  const std::size_t d = names.size();
  std::vector<double> values;
  std::vector<std::string> timestamps;
  std::vector<double> previous;
  while (next_line()) {
    const auto fields = split_fields(line, row);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()) +
                           " on row " + std::to_string(row),
                       row, 0);
    }
    if (options.timestamp_column) timestamps.push_back(fields[0]);
    std::vector<double> current(d);
    for (std::size_t j = 0; j < d; ++j) {
      const std::string& cell = fields[j + offset];
      const std::size_t column = j + offset + 1;
      if (is_missing(cell)) {
        if (options.missing == MissingPolicy::ForwardFill && !previous.empty()) {
          current[j] = previous[j];
          continue;
        }
        throw ParseError("missing value at " + location(row, column) +
                             (options.missing == MissingPolicy::ForwardFill ? " (nothing to forward-fill from)" : ""),
                         row, column);
      }
      const auto number = parse_number(cell);
      if (!number) throw ParseError("non-numeric value '" + cell + "' at " + location(row, column), row, column);
      current[j] = *number;
    }
    values.insert(values.end(), current.begin(), current.end());
    previous = std::move(current);
  }

  const Index n = static_cast<Index>(values.size() / std::max<std::size_t>(d, 1));
  Matrix data(n, static_cast<Index>(d));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < static_cast<Index>(d); ++j) data(i, j) = values[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)];
  return TimeSeries{Dataset(std::move(names), std::move(data)), std::move(timestamps)};
}

TimeSeries ingest_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  return parse_csv(in, options);
}

}  // namespace dks
