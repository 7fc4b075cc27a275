#pragma once

#include "dks/dataset.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace dks {

enum class MissingPolicy { Error, ForwardFill };

struct CsvOptions {
  bool timestamp_column = false;  // first column holds timestamps, not a variable
  MissingPolicy missing = MissingPolicy::Error;
};

/// A dataset plus the per-row timestamps (empty when the file has none).
struct TimeSeries {
  Dataset dataset;
  std::vector<std::string> timestamps;
};

/// Comma-separated, header row required. Empty, NA and NaN cells count as
/// missing. Errors are ParseError with the 1-based file row and column.
TimeSeries parse_csv(std::istream& in, const CsvOptions& options = {});
TimeSeries ingest_csv(const std::filesystem::path& path, const CsvOptions& options = {});

}  // namespace dks
