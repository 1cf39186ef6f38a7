#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace mst {

/// Shortest fixed-precision decimal forms used in every report so that
/// identical runs produce identical bytes.
std::string fmt_g17(double v);
std::string fmt_g12(double v);

std::string json_escape(const std::string& s);

/// Current UTC time as an ISO-8601 string (omitted under --no-timestamp).
std::string iso8601_utc_now();

// Header block embedded in every output: tool version, the full flag set,
// the seed actually used, and the lambda2 the run is based on.
struct RunMetadata {
  std::string version;
  std::string command_line;
  std::optional<std::uint64_t> seed;
  std::optional<std::complex<double>> lambda2;
  std::optional<std::string> timestamp;
  std::vector<std::pair<std::string, std::string>> extra;
};

/// '# key=value' comment lines, one per field, before the CSV header row.
void write_csv_metadata(std::ostream& os, const RunMetadata& meta);

/// The same fields as a JSON object body (no trailing comma handling needed;
/// call with `first=false` to continue an object).
void write_json_metadata(std::ostream& os, const RunMetadata& meta);

}  // namespace mst
