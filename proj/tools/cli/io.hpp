#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mmgsep/errors.hpp"
#include "mmgsep/signal_core.hpp"

namespace mmgsep::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Unreadable or malformed input files (exit code 2).
class InputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Allowed deviation of a time stamp from the uniform grid, in seconds.
inline constexpr double kTimeJitterTolerance = 1e-6;

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Reads a `time_s,value` CSV. The sampling rate comes from the time column,
// which must be uniform within kTimeJitterTolerance.
TimeSeries read_csv(const fs::path& path);

// Writes a `time_s,value` CSV with time i / fs, LF line endings.
void write_csv(const fs::path& path, const TimeSeries& x);

json read_json(const fs::path& path);

// Pretty-printed JSON followed by a newline.
void write_json(const fs::path& path, const json& j);

// Lowercase hex SHA-256 of the file contents.
std::string sha256_file(const fs::path& path);

}  // namespace mmgsep::cli
