#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rutcast {

// Bad input, schema, or configuration. CLI exit code 2.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric or runtime failure during an otherwise valid run. CLI exit code 3.
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form (std::to_chars); locale-independent.
std::string format_double(double v);

// Strict locale-independent parses; `context` names the offending location.
double parse_double(std::string_view s, const std::string& context);
long parse_long(std::string_view s, const std::string& context);

std::string_view trim(std::string_view s);

// Write via temp file + rename so re-runs and crashes never leave partial files.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace rutcast
