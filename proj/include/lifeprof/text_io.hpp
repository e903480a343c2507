#pragma once

// Small helpers shared by every delimited-text reader and writer.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace lifeprof {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Fixed-point text with `digits` decimals, for human-readable tables.
std::string format_fixed(double value, int digits);

/// Strict parsers: the whole field must be consumed. Return false on failure.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, std::int64_t& out);

std::vector<std::string_view> split(std::string_view line, char delimiter);

std::string_view trim(std::string_view text);

/// Reads one line, stripping a trailing '\r'. Returns false at end of stream.
bool read_line(std::istream& in, std::string& line);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace lifeprof
