#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xling {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);
// Fixed-point with the given number of decimals, for reports.
std::string format_fixed(double value, int decimals);

// Parses a complete token as a finite double; nullopt otherwise.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

std::vector<std::string_view> split_whitespace(std::string_view line);
std::string_view trim(std::string_view s);

// Whole file split on '\n'; a trailing '\r' is stripped from each line and a
// final empty line after the last newline is dropped. Throws DataError if the
// file cannot be read.
std::vector<std::string> read_lines(const std::string& path);
// Throws DataError on any I/O failure (including an empty path).
void write_text_file(const std::string& path, const std::string& content);

}  // namespace xling
