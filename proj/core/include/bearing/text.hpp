#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the line-delimited formats (manifest, plans,
// CSV reports). Number formatting goes through std::to_chars so that every
// artifact is byte-stable across runs and locales.
namespace bearing::text {

/// Shortest representation that round-trips to the same double.
std::string format_double(double value);

/// Fixed-point formatting with the given number of decimals.
std::string format_fixed(double value, int decimals);

std::vector<std::string> split(std::string_view s, char delim);
std::string_view trim(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Numeric-aware ordering: "2" < "10", "KA4" < "KA15".
bool natural_less(std::string_view a, std::string_view b);

/// CSV field with minimal quoting (only when it contains , " CR or LF).
std::string csv_field(std::string_view s);

/// Parses one CSV line honouring double-quoted fields.
std::vector<std::string> parse_csv_line(std::string_view line);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t v);

}  // namespace bearing::text
