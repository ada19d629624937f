#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oilcast {

// 17 significant digits, scientific: enough to round-trip any double exactly
// through decimal text.
std::string format_double(double v);

// Shortest decimal that round-trips exactly; for human-facing files.
std::string format_compact(double v);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

// FNV-1a 64-bit, used as the expert-file integrity checksum.
std::uint64_t fnv1a64(std::string_view data);

} // namespace oilcast
