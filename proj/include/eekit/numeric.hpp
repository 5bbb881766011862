#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace eekit {

// Shortest round-trip decimal representation (always '.', never locale).
std::string format_double(double v);

// Strict parsers; the whole string must be consumed. Throw IoError.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

// FNV-1a over raw bytes; used to fingerprint configs and plans.
std::uint64_t fnv1a64(std::string_view bytes);

// "fnv1a64:<16 hex digits>"
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace eekit
