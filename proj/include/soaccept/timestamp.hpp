#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace soaccept {

// UTC instant with millisecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// Parses "YYYY-MM-DDTHH:MM:SS[.fff][Z]" as UTC. Fractions longer than three
// digits are truncated to milliseconds. Returns nullopt on any syntax or
// range error.
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SS.fffZ".
std::string format_timestamp(Timestamp ts);

int year_of(Timestamp ts);

inline std::int64_t millis_between(Timestamp from, Timestamp to) {
  return (to - from).count();
}

}  // namespace soaccept
