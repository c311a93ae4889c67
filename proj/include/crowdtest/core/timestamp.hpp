#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace crowdtest {

/// UTC instant at second resolution.
using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SS` followed by `Z`, `+00:00` or nothing.
/// Throws std::invalid_argument on malformed input or a non-UTC offset.
Timestamp parse_timestamp(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_timestamp(Timestamp ts);

}  // namespace crowdtest
