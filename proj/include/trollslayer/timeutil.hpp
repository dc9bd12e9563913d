#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace trollslayer {

using Timestamp = std::chrono::sys_seconds;

// Strict `YYYY-MM-DDTHH:MM:SSZ`. Throws DataError otherwise.
Timestamp parse_timestamp(const std::string& text);
std::string format_timestamp(Timestamp ts);

// Whole days elapsed from `from` to `to`, rounded toward negative infinity.
std::int64_t floor_days_between(Timestamp from, Timestamp to);

}  // namespace trollslayer
