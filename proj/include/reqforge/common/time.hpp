#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <string_view>

namespace reqforge {

/// Wall-clock instant at millisecond resolution, the precision sessions persist.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Clock = std::function<Timestamp()>;

Timestamp now_ms();

/// ISO-8601 UTC, e.g. "2026-10-14T08:30:00.125Z".
std::string format_timestamp(Timestamp t);

/// Inverse of format_timestamp. Throws std::invalid_argument.
Timestamp parse_timestamp(std::string_view text);

}  // namespace reqforge
