#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace astroturf {

using Timestamp = std::chrono::sys_seconds;
using std::chrono::seconds;

inline constexpr std::int64_t kSecondsPerHour = 3600;
inline constexpr std::int64_t kSecondsPerDay = 86400;

// Accepts the platform format "Wed Oct 10 20:19:24 +0000 2018" and ISO-8601
// ("2018-10-10T20:19:24Z", optional fractional seconds and +hh:mm offset).
// The result is normalized to UTC. Returns nullopt on anything else.
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Platform format, always "+0000".
std::string format_timestamp(Timestamp t);

// "2018-10-10T20:19:24Z"
std::string format_iso(Timestamp t);

// "2018-10-10"
std::string format_day(Timestamp t);

// "2018-10"
std::string format_month(Timestamp t);

inline std::int64_t to_unix(Timestamp t) { return t.time_since_epoch().count(); }
inline Timestamp from_unix(std::int64_t s) { return Timestamp{seconds{s}}; }

// UTC midnight at or before t.
Timestamp floor_day(Timestamp t);

}  // namespace astroturf
