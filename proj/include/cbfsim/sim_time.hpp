#pragma once

#include <cstdint>
#include <limits>

namespace cbfsim {

// Simulation clock: integer microseconds since run start. All protocol
// constants are given in milliseconds and convert exactly.
using TimeUs = std::int64_t;

constexpr TimeUs time_never = std::numeric_limits<TimeUs>::max();

constexpr TimeUs millis(std::int64_t ms) { return ms * 1000; }
constexpr TimeUs seconds(std::int64_t s) { return s * 1'000'000; }

constexpr double to_ms(TimeUs t) { return static_cast<double>(t) / 1000.0; }
constexpr double to_s(TimeUs t) { return static_cast<double>(t) / 1e6; }

}  // namespace cbfsim
