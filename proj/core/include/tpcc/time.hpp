#pragma once

#include <cmath>
#include <cstdint>

namespace tpcc {

// Simulation time in microseconds. All components share one time base so
// virtual-clock runs are bit-reproducible.
using Time = std::int64_t;

constexpr Time kMicrosPerSecond = 1'000'000;

inline Time seconds_to_time(double s) {
  return static_cast<Time>(std::llround(s * kMicrosPerSecond));
}

inline double time_to_seconds(Time t) {
  return static_cast<double>(t) / kMicrosPerSecond;
}

inline Time millis_to_time(std::int64_t ms) { return ms * 1000; }

}  // namespace tpcc
