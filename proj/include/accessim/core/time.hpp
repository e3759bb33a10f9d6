#pragma once

#include <cstdint>

namespace accessim {

// Simulation time and durations in integer microseconds. Integer ticks keep
// long runs drift-free and make event ordering exact.
using SimTime = std::int64_t;

constexpr SimTime kMicrosecond = 1;
constexpr SimTime kMillisecond = 1000;
constexpr SimTime kSecond = 1000000;

constexpr SimTime micros(std::int64_t us) { return us; }
constexpr SimTime millis(std::int64_t ms) { return ms * kMillisecond; }
constexpr SimTime seconds(std::int64_t s) { return s * kSecond; }

// Config files carry seconds as decimals; round half away from zero.
constexpr SimTime from_seconds(double s)
{
    const double scaled = s * 1e6;
    return static_cast<SimTime>(scaled >= 0 ? scaled + 0.5 : scaled - 0.5);
}

constexpr double to_seconds(SimTime t) { return static_cast<double>(t) / 1e6; }

} // namespace accessim
