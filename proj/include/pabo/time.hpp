#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace pabo {

// Virtual time in integer nanoseconds. Integer time keeps event ordering
// exact; converting to seconds happens only at the reporting boundary.
using TimeNs = int64_t;

constexpr TimeNs kNsPerSec = 1'000'000'000;
constexpr TimeNs kNsPerMs = 1'000'000;
constexpr TimeNs kNsPerUs = 1'000;

constexpr TimeNs from_seconds(double s) {
    return static_cast<TimeNs>(s * 1e9 + (s >= 0 ? 0.5 : -0.5));
}

constexpr double to_seconds(TimeNs t) { return static_cast<double>(t) / 1e9; }

inline std::string format_time(TimeNs t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9fs", to_seconds(t));
    return buf;
}

}  // namespace pabo
