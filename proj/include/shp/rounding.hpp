#pragma once

#include <cstdint>

#include "shp/errors.hpp"
#include "shp/pdu.hpp"

namespace shp {

// Truncates a non-negative duration to `places` decimal places of a second.
// places=6 is the identity at microsecond resolution. Truncation (not
// round-half) so there are no tie cases.
inline Microseconds round_epsilon_us(Microseconds us, int places) {
    if (us < 0) throw InvalidParameter("round_epsilon: value must be >= 0");
    if (places < 0 || places > 6) throw InvalidParameter("round_epsilon: places must be in [0,6]");
    static constexpr Microseconds kBucket[7] = {1000000, 100000, 10000, 1000, 100, 10, 1};
    const Microseconds b = kBucket[places];
    return us - us % b;
}

// Convenience wrapper over fractional seconds; input is snapped to the
// microsecond grid first.
inline double round_epsilon(double seconds, int places) {
    return seconds_from_us(round_epsilon_us(us_from_seconds(seconds), places));
}

// ISPN bucketing: interpret the n-th packet as input floor(n / epsilon).
inline std::uint64_t ispn_bucket(std::uint64_t n, std::uint64_t epsilon) {
    if (epsilon == 0) throw InvalidParameter("ispn_bucket: epsilon must be >= 1");
    return n / epsilon;
}

} // namespace shp
