#pragma once

#include <vector>

#include "shp/errors.hpp"
#include "shp/pdu.hpp"

namespace shp {

// Drops every POI that has another POI strictly closer than phi before or
// after it in the original stream, so that only isolated POIs remain and
// both agents can compute pointers without racing a follow-up frame.
// phi = 0 is the identity. Input must be time-ordered.
inline std::vector<PduRecord> apply_silence_interval(const std::vector<PduRecord>& stream,
                                                     Microseconds phi_us) {
    if (phi_us < 0) throw InvalidParameter("silence interval must be >= 0");
    for (std::size_t i = 1; i < stream.size(); ++i)
        if (stream[i].timestamp < stream[i - 1].timestamp)
            throw InputError("silence filter requires a time-ordered stream");
    if (phi_us == 0) return stream;

    std::vector<PduRecord> out;
    out.reserve(stream.size());
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const bool near_prev = i > 0 && stream[i].timestamp - stream[i - 1].timestamp < phi_us;
        const bool near_next =
            i + 1 < stream.size() && stream[i + 1].timestamp - stream[i].timestamp < phi_us;
        if (!near_prev && !near_next) out.push_back(stream[i]);
    }
    return out;
}

} // namespace shp
