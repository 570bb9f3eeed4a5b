#pragma once

#include <cstdint>

#include "shp/trace.hpp"

namespace shp {

// Link/observation impairment model: independent per-PDU loss, a constant
// delay, and a zero-mean uniform jitter of the given half-width. Jitter can
// reorder frames; the output is re-sorted by timestamp.
//
// Randomness is keyed (seed, stream, index) via shp::stream_draw; streams:
//   0 = PDU loss       1 = PDU jitter
//   2 = signal loss    3 = signal jitter   (used by the session layer)
struct ImpairmentConfig {
    Microseconds delay_us = 0;
    Microseconds jitter_us = 0; // half-width, >= 0
    double loss = 0.0;          // in [0, 1]
    std::uint64_t seed = 0;

    bool is_identity() const { return delay_us == 0 && jitter_us == 0 && loss == 0.0; }
    void validate() const;
};

Trace impair(const Trace& trace, const ImpairmentConfig& cfg);

// Single-event impairment used for covert signals. Returns false when the
// signal is lost, otherwise sets the perturbed arrival time.
bool impair_signal(Microseconds emit_ts, const ImpairmentConfig& cfg, std::uint64_t signal_index,
                   Microseconds& arrival_ts);

} // namespace shp
