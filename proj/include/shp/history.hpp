#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>

#include "shp/config.hpp"
#include "shp/pdu.hpp"

namespace shp {

// One derived input sample: a duration in microseconds for timing sources or
// a count for ICPN/ISPN, plus its epsilon-rounded form and subchannel id.
struct InputValue {
    InputSource source = InputSource::Isd;
    std::int64_t raw = 0;     // us (timing) or count
    std::int64_t rounded = 0; // us after rounding, or bucket index
    std::uint32_t subchannel = 0;

    bool operator==(const InputValue&) const = default;
};

// Per-agent observation history. Counters and anchors live in the owner's
// own time domain (sender: POI timestamps / signal emissions; receiver:
// arrival timestamps), which is what makes relative sources delay-invariant.
struct HistoryState {
    bool started = false;
    Microseconds connection_start_ts = 0;
    Microseconds last_signal_ts = 0;
    std::uint64_t poi_count_since_start = 0;
    std::uint64_t poi_count_since_signal = 0;
    std::unordered_map<std::uint32_t, Microseconds> per_subchannel_last_ts;
    Microseconds last_global_poi_ts = -1; // -1: none yet (baseipd derivation)

    void on_start(Microseconds ts) {
        started = true;
        connection_start_ts = ts;
        last_signal_ts = ts;
        poi_count_since_start = 0;
        poi_count_since_signal = 0;
        per_subchannel_last_ts.clear();
        last_global_poi_ts = -1;
    }
    // DATA signal observed (emitted or received): resynchronize the
    // signal-relative anchors.
    void on_signal(Microseconds ts) {
        last_signal_ts = ts;
        poi_count_since_signal = 0;
    }
    // Record a processed POI after its input value has been derived.
    void record_poi(const PduRecord& pdu, std::uint32_t subchannel) {
        ++poi_count_since_start;
        ++poi_count_since_signal;
        per_subchannel_last_ts[subchannel] = pdu.timestamp;
        last_global_poi_ts = pdu.timestamp;
    }
};

// Deterministic subchannel id of a PDU in [0, 2^bits). iphash falls back to
// the source MAC when the frame carries no source IP. baseipd hashes the
// epsilon-rounded global IPD preceding this PDU (0 for the first POI).
std::uint32_t subchannel_of(const PduRecord& pdu, const ChannelConfig& cfg,
                            Microseconds prev_global_poi_ts);

// Input value a POI produces given the pre-POI history. sample_ts is the
// timing sample for the signal-relative sources; the sender passes the POI
// timestamp (its prospective pointer is anchored in the same domain), the
// default. Returns nullopt when the source yields no value yet (IPD with no
// predecessor in the PDU's subchannel). Throws ProtocolError when a
// signal-relative source is used before START.
std::optional<InputValue> input_value(const HistoryState& state, const PduRecord& pdu,
                                      const ChannelConfig& cfg,
                                      std::optional<Microseconds> sample_ts = std::nullopt);

// Receiver-side value derived from a pointer arrival ("direct" POI
// reference): the arrival itself is the timing sample for ISD/ICD/timestamp,
// counters supply ICPN/ISPN, and IPD reuses the cached value of the most
// recently observed POI (a pointer arrival cannot reproduce a POI-to-POI
// delta by itself).
std::optional<InputValue> pointer_input_value(const HistoryState& state, Microseconds arrival_ts,
                                              const ChannelConfig& cfg,
                                              const std::optional<InputValue>& last_poi_value,
                                              std::uint32_t last_poi_subchannel);

} // namespace shp
