#include "shp/history.hpp"

#include "shp/errors.hpp"
#include "shp/hashing.hpp"
#include "shp/rounding.hpp"

namespace shp {

namespace {

std::vector<std::uint8_t> i64be_bytes(std::int64_t x) {
    std::vector<std::uint8_t> v(8);
    auto u = static_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) v[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(u >> (56 - 8 * i));
    return v;
}

bool is_relative(InputSource s) {
    switch (s) {
    case InputSource::Isd:
    case InputSource::Icd:
    case InputSource::Icpn:
    case InputSource::Ispn: return true;
    default: return false;
    }
}

} // namespace

std::uint32_t subchannel_of(const PduRecord& pdu, const ChannelConfig& cfg,
                            Microseconds prev_global_poi_ts) {
    if (cfg.subchanneling_mode == SubchannelMode::None || cfg.subchanneling_bits == 0) return 0;
    switch (cfg.subchanneling_mode) {
    case SubchannelMode::IpHash: {
        std::vector<std::uint8_t> payload;
        if (pdu.src_ip.len > 0)
            payload.assign(pdu.src_ip.bytes.begin(), pdu.src_ip.bytes.begin() + pdu.src_ip.len);
        else
            payload.assign(pdu.src_mac.bytes.begin(), pdu.src_mac.bytes.end());
        return subchannel_hash(payload, cfg.shared_key, cfg.subchanneling_bits);
    }
    case SubchannelMode::ClockHash: {
        const auto rounded = round_epsilon_us(pdu.timestamp, cfg.epsilon_places);
        return subchannel_hash(i64be_bytes(rounded), cfg.shared_key, cfg.subchanneling_bits);
    }
    default: { // BaseIpd
        const Microseconds ipd = prev_global_poi_ts < 0 ? 0 : pdu.timestamp - prev_global_poi_ts;
        const auto rounded = round_epsilon_us(ipd, cfg.epsilon_places);
        return subchannel_hash(i64be_bytes(rounded), cfg.shared_key, cfg.subchanneling_bits);
    }
    }
}

std::optional<InputValue> input_value(const HistoryState& state, const PduRecord& pdu,
                                      const ChannelConfig& cfg,
                                      std::optional<Microseconds> sample_ts) {
    if (is_relative(cfg.inputsource) && !state.started)
        throw ProtocolError("relative input source used before START");

    const Microseconds sample = sample_ts.value_or(pdu.timestamp);
    const std::uint32_t sc = subchannel_of(pdu, cfg, state.last_global_poi_ts);

    InputValue v;
    v.source = cfg.inputsource;
    v.subchannel = sc;

    switch (cfg.inputsource) {
    case InputSource::Ipd: {
        auto it = state.per_subchannel_last_ts.find(sc);
        if (it == state.per_subchannel_last_ts.end()) return std::nullopt;
        v.raw = pdu.timestamp - it->second;
        v.rounded = round_epsilon_us(v.raw, cfg.epsilon_places);
        return v;
    }
    case InputSource::Icd:
        v.raw = sample - state.connection_start_ts;
        v.rounded = round_epsilon_us(v.raw, cfg.epsilon_places);
        return v;
    case InputSource::Isd:
        v.raw = sample - state.last_signal_ts;
        v.rounded = round_epsilon_us(v.raw, cfg.epsilon_places);
        return v;
    case InputSource::Timestamp:
        v.raw = pdu.timestamp;
        v.rounded = round_epsilon_us(v.raw, cfg.epsilon_places);
        return v;
    case InputSource::Icpn:
        v.raw = static_cast<std::int64_t>(state.poi_count_since_start + 1);
        v.rounded = v.raw;
        return v;
    default: // Ispn
        v.raw = static_cast<std::int64_t>(state.poi_count_since_signal + 1);
        v.rounded = static_cast<std::int64_t>(ispn_bucket(
            static_cast<std::uint64_t>(v.raw), static_cast<std::uint64_t>(cfg.epsilon_places)));
        return v;
    }
}

std::optional<InputValue> pointer_input_value(const HistoryState& state, Microseconds arrival_ts,
                                              const ChannelConfig& cfg,
                                              const std::optional<InputValue>& last_poi_value,
                                              std::uint32_t last_poi_subchannel) {
    if (!state.started) throw ProtocolError("pointer observed before START");

    InputValue v;
    v.source = cfg.inputsource;
    v.subchannel = last_poi_subchannel;

    switch (cfg.inputsource) {
    case InputSource::Ipd: return last_poi_value;
    case InputSource::Icd:
        v.raw = arrival_ts - state.connection_start_ts;
        break;
    case InputSource::Isd:
        v.raw = arrival_ts - state.last_signal_ts;
        break;
    case InputSource::Timestamp:
        v.raw = arrival_ts;
        break;
    case InputSource::Icpn:
        v.raw = static_cast<std::int64_t>(state.poi_count_since_start);
        v.rounded = v.raw;
        return v;
    default: // Ispn
        v.raw = static_cast<std::int64_t>(state.poi_count_since_signal);
        v.rounded = static_cast<std::int64_t>(ispn_bucket(
            static_cast<std::uint64_t>(v.raw), static_cast<std::uint64_t>(cfg.epsilon_places)));
        return v;
    }
    if (v.raw < 0) return std::nullopt; // reordered arrival before its anchor
    v.rounded = round_epsilon_us(v.raw, cfg.epsilon_places);
    return v;
}

} // namespace shp
