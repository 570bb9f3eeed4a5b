#include "shp/session.hpp"

#include <algorithm>
#include <queue>

#include <json.hpp>

#include "shp/metrics.hpp"
#include "shp/poi.hpp"
#include "shp/silence.hpp"

namespace shp {

std::string SessionReport::to_json(int indent) const {
    nlohmann::ordered_json j;
    j["pois_observed"] = pois_observed;
    j["pdus_observed"] = pdus_observed;
    j["matches"] = matches;
    j["signals_sent"] = signals_sent;
    j["n_pr"] = n_pr;
    j["n_ecc"] = n_ecc;
    j["fragments_ok"] = fragments_ok;
    j["fragments_corrected"] = fragments_corrected;
    j["fragments_failed"] = fragments_failed;
    j["retries"] = retries;
    j["duplicates"] = duplicates;
    j["missing_fragments"] = missing_fragments;
    j["stop_received"] = stop_received;
    j["sender_complete"] = sender_complete;
    if (mean_distance) j["mean_distance"] = *mean_distance; else j["mean_distance"] = nullptr;
    if (mean_distance_pdus) j["mean_distance_pdus"] = *mean_distance_pdus;
    else j["mean_distance_pdus"] = nullptr;
    j["duration_s"] = duration_s;
    j["legit_bits"] = legit_bits;
    j["message_bits"] = message_bits;
    j["message_bits_transmitted"] = message_bits_transmitted;
    j["message_bits_delivered"] = message_bits_delivered;
    j["message_exact"] = message_exact;
    j["bps"] = bps;
    j["bps_wire"] = bps_wire;
    if (sbw) j["sbw"] = *sbw; else j["sbw"] = nullptr;
    j["caf"] = caf;
    j["phi"] = phi;
    j["fitness"] = fitness;
    return j.dump(indent);
}

namespace {

struct Event {
    Microseconds ts = 0;
    int kind = 0; // 0 = overt PDU, 1 = signal (PDU-before-signal tie-break)
    int node = 0; // 0 = sender, 1 = receiver
    std::uint64_t seq = 0;
    std::size_t index = 0;           // PDU index within the node's stream
    PointerSignal signal;            // kind = 1

    bool operator>(const Event& other) const {
        if (ts != other.ts) return ts > other.ts;
        if (kind != other.kind) return kind > other.kind;
        if (node != other.node) return node > other.node;
        return seq > other.seq;
    }
};

// POI flags for a stream: classify, then silence-filter the POI substream.
std::vector<bool> poi_flags(const std::vector<PduRecord>& stream, const ChannelConfig& cfg) {
    const Ipv4Subnet subnet = cfg.subnet_prefix();
    std::vector<bool> flags(stream.size(), false);
    std::vector<PduRecord> pois;
    std::vector<std::size_t> poi_idx;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (classify_poi(stream[i], cfg.poi_filter, subnet)) {
            pois.push_back(stream[i]);
            poi_idx.push_back(i);
        }
    }
    const auto kept = apply_silence_interval(pois, cfg.silence_us());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pois.size() && k < kept.size(); ++i) {
        if (pois[i].timestamp == kept[k].timestamp && pois[i].seq_index == kept[k].seq_index) {
            flags[poi_idx[i]] = true;
            ++k;
        }
    }
    return flags;
}

} // namespace

SessionResult run_session(const ChannelConfig& config, const Trace& trace,
                          const ImpairmentConfig& sender_impair,
                          const ImpairmentConfig& receiver_impair, const Bits& message,
                          const SessionOptions& options) {
    config.validate();
    sender_impair.validate();
    receiver_impair.validate();
    if (message.empty()) throw InvalidParameter("run_session: empty message");
    if (trace.records.empty()) throw InvalidParameter("run_session: empty trace");

    const Trace sender_view = impair(trace, sender_impair);
    const Trace receiver_view = impair(trace, receiver_impair);
    const auto sender_poi = poi_flags(sender_view.records, config);
    const auto receiver_poi = poi_flags(receiver_view.records, config);

    SenderOptions sopt;
    sopt.processing_delay_us = options.processing_delay_us;
    sopt.start_repeats = options.start_repeats;
    Sender sender(config, message, sopt);
    Receiver receiver(config);

    SessionResult result;
    auto log = [&](Microseconds ts, const char* node, const char* event, std::string detail) {
        if (options.log_events) result.events.push_back({ts, node, event, std::move(detail)});
    };

    const MacAddr cs_mac{{0x02, 0x53, 0x48, 0x50, 0x00, 0x01}};
    const Ipv4Subnet subnet = config.subnet_prefix();
    const IpAddr cs_ip = IpAddr::from_v4(subnet.network | (~subnet.mask() - 1));

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue;
    std::uint64_t seq = 0;
    for (std::size_t i = 0; i < sender_view.records.size(); ++i)
        queue.push({sender_view.records[i].timestamp, 0, 0, seq++, i, {}});
    for (std::size_t i = 0; i < receiver_view.records.size(); ++i)
        queue.push({receiver_view.records[i].timestamp, 0, 1, seq++, i, {}});

    std::vector<PduRecord> signal_frames;
    std::uint64_t signal_index = 0; // per-emission impairment substream index
    auto dispatch_signals = [&](const std::vector<PointerSignal>& sigs) {
        for (const auto& sig : sigs) {
            log(sig.emit_ts, "cs", "signal_tx", to_string(sig.type));
            if (options.build_wire_trace)
                signal_frames.push_back(signal_frame(
                    sig, config.rehash_bits, config.oood_bits, cs_mac, cs_ip));
            Microseconds arrival = 0;
            if (impair_signal(sig.emit_ts, receiver_impair, signal_index++, arrival)) {
                Event ev;
                ev.ts = arrival;
                ev.kind = 1;
                ev.node = 1;
                ev.seq = seq++;
                ev.signal = sig;
                queue.push(ev);
            } else {
                log(sig.emit_ts, "cs", "signal_lost", to_string(sig.type));
            }
        }
    };

    while (!queue.empty()) {
        Event ev = queue.top();
        queue.pop();
        if (ev.node == 0 && ev.kind == 0) {
            const PduRecord& pdu = sender_view.records[ev.index];
            if (!sender.started()) dispatch_signals(sender.begin(pdu.timestamp));
            dispatch_signals(sender.on_pdu(pdu, sender_poi[ev.index]));
        } else if (ev.node == 1 && ev.kind == 0) {
            receiver.on_pdu(receiver_view.records[ev.index], receiver_poi[ev.index]);
        } else if (ev.node == 1 && ev.kind == 1) {
            log(ev.ts, "cr", "signal_rx", to_string(ev.signal.type));
            const SignalOutcome outcome = receiver.on_signal(ev.signal, ev.ts);
            if (outcome.kind == SignalOutcome::Kind::Stored)
                log(ev.ts, "cr", "fragment",
                    "index=" + std::to_string(*outcome.fragment_index));
            if (outcome.retry) {
                // RETRY rides the covert channel back; the return path is
                // delivered reliably at emission time (only the forward path
                // is impaired in this model).
                Event back;
                back.ts = outcome.retry->emit_ts;
                back.kind = 1;
                back.node = 0;
                back.seq = seq++;
                back.signal = *outcome.retry;
                queue.push(back);
                log(ev.ts, "cr", "retry", "");
            }
        } else { // RETRY arriving at the sender
            sender.on_retry();
            log(ev.ts, "cs", "retry_rx", "");
        }
    }

    result.received = receiver.finalize();

    // Wire trace: overt frames (unimpaired timeline) merged with signals;
    // at equal timestamps the overt frame precedes its pointer.
    if (options.build_wire_trace) {
        auto& wt = result.wire_trace;
        wt.source = trace.source + "+shp";
        wt.records = trace.records;
        wt.records.insert(wt.records.end(), signal_frames.begin(), signal_frames.end());
        std::stable_sort(wt.records.begin(), wt.records.end(),
                         [](const PduRecord& a, const PduRecord& b) {
                             return a.timestamp < b.timestamp;
                         });
        for (std::size_t i = 0; i < wt.records.size(); ++i) wt.records[i].seq_index = i;
    }

    // ---- report ----
    SessionReport rep;
    const SenderStats& ss = sender.stats();
    const ReceiverStats& rs = receiver.stats();
    rep.pois_observed = ss.pois_observed;
    rep.pdus_observed = ss.pdus_seen;
    rep.matches = ss.matches;
    for (const auto& [type, count] : ss.signals_sent) rep.signals_sent[to_string(type)] = count;
    if (rs.retries_sent || rs.fragments_failed)
        rep.signals_sent["retry"] = rs.retries_sent + rs.fragments_failed;
    rep.n_pr = rs.data_received;
    rep.n_ecc = rs.fragments_ok + rs.fragments_corrected;
    rep.fragments_ok = rs.fragments_ok;
    rep.fragments_corrected = rs.fragments_corrected;
    rep.fragments_failed = rs.fragments_failed;
    rep.retries = rs.retries_sent;
    rep.duplicates = rs.duplicates;
    rep.missing_fragments = result.received.missing_fragments.size();
    rep.stop_received = rs.stop_received;
    rep.sender_complete = sender.message_complete();
    if (ss.matches > 0) {
        rep.mean_distance = static_cast<double>(ss.pois_observed) / ss.matches;
        rep.mean_distance_pdus = static_cast<double>(ss.pdus_seen) / ss.matches;
    }
    rep.duration_s = seconds_from_us(trace.duration_us());
    rep.legit_bits = trace.total_bits();
    rep.message_bits = message.size();
    rep.message_bits_transmitted =
        rep.n_ecc * static_cast<std::uint64_t>(config.bitlength);

    // Delivered = payload positions (header excluded) received and correct.
    const Bits truth = frame_payload(message);
    const auto& got = result.received;
    std::uint64_t delivered = 0;
    for (std::size_t i = 32; i < truth.size() && i < got.payload.size(); ++i)
        if (got.known[i] && got.payload[i] == truth[i]) ++delivered;
    rep.message_bits_delivered = delivered;
    rep.message_exact = got.message && *got.message == message;

    rep.caf = metrics::caf(config.bitlength, config.rehash_bits, config.oood_bits);
    rep.bps = rep.duration_s > 0 ? static_cast<double>(delivered) / rep.duration_s : 0.0;
    rep.bps_wire = rep.duration_s > 0
                       ? static_cast<double>(rep.message_bits_transmitted) / rep.duration_s
                       : 0.0;
    rep.sbw = rep.mean_distance ? metrics::sbw(rep.legit_bits, *rep.mean_distance) : std::nullopt;
    rep.phi = rep.pois_observed == 0
                  ? 0.0
                  : metrics::phi_ratio(static_cast<double>(rep.message_bits_transmitted) /
                                           static_cast<double>(rep.pois_observed),
                                       config.bitlength);
    rep.fitness = metrics::fitness(rep.caf, rep.bps, rep.n_ecc, rep.n_pr);
    result.report = rep;
    return result;
}

} // namespace shp
