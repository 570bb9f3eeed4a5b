#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "shp/bits.hpp"
#include "shp/config.hpp"
#include "shp/history.hpp"
#include "shp/signal.hpp"

namespace shp {

// Message framing shared by both ends: a 32-bit big-endian length header
// (message bits, pre-expansion) precedes the message so the receiver can
// strip tail padding. inline-hamming+ expands header+message before the
// stream is cut into bitlength-sized wire fragments.
Bits frame_payload(const Bits& message);
Bits wire_bits_for(const Bits& message, const ChannelConfig& cfg);

struct SenderOptions {
    Microseconds processing_delay_us = 0; // added to every signal emission
    int start_repeats = 4;                // handshake re-emissions of START
};

struct SenderStats {
    std::uint64_t pdus_seen = 0;      // all frames fed while transmitting
    std::uint64_t pois_observed = 0;  // filtered POIs = match attempts
    std::uint64_t matches = 0;        // DATA emissions
    std::uint64_t retries_honored = 0;
    std::map<SignalType, std::uint64_t> signals_sent;
};

// Covert sender. Feed it the time-ordered, silence-filtered view of its own
// link; it emits pointer signals whenever a deskewed input value matches a
// pending fragment. One instance is single-owner.
class Sender {
public:
    Sender(const ChannelConfig& cfg, const Bits& message, SenderOptions opt = {});

    // Emits START at ts. The PDU sharing this timestamp is treated as
    // pre-START on both ends (the event loop orders PDUs before signals), so
    // the next PDU fed is skipped from history once.
    std::vector<PointerSignal> begin(Microseconds ts);

    // poi: frame passed the POI and silence filters. Returns signals emitted
    // at pdu.timestamp + processing_delay.
    std::vector<PointerSignal> on_pdu(const PduRecord& pdu, bool poi);

    // RETRY observed: re-open the most recently emitted fragment.
    void on_retry();

    bool started() const { return state_.started; }
    bool message_complete() const { return fragments_sent_ == fragments_.size(); }
    bool stopped() const { return stopped_; }
    const SenderStats& stats() const { return stats_; }
    std::size_t fragment_count() const { return fragments_.size(); }
    int match_width() const { return n_cmp_; }
    const HistoryState& history() const { return state_; }

private:
    std::optional<PointerSignal> try_match(const PduRecord& pdu);
    void mark_sent(std::size_t idx);

    ChannelConfig cfg_;
    SenderOptions opt_;
    HistoryState state_;
    std::vector<Bits> fragments_; // n-bit wire fragments
    std::vector<Bits> targets_;   // per-variant encoded match targets
    std::vector<bool> sent_;
    std::size_t fragments_sent_ = 0;
    std::size_t base_ = 0; // lowest unsent fragment index
    std::optional<std::size_t> last_emitted_;
    int n_cmp_ = 0;
    int handshake_left_ = 0;
    bool skip_next_pdu_ = false;
    bool stopped_ = false;
    SenderStats stats_;
};

struct ReceiverStats {
    std::uint64_t pdus_seen = 0;
    std::uint64_t pois_observed = 0;
    std::uint64_t data_received = 0; // N_PR
    std::uint64_t fragments_ok = 0;
    std::uint64_t fragments_corrected = 0;
    std::uint64_t fragments_failed = 0; // undecodable or no input value
    std::uint64_t retries_sent = 0;     // watchdog mismatches
    std::uint64_t duplicates = 0;
    std::uint64_t pre_start_signals = 0;
    bool stop_received = false;
};

// Outcome of feeding one signal to the receiver.
struct SignalOutcome {
    enum class Kind {
        Ignored,      // duplicate START, post-STOP traffic, pre-START drop
        Started,
        Stored,       // fragment accepted (ok or corrected)
        Rejected,     // watchdog mismatch or undecodable -> retry emitted
        Stopped,
    };
    Kind kind = Kind::Ignored;
    std::optional<PointerSignal> retry; // present when a RETRY must be sent
    std::optional<std::size_t> fragment_index;
};

// Reassembled view of the received wire stream.
struct ReceivedMessage {
    Bits payload;                    // header+message payload bits (defaults 0)
    std::vector<std::uint8_t> known; // 1 where the bit was actually received
    std::optional<Bits> message;     // set when fully reconstructed
    std::vector<std::size_t> missing_fragments;
    std::uint64_t inline_codewords_ok = 0;
    std::uint64_t inline_codewords_corrected = 0;
    std::uint64_t inline_codewords_failed = 0;
};

class Receiver {
public:
    explicit Receiver(const ChannelConfig& cfg);

    void on_pdu(const PduRecord& pdu, bool poi);

    // strict: throw ProtocolError on DATA before START (direct-API
    // contract); the simulator uses tolerant mode and counts the drop.
    SignalOutcome on_signal(const PointerSignal& sig, Microseconds arrival_ts,
                            bool strict = false);

    ReceivedMessage finalize() const;

    bool started() const { return state_.started; }
    const ReceiverStats& stats() const { return stats_; }
    const HistoryState& history() const { return state_; }
    const std::map<std::size_t, Bits>& fragments() const { return fragments_; }

private:
    std::size_t place_index(std::uint32_t oood_seq) const;

    ChannelConfig cfg_;
    HistoryState state_;
    std::map<std::size_t, Bits> fragments_; // index -> n data bits
    std::size_t base_ = 0;                  // lowest index not yet received
    std::optional<InputValue> last_poi_value_;
    std::uint32_t last_poi_subchannel_ = 0;
    int n_cmp_ = 0;
    ReceiverStats stats_;
};

} // namespace shp
