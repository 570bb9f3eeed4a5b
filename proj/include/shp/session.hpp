#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shp/bits.hpp"
#include "shp/config.hpp"
#include "shp/impair.hpp"
#include "shp/protocol.hpp"
#include "shp/trace.hpp"

namespace shp {

struct SessionOptions {
    Microseconds processing_delay_us = 0; // added to every signal emission
    int start_repeats = 4;
    bool build_wire_trace = false; // overt + signal frames, sender timeline
    bool log_events = false;
};

// Per-run statistics. Serialized as JSON with stable key order so identical
// runs produce byte-identical reports.
struct SessionReport {
    // channel/observation
    std::uint64_t pois_observed = 0; // sender-side match attempts
    std::uint64_t pdus_observed = 0;
    std::uint64_t matches = 0;
    std::map<std::string, std::uint64_t> signals_sent; // by type, RETRY = receiver
    std::uint64_t n_pr = 0;  // DATA signals received
    std::uint64_t n_ecc = 0; // accepted fragments (ok + corrected)
    std::uint64_t fragments_ok = 0;
    std::uint64_t fragments_corrected = 0;
    std::uint64_t fragments_failed = 0;
    std::uint64_t retries = 0;    // watchdog mismatches
    std::uint64_t duplicates = 0;
    std::uint64_t missing_fragments = 0;
    bool stop_received = false;
    bool sender_complete = false;
    // distances/timing
    std::optional<double> mean_distance;      // POIs per match
    std::optional<double> mean_distance_pdus; // PDUs per match, when distinct
    double duration_s = 0;
    std::uint64_t legit_bits = 0;
    // delivery
    std::uint64_t message_bits = 0;             // ground-truth message length
    std::uint64_t message_bits_transmitted = 0; // accepted wire fragment bits
    std::uint64_t message_bits_delivered = 0;   // payload bits correct vs truth
    bool message_exact = false;
    // derived metrics
    double bps = 0;      // delivered payload bits / duration
    double bps_wire = 0; // accepted wire fragment bits / duration
    std::optional<double> sbw;
    double caf = 0;
    double phi = 0; // measured bits/attempt over n/2^n
    double fitness = 0;

    std::string to_json(int indent = 2) const;
};

struct EventLogRow {
    Microseconds ts = 0;
    std::string node;   // "cs" | "cr"
    std::string event;  // poi, match, signal_tx, signal_rx, fragment, retry, drop
    std::string detail;
};

struct SessionResult {
    SessionReport report;
    ReceivedMessage received;
    Trace wire_trace; // populated when requested
    std::vector<EventLogRow> events;
};

// Runs one deterministic trace-driven transmission: the sender observes
// trace∘sender_impair, the receiver trace∘receiver_impair plus the emitted
// signals (signal events traverse the receiver-side impairment as well;
// RETRY feedback is delivered reliably). Throws ConfigError up front on
// invalid configuration.
SessionResult run_session(const ChannelConfig& config, const Trace& trace,
                          const ImpairmentConfig& sender_impair,
                          const ImpairmentConfig& receiver_impair, const Bits& message,
                          const SessionOptions& options = {});

} // namespace shp
