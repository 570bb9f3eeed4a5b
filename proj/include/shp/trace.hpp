#pragma once

#include <string>
#include <vector>

#include "shp/pdu.hpp"

namespace shp {

enum class TraceFormat { Auto, Pcap, Csv };

// Ordered list of observed frames. Timestamps are non-decreasing and
// relative to the trace epoch.
struct Trace {
    std::vector<PduRecord> records;
    std::string source;          // where it was loaded from, if anywhere
    std::int64_t epoch_us = 0;   // capture wall-clock of the first frame (pcap)

    Microseconds duration_us() const {
        return records.empty() ? 0 : records.back().timestamp - records.front().timestamp;
    }
    // Total overt bits carried, for steganographic-bandwidth accounting.
    std::uint64_t total_bits() const {
        std::uint64_t b = 0;
        for (const auto& r : records) b += std::uint64_t(r.length) * 8u;
        return b;
    }
};

// Reads a classic pcap (little/big endian, us and ns timestamps, Ethernet
// link type) or the CSV trace format. Format Auto picks by file magic.
// pcap timestamps are normalized to the first frame; CSV timestamps are
// taken as-is (the format is already epoch-relative).
// Throws IoError (with byte offset on truncation) / UnsupportedFormat.
Trace load_trace(const std::string& path, TraceFormat format = TraceFormat::Auto);

// CSV trace format: header ts_us,src_mac,dst_mac,ether_type,src_ip,dst_ip,length
void save_trace_csv(const Trace& trace, const std::string& path);

// In-memory parse helpers (used by load_trace and the tests).
Trace parse_pcap(const std::vector<std::uint8_t>& bytes, const std::string& source);
Trace parse_trace_csv(const std::string& text, const std::string& source);
std::string trace_to_csv(const Trace& trace);

} // namespace shp
