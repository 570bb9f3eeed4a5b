#include "shp/trace.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "shp/errors.hpp"

namespace shp {

namespace {

constexpr std::uint32_t kMagicUsLE = 0xa1b2c3d4;
constexpr std::uint32_t kMagicUsBE = 0xd4c3b2a1;
constexpr std::uint32_t kMagicNsLE = 0xa1b23c4d;
constexpr std::uint32_t kMagicNsBE = 0x4d3cb2a1;

std::uint32_t rd32(const std::uint8_t* p, bool swap) {
    std::uint32_t v;
    std::memcpy(&v, p, 4);
    if (swap) v = __builtin_bswap32(v);
    return v;
}
std::uint16_t rd16(const std::uint8_t* p, bool swap) {
    std::uint16_t v;
    std::memcpy(&v, p, 2);
    if (swap) v = __builtin_bswap16(v);
    return v;
}
std::uint16_t rd16be(const std::uint8_t* p) {
    return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trace file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

} // namespace

Trace parse_pcap(const std::vector<std::uint8_t>& bytes, const std::string& source) {
    Trace trace;
    trace.source = source;
    if (bytes.empty()) return trace; // empty file -> empty trace
    if (bytes.size() < 24) throw IoError("truncated pcap global header", 0);

    std::uint32_t magic;
    std::memcpy(&magic, bytes.data(), 4);
    bool swap = false, nanos = false;
    switch (magic) {
    case kMagicUsLE: break;
    case kMagicUsBE: swap = true; break;
    case kMagicNsLE: nanos = true; break;
    case kMagicNsBE: swap = true; nanos = true; break;
    default: throw UnsupportedFormat("not a classic pcap file: " + source);
    }
    const std::uint32_t linktype = rd32(bytes.data() + 20, swap);
    if (linktype != 1) // DLT_EN10MB
        throw UnsupportedFormat("unsupported pcap link type " + std::to_string(linktype));

    std::size_t off = 24;
    bool have_epoch = false;
    std::int64_t epoch = 0;
    std::uint64_t seq = 0;
    while (off < bytes.size()) {
        if (off + 16 > bytes.size()) throw IoError("truncated pcap record header",
                                                   static_cast<std::int64_t>(off));
        const std::uint32_t ts_sec = rd32(bytes.data() + off, swap);
        const std::uint32_t ts_sub = rd32(bytes.data() + off + 4, swap);
        const std::uint32_t incl = rd32(bytes.data() + off + 8, swap);
        off += 16;
        if (off + incl > bytes.size())
            throw IoError("truncated pcap packet data", static_cast<std::int64_t>(off));
        const std::uint8_t* f = bytes.data() + off;

        PduRecord pdu;
        const std::int64_t abs_us =
            std::int64_t(ts_sec) * 1000000 + (nanos ? std::int64_t(ts_sub) / 1000
                                                    : std::int64_t(ts_sub));
        if (!have_epoch) {
            epoch = abs_us;
            have_epoch = true;
        }
        pdu.timestamp = abs_us - epoch;
        pdu.length = incl;
        pdu.seq_index = seq++;

        if (incl >= 14) {
            std::copy(f, f + 6, pdu.dst_mac.bytes.begin());
            std::copy(f + 6, f + 12, pdu.src_mac.bytes.begin());
            std::size_t eth_off = 12;
            std::uint16_t ethertype = rd16be(f + eth_off);
            if (ethertype == 0x8100 && incl >= 18) { // VLAN tag
                eth_off += 4;
                ethertype = rd16be(f + eth_off);
            }
            const std::uint8_t* payload = f + eth_off + 2;
            const std::size_t plen = incl - (eth_off + 2);
            if (ethertype == 0x0806) {
                pdu.ether_type = EtherType::Arp;
                if (plen >= 28) { // spa at 14, tpa at 24
                    pdu.src_ip.len = 4;
                    std::copy(payload + 14, payload + 18, pdu.src_ip.bytes.begin());
                    pdu.dst_ip.len = 4;
                    std::copy(payload + 24, payload + 28, pdu.dst_ip.bytes.begin());
                }
            } else if (ethertype == 0x0800) {
                pdu.ether_type = EtherType::Ipv4;
                if (plen >= 20) {
                    pdu.src_ip.len = 4;
                    std::copy(payload + 12, payload + 16, pdu.src_ip.bytes.begin());
                    pdu.dst_ip.len = 4;
                    std::copy(payload + 16, payload + 20, pdu.dst_ip.bytes.begin());
                }
            } else if (ethertype == 0x86dd) {
                pdu.ether_type = EtherType::Ipv6;
                if (plen >= 40) {
                    pdu.src_ip.len = 16;
                    std::copy(payload + 8, payload + 24, pdu.src_ip.bytes.begin());
                    pdu.dst_ip.len = 16;
                    std::copy(payload + 24, payload + 40, pdu.dst_ip.bytes.begin());
                }
            }
        }
        trace.records.push_back(std::move(pdu));
        off += incl;
    }
    trace.epoch_us = epoch;
    std::stable_sort(trace.records.begin(), trace.records.end(),
                     [](const PduRecord& a, const PduRecord& b) { return a.timestamp < b.timestamp; });
    for (std::uint64_t i = 0; i < trace.records.size(); ++i) trace.records[i].seq_index = i;
    return trace;
}

Trace parse_trace_csv(const std::string& text, const std::string& source) {
    Trace trace;
    trace.source = source;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    std::uint64_t seq = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == "ts_us,src_mac,dst_mac,ether_type,src_ip,dst_ip,length") continue;
            throw IoError("bad CSV trace header in " + source + " line " + std::to_string(lineno));
        }
        std::array<std::string, 7> field;
        std::size_t start = 0, fi = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                if (fi >= 7) throw IoError("too many CSV fields in " + source + " line " +
                                           std::to_string(lineno));
                field[fi++] = line.substr(start, i - start);
                start = i + 1;
            }
        }
        if (fi != 7)
            throw IoError("expected 7 CSV fields in " + source + " line " + std::to_string(lineno));
        PduRecord pdu;
        try {
            pdu.timestamp = std::stoll(field[0]);
            pdu.src_mac = MacAddr::parse(field[1]);
            pdu.dst_mac = MacAddr::parse(field[2]);
            pdu.ether_type = ether_type_from_string(field[3]);
            pdu.src_ip = IpAddr::parse(field[4]);
            pdu.dst_ip = IpAddr::parse(field[5]);
            pdu.length = static_cast<std::uint32_t>(std::stoul(field[6]));
        } catch (const std::exception& e) {
            throw IoError("bad CSV record in " + source + " line " + std::to_string(lineno) + ": " +
                          e.what());
        }
        pdu.seq_index = seq++;
        trace.records.push_back(std::move(pdu));
    }
    for (std::size_t i = 1; i < trace.records.size(); ++i)
        if (trace.records[i].timestamp < trace.records[i - 1].timestamp)
            throw InputError("CSV trace timestamps must be non-decreasing: " + source);
    return trace;
}

std::string trace_to_csv(const Trace& trace) {
    std::ostringstream out;
    out << "ts_us,src_mac,dst_mac,ether_type,src_ip,dst_ip,length\n";
    for (const auto& r : trace.records)
        out << r.timestamp << ',' << r.src_mac.to_string() << ',' << r.dst_mac.to_string() << ','
            << to_string(r.ether_type) << ',' << r.src_ip.to_string() << ',' << r.dst_ip.to_string()
            << ',' << r.length << '\n';
    return out.str();
}

Trace load_trace(const std::string& path, TraceFormat format) {
    auto bytes = read_file(path);
    if (format == TraceFormat::Auto) {
        if (bytes.size() >= 4) {
            std::uint32_t magic;
            std::memcpy(&magic, bytes.data(), 4);
            format = (magic == kMagicUsLE || magic == kMagicUsBE || magic == kMagicNsLE ||
                      magic == kMagicNsBE)
                         ? TraceFormat::Pcap
                         : TraceFormat::Csv;
        } else {
            format = bytes.empty() ? TraceFormat::Pcap : TraceFormat::Csv;
        }
    }
    if (format == TraceFormat::Pcap) return parse_pcap(bytes, path);
    return parse_trace_csv(std::string(bytes.begin(), bytes.end()), path);
}

void save_trace_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write trace file: " + path);
    out << trace_to_csv(trace);
    if (!out) throw IoError("write failed: " + path);
}

} // namespace shp
