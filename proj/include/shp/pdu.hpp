#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "shp/errors.hpp"

namespace shp {

// Timestamps are integral microseconds since the trace epoch. Fractional
// seconds exist only at I/O boundaries so rounding stays bit-exact.
using Microseconds = std::int64_t;

inline Microseconds us_from_seconds(double s) {
    return static_cast<Microseconds>(s * 1e6 + (s >= 0 ? 0.5 : -0.5));
}
inline double seconds_from_us(Microseconds us) { return static_cast<double>(us) / 1e6; }

struct MacAddr {
    std::array<std::uint8_t, 6> bytes{};

    bool operator==(const MacAddr&) const = default;
    bool is_broadcast() const {
        for (auto b : bytes)
            if (b != 0xff) return false;
        return true;
    }
    // Individual/Group bit: LSB of the first octet.
    bool is_group() const { return (bytes[0] & 0x01) != 0; }

    std::string to_string() const {
        char buf[18];
        std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", bytes[0], bytes[1],
                      bytes[2], bytes[3], bytes[4], bytes[5]);
        return buf;
    }
    static MacAddr parse(const std::string& s);
    static MacAddr broadcast() { return MacAddr{{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}}; }
};

// 4-byte (IPv4) or 16-byte (IPv6) address.
struct IpAddr {
    std::uint8_t len = 0; // 0 = absent, 4 or 16 otherwise
    std::array<std::uint8_t, 16> bytes{};

    bool operator==(const IpAddr&) const = default;
    bool is_v4() const { return len == 4; }
    bool is_v6() const { return len == 16; }

    std::uint32_t v4() const {
        if (!is_v4()) throw InvalidParameter("IpAddr: not IPv4");
        return (std::uint32_t(bytes[0]) << 24) | (std::uint32_t(bytes[1]) << 16) |
               (std::uint32_t(bytes[2]) << 8) | std::uint32_t(bytes[3]);
    }
    static IpAddr from_v4(std::uint32_t a) {
        IpAddr ip;
        ip.len = 4;
        ip.bytes[0] = static_cast<std::uint8_t>(a >> 24);
        ip.bytes[1] = static_cast<std::uint8_t>(a >> 16);
        ip.bytes[2] = static_cast<std::uint8_t>(a >> 8);
        ip.bytes[3] = static_cast<std::uint8_t>(a);
        return ip;
    }

    std::string to_string() const;
    // Parses dotted-quad or colon-hex; empty string -> absent address.
    static IpAddr parse(const std::string& s);
};

struct Ipv4Subnet {
    std::uint32_t network = 0;
    int prefix_len = 0;

    std::uint32_t mask() const {
        return prefix_len == 0 ? 0u : ~std::uint32_t(0) << (32 - prefix_len);
    }
    std::uint32_t directed_broadcast() const { return network | ~mask(); }
    bool contains(std::uint32_t addr) const { return (addr & mask()) == network; }

    std::string to_string() const {
        return IpAddr::from_v4(network).to_string() + "/" + std::to_string(prefix_len);
    }
    static Ipv4Subnet parse(const std::string& s); // "a.b.c.d/len"
};

enum class EtherType : std::uint8_t { Arp, Ipv4, Ipv6, Other };

std::string to_string(EtherType t);
EtherType ether_type_from_string(const std::string& s);

// One observed overt frame, reduced to the fields the channel needs.
struct PduRecord {
    Microseconds timestamp = 0; // >= 0, relative to trace epoch
    MacAddr src_mac{};
    MacAddr dst_mac{};
    IpAddr src_ip{}; // absent for non-IP frames unless carried by ARP
    IpAddr dst_ip{};
    EtherType ether_type = EtherType::Other;
    std::uint32_t length = 0;    // frame bytes on the wire, > 0
    std::uint64_t seq_index = 0; // ordinal position in the observer's stream

    bool operator==(const PduRecord&) const = default;
};

} // namespace shp
