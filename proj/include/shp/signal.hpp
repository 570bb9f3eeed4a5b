#pragma once

#include <cstdint>
#include <optional>

#include "shp/config.hpp"
#include "shp/pdu.hpp"

namespace shp {

// Two-bit type code carried in the high bits of the fourth octet.
enum class SignalType : std::uint8_t { Retry = 0, Data = 1, Start = 2, Stop = 3 };

std::string to_string(SignalType t);

// Covert signal-channel message. On the simulated wire it rides in an ARP
// request targeting 127.55.<octet3>.<octet4>.
struct PointerSignal {
    SignalType type = SignalType::Data;
    std::uint32_t rehash_count = 0; // < 2^m
    std::uint32_t oood_seq = 0;     // < 2^s, 0 when s = 0
    std::uint8_t watchdog = 0;      // 6 bits
    Microseconds emit_ts = 0;

    bool operator==(const PointerSignal&) const = default;
};

struct PackedPointer {
    std::uint8_t octet3 = 0; // low m bits rehash count, next s bits oood seq
    std::uint8_t octet4 = 0; // (type << 6) | watchdog
};

// Throws ConfigError when m+s exceeds the octet capacity, InvalidParameter
// when a field is out of range for (m, s).
PackedPointer pack_pointer(const PointerSignal& sig, int rehash_bits, int oood_bits);

// Exact inverse of pack_pointer under the same (m, s); total over all bytes.
PointerSignal unpack_pointer(std::uint8_t octet3, std::uint8_t octet4, int rehash_bits,
                             int oood_bits);

// Signal-channel address space (experiment-visible range from the reference
// implementation).
inline bool is_signal_address(const IpAddr& ip) {
    return ip.is_v4() && (ip.v4() & 0xffff0000u) == 0x7f370000u; // 127.55.0.0/16
}
inline bool is_signal_frame(const PduRecord& pdu) {
    return pdu.ether_type == EtherType::Arp && is_signal_address(pdu.dst_ip);
}

// Renders the signal as the ARP request frame observed on the wire.
PduRecord signal_frame(const PointerSignal& sig, int rehash_bits, int oood_bits,
                       const MacAddr& src_mac, const IpAddr& src_ip);

// Parses a wire frame back into a signal; nullopt when the frame is not a
// signal-channel frame.
std::optional<PointerSignal> signal_from_frame(const PduRecord& pdu, int rehash_bits,
                                               int oood_bits);

} // namespace shp
