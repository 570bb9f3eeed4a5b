#include "shp/signal.hpp"

#include "shp/errors.hpp"

namespace shp {

std::string to_string(SignalType t) {
    switch (t) {
    case SignalType::Retry: return "retry";
    case SignalType::Data: return "data";
    case SignalType::Start: return "start";
    default: return "stop";
    }
}

PackedPointer pack_pointer(const PointerSignal& sig, int rehash_bits, int oood_bits) {
    if (rehash_bits < 0 || oood_bits < 0)
        throw InvalidParameter("pack_pointer: negative field width");
    if (rehash_bits + oood_bits > 8)
        throw ConfigError("pack_pointer: rehash_bits + oood_bits exceed octet capacity (8)");
    if (sig.rehash_count >= (1u << rehash_bits) && !(rehash_bits == 0 && sig.rehash_count == 0))
        throw InvalidParameter("pack_pointer: rehash_count out of range");
    if (oood_bits == 0) {
        if (sig.oood_seq != 0) throw InvalidParameter("pack_pointer: oood_seq with oood_bits=0");
    } else if (sig.oood_seq >= (1u << oood_bits)) {
        throw InvalidParameter("pack_pointer: oood_seq out of range");
    }
    if (sig.watchdog >= 64) throw InvalidParameter("pack_pointer: watchdog exceeds 6 bits");

    PackedPointer p;
    p.octet3 = static_cast<std::uint8_t>(sig.rehash_count | (sig.oood_seq << rehash_bits));
    p.octet4 = static_cast<std::uint8_t>((static_cast<unsigned>(sig.type) << 6) | sig.watchdog);
    return p;
}

PointerSignal unpack_pointer(std::uint8_t octet3, std::uint8_t octet4, int rehash_bits,
                             int oood_bits) {
    PointerSignal sig;
    sig.rehash_count = octet3 & ((1u << rehash_bits) - 1u);
    sig.oood_seq = oood_bits == 0 ? 0u : (octet3 >> rehash_bits) & ((1u << oood_bits) - 1u);
    sig.watchdog = octet4 & 0x3fu;
    sig.type = static_cast<SignalType>(octet4 >> 6);
    return sig;
}

PduRecord signal_frame(const PointerSignal& sig, int rehash_bits, int oood_bits,
                       const MacAddr& src_mac, const IpAddr& src_ip) {
    const PackedPointer p = pack_pointer(sig, rehash_bits, oood_bits);
    PduRecord pdu;
    pdu.timestamp = sig.emit_ts;
    pdu.src_mac = src_mac;
    pdu.dst_mac = MacAddr::broadcast();
    pdu.src_ip = src_ip;
    pdu.dst_ip = IpAddr::from_v4((127u << 24) | (55u << 16) |
                                 (static_cast<std::uint32_t>(p.octet3) << 8) | p.octet4);
    pdu.ether_type = EtherType::Arp;
    pdu.length = 42; // minimal ARP request frame
    return pdu;
}

std::optional<PointerSignal> signal_from_frame(const PduRecord& pdu, int rehash_bits,
                                               int oood_bits) {
    if (!is_signal_frame(pdu)) return std::nullopt;
    const std::uint32_t a = pdu.dst_ip.v4();
    PointerSignal sig = unpack_pointer(static_cast<std::uint8_t>(a >> 8),
                                       static_cast<std::uint8_t>(a), rehash_bits, oood_bits);
    sig.emit_ts = pdu.timestamp;
    return sig;
}

} // namespace shp
