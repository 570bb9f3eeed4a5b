#pragma once

#include "shp/config.hpp"
#include "shp/pdu.hpp"

namespace shp {

// Broadcast-domain acceptance is the union of five classes: group-bit MACs
// (including the global broadcast), IPv4 limited and subnet-directed
// broadcast, IPv4 multicast 224.0.0.0/4, IPv6 multicast ff00::/8, and ARP.
inline bool classify_poi(const PduRecord& pdu, PoiFilter filter, const Ipv4Subnet& subnet) {
    if (filter == PoiFilter::All) return true;
    if (pdu.ether_type == EtherType::Arp) return true;
    if (pdu.dst_mac.is_group()) return true;
    if (pdu.dst_ip.is_v4()) {
        const std::uint32_t a = pdu.dst_ip.v4();
        if (a == 0xffffffffu) return true;
        if (a == subnet.directed_broadcast()) return true;
        if ((a & 0xf0000000u) == 0xe0000000u) return true; // 224.0.0.0/4
    }
    if (pdu.dst_ip.is_v6() && pdu.dst_ip.bytes[0] == 0xff) return true; // ff00::/8
    return false;
}

} // namespace shp
