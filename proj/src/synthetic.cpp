#include "shp/synthetic.hpp"

#include <random>

#include "shp/errors.hpp"

namespace shp {

Trace generate_synthetic_trace(const SyntheticConfig& cfg) {
    if (cfg.rate_pps <= 0) throw InvalidParameter("synthetic trace: rate must be > 0");
    if (cfg.duration_s < 0) throw InvalidParameter("synthetic trace: duration must be >= 0");
    if (cfg.quantum_us < 1) throw InvalidParameter("synthetic trace: quantum must be >= 1");
    const Ipv4Subnet subnet = Ipv4Subnet::parse(cfg.subnet);
    if (subnet.prefix_len > 30) throw InvalidParameter("synthetic trace: subnet too small");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> jitter_factor(0.5, 1.5);
    std::uniform_int_distribution<int> frame_class(0, 2);
    std::uniform_int_distribution<std::uint32_t> host_bits(1, ~subnet.mask() - 1);
    std::uniform_int_distribution<std::uint32_t> mcast_group(1, 250);
    std::uniform_int_distribution<std::uint32_t> udp_len(60, 300);

    const double mean_gap_us = 1e6 / cfg.rate_pps;
    const auto end_us = static_cast<Microseconds>(cfg.duration_s * 1e6);

    auto host_mac = [](std::uint32_t ip) {
        MacAddr m;
        m.bytes = {0x02, 0x00, static_cast<std::uint8_t>(ip >> 24),
                   static_cast<std::uint8_t>(ip >> 16), static_cast<std::uint8_t>(ip >> 8),
                   static_cast<std::uint8_t>(ip)};
        return m;
    };

    Trace trace;
    trace.source = "synthetic";
    double t = 0;
    std::uint64_t seq = 0;
    for (;;) {
        t += mean_gap_us * jitter_factor(rng);
        Microseconds ts = static_cast<Microseconds>(t);
        if (cfg.quantum_us > 1) ts = (ts + cfg.quantum_us / 2) / cfg.quantum_us * cfg.quantum_us;
        if (ts > end_us) break;

        PduRecord pdu;
        pdu.timestamp = ts;
        pdu.seq_index = seq++;
        const std::uint32_t src = subnet.network | host_bits(rng);
        pdu.src_ip = IpAddr::from_v4(src);
        pdu.src_mac = host_mac(src);
        pdu.dst_mac = MacAddr::broadcast();

        switch (frame_class(rng)) {
        case 0: { // ARP broadcast request
            std::uint32_t target = subnet.network | host_bits(rng);
            pdu.ether_type = EtherType::Arp;
            pdu.dst_ip = IpAddr::from_v4(target);
            pdu.length = 42;
            break;
        }
        case 1: // IPv4 broadcast UDP
            pdu.ether_type = EtherType::Ipv4;
            pdu.dst_ip = IpAddr::from_v4(subnet.directed_broadcast());
            pdu.length = udp_len(rng);
            break;
        default: { // IPv4 multicast UDP
            const std::uint32_t group = 0xe0000000u | mcast_group(rng); // 224.0.0.x
            pdu.ether_type = EtherType::Ipv4;
            pdu.dst_ip = IpAddr::from_v4(group);
            pdu.dst_mac = MacAddr{{0x01, 0x00, 0x5e, static_cast<std::uint8_t>((group >> 16) & 0x7f),
                                   static_cast<std::uint8_t>(group >> 8),
                                   static_cast<std::uint8_t>(group)}};
            pdu.length = udp_len(rng);
            break;
        }
        }
        trace.records.push_back(std::move(pdu));
    }
    return trace;
}

} // namespace shp
