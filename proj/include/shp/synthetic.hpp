#pragma once

#include <cstdint>
#include <string>

#include "shp/trace.hpp"

namespace shp {

// LAN-like broadcast-domain traffic: ARP broadcast requests, IPv4 broadcast
// UDP, and IPv4 multicast UDP in equal proportion, with inter-packet gaps of
// (1/rate) * U[0.5, 1.5] and source IPs drawn from the subnet.
//
// quantum_us > 1 snaps timestamps to that grid, which mimics the strongly
// quantized inter-arrival patterns of real home-LAN captures (relevant for
// warden-side compressibility analysis); the default leaves the
// microsecond-continuous gaps untouched.
struct SyntheticConfig {
    double rate_pps = 120.0;
    double duration_s = 60.0;
    std::string subnet = "192.168.1.0/24";
    std::uint64_t seed = 1;
    Microseconds quantum_us = 1;
};

Trace generate_synthetic_trace(const SyntheticConfig& cfg);

} // namespace shp
