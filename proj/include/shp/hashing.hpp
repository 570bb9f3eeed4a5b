#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "shp/bits.hpp"

namespace shp {

// Deskewing maps rounded input values to near-uniform bits by hashing. All
// keyed hashes share one canonical, length-prefixed byte encoding so every
// consumer (and any reimplementation) produces identical digests:
//
//   key_block = u32be(len(key)) || key
//   deskew    = SHA256( key_block || "dk" || i64be(value) || u32be(subchannel)
//                       || u32be(iteration) )
//   subch     = SHA256( key_block || "sc" || payload )
//   watchdog  = SHA256( key_block || "wd" || u32be(nbits) || bits packed MSB-first )
//
// "first n bits" always means digest bytes in order, MSB-first within a byte.

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(const std::uint8_t* data, std::size_t len);
Sha256Digest sha256(const std::vector<std::uint8_t>& data);
std::string sha256_hex(const std::string& text);
std::string sha256_hex_file(const std::string& path); // throws IoError

inline Bits first_bits(const Sha256Digest& d, std::size_t n) {
    if (n > 256) throw InvalidParameter("first_bits: n exceeds digest size (256)");
    Bits out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = (d[i / 8] >> (7 - i % 8)) & 1u;
    return out;
}

// First n bits of the deskew hash over (key, value, subchannel, iteration).
Bits deskew_hash_bits(std::int64_t value, std::uint32_t subchannel, const std::string& key,
                      std::size_t n, std::uint32_t iteration);

// First `bits` bits of the subchannel hash over an arbitrary payload,
// returned as an integer id in [0, 2^bits).
std::uint32_t subchannel_hash(const std::vector<std::uint8_t>& payload, const std::string& key,
                              int bits);

// 6-bit integrity check over a fragment's data bits.
std::uint8_t watchdog_checksum(const Bits& fragment, const std::string& key);

} // namespace shp
