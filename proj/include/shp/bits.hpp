#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "shp/errors.hpp"

namespace shp {

// Bit strings are vectors of 0/1 bytes, MSB-first where an order matters.
// All protocol fields are short (<= a few hundred bits), so the simple
// representation wins over a packed one.
using Bits = std::vector<std::uint8_t>;

inline Bits bits_from_string(const std::string& s) {
    Bits out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '0') out.push_back(0);
        else if (c == '1') out.push_back(1);
        else throw InvalidParameter("bit string may contain only '0'/'1'");
    }
    return out;
}

inline std::string bits_to_string(const Bits& b) {
    std::string s;
    s.reserve(b.size());
    for (auto v : b) s.push_back(v ? '1' : '0');
    return s;
}

// MSB-first packing; final partial byte is left-aligned.
inline std::vector<std::uint8_t> bits_pack(const Bits& b) {
    std::vector<std::uint8_t> out((b.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return out;
}

inline Bits bits_unpack(const std::vector<std::uint8_t>& bytes, std::size_t nbits) {
    if (nbits > bytes.size() * 8) throw InvalidParameter("bits_unpack: nbits exceeds data");
    Bits out(nbits);
    for (std::size_t i = 0; i < nbits; ++i)
        out[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
    return out;
}

inline std::size_t hamming_distance(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) throw InvalidParameter("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

// Low n bits of v, MSB-first.
inline Bits bits_from_uint(std::uint64_t v, std::size_t n) {
    Bits out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = (v >> (n - 1 - i)) & 1u;
    return out;
}

inline std::uint64_t bits_to_uint(const Bits& b) {
    if (b.size() > 64) throw InvalidParameter("bits_to_uint: more than 64 bits");
    std::uint64_t v = 0;
    for (auto bit : b) v = (v << 1) | bit;
    return v;
}

inline Bits random_bits(std::size_t n, std::mt19937_64& rng) {
    Bits out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng() & 1u);
    return out;
}

} // namespace shp
