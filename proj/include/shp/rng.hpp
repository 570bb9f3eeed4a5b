#pragma once

#include <cstdint>

namespace shp {

// SplitMix64 finalizer. Impairment draws are keyed (seed, stream, index) so
// each stage consumes an independent, order-free substream: dropping or
// reordering records never shifts another record's randomness.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ (stream * 0xd1342543de82ef95ull)) ^ index);
}

// Uniform double in [0, 1) from 53 high bits.
inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace shp
