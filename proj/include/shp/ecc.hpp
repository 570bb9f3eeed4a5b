#pragma once

#include "shp/bits.hpp"
#include "shp/config.hpp"

namespace shp {
namespace ecc {

// Systematic Hamming codes, even parity, parity bits at the power-of-two
// positions of the 1-indexed codeword; the "+" variants append one overall
// parity bit covering the whole Hamming codeword (single-error correction,
// double-error detection).

struct DecodeStatus {
    enum class Kind { Ok, Corrected, Uncorrectable };
    Kind kind = Kind::Ok;
    int position = 0; // 1-based codeword position of the corrected bit

    bool ok() const { return kind == Kind::Ok; }
    bool corrected() const { return kind == Kind::Corrected; }
    bool uncorrectable() const { return kind == Kind::Uncorrectable; }
    bool accepted() const { return kind != Kind::Uncorrectable; }
};

// Smallest r with 2^r >= n + r + 1.
int hamming_parity_count(int n);

// Codeword length for a data fragment of n bits under `variant`.
int codeword_length(int n, EccVariant variant);

// Width of the bit string compared per match attempt. Matching-time ECC
// variants (hamming, hamming+) compare full codewords; none and
// inline-hamming+ compare the n data bits only.
int match_width(int n, EccVariant variant);

// r/n for hamming, (r+1)/n for the "+" variants. variant=none is an error.
double overhead_fraction(int n, EccVariant variant);

Bits encode_fragment(const Bits& data, EccVariant variant);

// Inverse of encode_fragment with syndrome correction. |codeword| must equal
// codeword_length(n, variant). For "+" variants any 2-bit error is reported
// uncorrectable, never silently miscorrected.
std::pair<Bits, DecodeStatus> decode_fragment(const Bits& codeword, int n, EccVariant variant);

// Splits the message into n-bit fragments (last zero-padded) and replaces
// each with its hamming+ codeword. Output length = ceil(|msg|/n)*(n+r+1).
Bits inline_expand(const Bits& message, int n);

// True when candidate is acceptable as target: Hamming distance <= 1 under
// hamming+, exact equality otherwise.
bool near_match(const Bits& candidate, const Bits& target, EccVariant variant);

} // namespace ecc
} // namespace shp
