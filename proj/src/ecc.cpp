#include "shp/ecc.hpp"

#include "shp/errors.hpp"

namespace shp {
namespace ecc {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// XOR of 1-based indices of all set bits; zero for a valid Hamming codeword.
int syndrome(const Bits& hamming_part) {
    int s = 0;
    for (std::size_t i = 0; i < hamming_part.size(); ++i)
        if (hamming_part[i]) s ^= static_cast<int>(i + 1);
    return s;
}

Bits extract_data(const Bits& hamming_part) {
    Bits data;
    for (std::size_t i = 0; i < hamming_part.size(); ++i)
        if (!is_power_of_two(static_cast<int>(i + 1))) data.push_back(hamming_part[i]);
    return data;
}

Bits encode_hamming(const Bits& data) {
    const int n = static_cast<int>(data.size());
    const int r = hamming_parity_count(n);
    Bits cw(static_cast<std::size_t>(n + r), 0);
    std::size_t di = 0;
    for (int pos = 1; pos <= n + r; ++pos)
        if (!is_power_of_two(pos)) cw[static_cast<std::size_t>(pos - 1)] = data[di++];
    for (int k = 0; (1 << k) <= n + r; ++k) {
        int p = 0;
        for (int pos = 1; pos <= n + r; ++pos)
            if ((pos & (1 << k)) && pos != (1 << k)) p ^= cw[static_cast<std::size_t>(pos - 1)];
        cw[static_cast<std::size_t>((1 << k) - 1)] = static_cast<std::uint8_t>(p);
    }
    return cw;
}

} // namespace

int hamming_parity_count(int n) {
    if (n < 1) throw InvalidParameter("hamming_parity_count: n must be >= 1");
    int r = 0;
    while ((1 << r) < n + r + 1) ++r;
    return r;
}

int codeword_length(int n, EccVariant variant) {
    switch (variant) {
    case EccVariant::None: return n;
    case EccVariant::Hamming: return n + hamming_parity_count(n);
    default: return n + hamming_parity_count(n) + 1;
    }
}

int match_width(int n, EccVariant variant) {
    switch (variant) {
    case EccVariant::Hamming: return n + hamming_parity_count(n);
    case EccVariant::HammingPlus: return n + hamming_parity_count(n) + 1;
    default: return n; // none and inline-hamming+ match on data bits only
    }
}

double overhead_fraction(int n, EccVariant variant) {
    if (variant == EccVariant::None)
        throw InvalidParameter("overhead_fraction: variant must not be none");
    const int r = hamming_parity_count(n);
    if (variant == EccVariant::Hamming) return static_cast<double>(r) / n;
    return static_cast<double>(r + 1) / n;
}

Bits encode_fragment(const Bits& data, EccVariant variant) {
    if (data.empty()) throw InvalidParameter("encode_fragment: empty data");
    if (variant == EccVariant::None) return data;
    Bits cw = encode_hamming(data);
    if (variant != EccVariant::Hamming) {
        std::uint8_t overall = 0;
        for (auto b : cw) overall ^= b;
        cw.push_back(overall);
    }
    return cw;
}

std::pair<Bits, DecodeStatus> decode_fragment(const Bits& codeword, int n, EccVariant variant) {
    if (n < 1) throw InvalidParameter("decode_fragment: n must be >= 1");
    if (static_cast<int>(codeword.size()) != codeword_length(n, variant))
        throw InvalidParameter("decode_fragment: codeword length does not match (n, variant)");

    if (variant == EccVariant::None) return {codeword, DecodeStatus{}};

    const int r = hamming_parity_count(n);
    const int hamming_len = n + r;

    if (variant == EccVariant::Hamming) {
        Bits cw = codeword;
        const int s = syndrome(cw);
        if (s == 0) return {extract_data(cw), DecodeStatus{}};
        if (s > hamming_len)
            return {extract_data(cw), DecodeStatus{DecodeStatus::Kind::Uncorrectable, 0}};
        cw[static_cast<std::size_t>(s - 1)] ^= 1u;
        return {extract_data(cw), DecodeStatus{DecodeStatus::Kind::Corrected, s}};
    }

    // hamming+ / inline-hamming+: overall parity disambiguates 1 vs 2 errors.
    Bits cw(codeword.begin(), codeword.begin() + hamming_len);
    std::uint8_t total = 0;
    for (auto b : codeword) total ^= b;
    const bool overall_ok = total == 0;
    const int s = syndrome(cw);

    if (s == 0 && overall_ok) return {extract_data(cw), DecodeStatus{}};
    if (s == 0 && !overall_ok) // the appended parity bit itself flipped
        return {extract_data(cw), DecodeStatus{DecodeStatus::Kind::Corrected, hamming_len + 1}};
    if (overall_ok) // syndrome set but parity balanced: two errors
        return {extract_data(cw), DecodeStatus{DecodeStatus::Kind::Uncorrectable, 0}};
    if (s > hamming_len)
        return {extract_data(cw), DecodeStatus{DecodeStatus::Kind::Uncorrectable, 0}};
    cw[static_cast<std::size_t>(s - 1)] ^= 1u;
    return {extract_data(cw), DecodeStatus{DecodeStatus::Kind::Corrected, s}};
}

Bits inline_expand(const Bits& message, int n) {
    if (n < 1) throw InvalidParameter("inline_expand: n must be >= 1");
    Bits out;
    if (message.empty()) return out;
    const std::size_t frags = (message.size() + static_cast<std::size_t>(n) - 1) /
                              static_cast<std::size_t>(n);
    out.reserve(frags * static_cast<std::size_t>(codeword_length(n, EccVariant::HammingPlus)));
    for (std::size_t f = 0; f < frags; ++f) {
        Bits frag(static_cast<std::size_t>(n), 0);
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
            const std::size_t idx = f * static_cast<std::size_t>(n) + i;
            if (idx < message.size()) frag[i] = message[idx];
        }
        Bits cw = encode_fragment(frag, EccVariant::HammingPlus);
        out.insert(out.end(), cw.begin(), cw.end());
    }
    return out;
}

bool near_match(const Bits& candidate, const Bits& target, EccVariant variant) {
    if (candidate.size() != target.size())
        throw InvalidParameter("near_match: length mismatch");
    const std::size_t limit = variant == EccVariant::HammingPlus ? 1 : 0;
    std::size_t d = 0;
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        d += candidate[i] != target[i];
        if (d > limit) return false;
    }
    return true;
}

} // namespace ecc
} // namespace shp
