#include <doctest.h>

#include <random>

#include "shp/ecc.hpp"
#include "shp/errors.hpp"

using namespace shp;
using namespace shp::ecc;

namespace {

// Independent parity-equation oracle: even parity over the standard covering
// sets, evaluated directly from the definition (position p covered by check
// k iff bit k of p is set).
Bits oracle_encode_hamming(const Bits& data) {
    const int n = static_cast<int>(data.size());
    int r = 0;
    while ((1 << r) < n + r + 1) ++r;
    const int len = n + r;
    Bits cw(static_cast<std::size_t>(len), 0);
    std::size_t di = 0;
    for (int pos = 1; pos <= len; ++pos)
        if ((pos & (pos - 1)) != 0) cw[static_cast<std::size_t>(pos - 1)] = data[di++];
    for (int k = 0; (1 << k) <= len; ++k) {
        int parity = 0;
        for (int pos = 1; pos <= len; ++pos)
            if (pos != (1 << k) && (pos & (1 << k)))
                parity ^= cw[static_cast<std::size_t>(pos - 1)];
        cw[static_cast<std::size_t>((1 << k) - 1)] = static_cast<std::uint8_t>(parity);
    }
    return cw;
}

} // namespace

TEST_CASE("hamming parity counts") {
    CHECK(hamming_parity_count(2) == 3);
    CHECK(hamming_parity_count(3) == 3);
    CHECK(hamming_parity_count(4) == 3);
    CHECK(hamming_parity_count(8) == 4);
    CHECK_THROWS_AS(hamming_parity_count(0), InvalidParameter);
    // Minimality: r-1 must fail the inequality, for all n up to 64.
    for (int n = 1; n <= 64; ++n) {
        const int r = hamming_parity_count(n);
        CHECK((1 << r) >= n + r + 1);
        if (r > 0) CHECK((1 << (r - 1)) < n + (r - 1) + 1);
    }
}

TEST_CASE("overhead fractions") {
    CHECK(overhead_fraction(2, EccVariant::Hamming) == doctest::Approx(1.50));
    CHECK(overhead_fraction(2, EccVariant::HammingPlus) == doctest::Approx(2.00));
    CHECK(overhead_fraction(3, EccVariant::Hamming) == doctest::Approx(1.00));
    CHECK(overhead_fraction(3, EccVariant::HammingPlus) == doctest::Approx(4.0 / 3.0));
    CHECK(overhead_fraction(4, EccVariant::Hamming) == doctest::Approx(0.75));
    CHECK(overhead_fraction(4, EccVariant::HammingPlus) == doctest::Approx(1.00));
    CHECK(overhead_fraction(8, EccVariant::Hamming) == doctest::Approx(0.50));
    CHECK(overhead_fraction(8, EccVariant::HammingPlus) == doctest::Approx(0.625));
    CHECK(overhead_fraction(8, EccVariant::InlineHammingPlus) == doctest::Approx(0.625));
    CHECK_THROWS_AS(overhead_fraction(4, EccVariant::None), InvalidParameter);
}

TEST_CASE("encode matches the parity-equation oracle") {
    CHECK(bits_to_string(encode_fragment(bits_from_string("1011"), EccVariant::Hamming)) ==
          "0110011");
    std::mt19937_64 rng(5);
    for (int n : {2, 3, 4, 8})
        for (int i = 0; i < 64; ++i) {
            const Bits data = random_bits(static_cast<std::size_t>(n), rng);
            CHECK(encode_fragment(data, EccVariant::Hamming) == oracle_encode_hamming(data));
        }
    CHECK(encode_fragment(bits_from_string("1011"), EccVariant::None) ==
          bits_from_string("1011"));
    CHECK_THROWS_AS(encode_fragment(Bits{}, EccVariant::Hamming), InvalidParameter);
}

TEST_CASE("round-trip identity over all inputs, n <= 8, all variants") {
    for (int n = 1; n <= 8; ++n) {
        for (auto variant : {EccVariant::None, EccVariant::Hamming, EccVariant::HammingPlus}) {
            for (std::uint64_t word = 0; word < (1ull << n); ++word) {
                const Bits data = bits_from_uint(word, static_cast<std::size_t>(n));
                const Bits cw = encode_fragment(data, variant);
                CHECK(static_cast<int>(cw.size()) == codeword_length(n, variant));
                const auto [decoded, status] = decode_fragment(cw, n, variant);
                CHECK(decoded == data);
                CHECK(status.ok());
            }
        }
    }
}

TEST_CASE("every single-bit error is corrected, exhaustively") {
    for (int n : {2, 3, 4, 8}) {
        for (auto variant : {EccVariant::Hamming, EccVariant::HammingPlus}) {
            for (std::uint64_t word = 0; word < (1ull << n); ++word) {
                const Bits data = bits_from_uint(word, static_cast<std::size_t>(n));
                const Bits cw = encode_fragment(data, variant);
                for (std::size_t flip = 0; flip < cw.size(); ++flip) {
                    Bits damaged = cw;
                    damaged[flip] ^= 1;
                    const auto [decoded, status] = decode_fragment(damaged, n, variant);
                    CHECK(status.corrected());
                    CHECK(status.position == static_cast<int>(flip + 1));
                    CHECK(decoded == data);
                }
            }
        }
    }
}

TEST_CASE("every 2-bit error is flagged uncorrectable under hamming+") {
    for (int n : {2, 3, 4, 8}) {
        for (std::uint64_t word = 0; word < (1ull << n); ++word) {
            const Bits data = bits_from_uint(word, static_cast<std::size_t>(n));
            const Bits cw = encode_fragment(data, EccVariant::HammingPlus);
            for (std::size_t i = 0; i < cw.size(); ++i)
                for (std::size_t j = i + 1; j < cw.size(); ++j) {
                    Bits damaged = cw;
                    damaged[i] ^= 1;
                    damaged[j] ^= 1;
                    const auto [decoded, status] =
                        decode_fragment(damaged, n, EccVariant::HammingPlus);
                    (void)decoded;
                    CHECK(status.uncorrectable());
                }
        }
    }
}

TEST_CASE("decode length mismatch is an error") {
    CHECK_THROWS_AS(decode_fragment(bits_from_string("101"), 4, EccVariant::Hamming),
                    InvalidParameter);
}

TEST_CASE("inline expansion arithmetic and round trip") {
    std::mt19937_64 rng(17);
    CHECK(inline_expand(random_bits(8, rng), 4).size() == 16); // ceil(8/4) * (4+3+1)
    CHECK(inline_expand(Bits{}, 4).empty());
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t len = 1 + rng() % 1000;
        const int n = std::array<int, 4>{2, 3, 4, 8}[rng() % 4];
        const Bits msg = random_bits(len, rng);
        const Bits expanded = inline_expand(msg, n);
        const int cw_len = codeword_length(n, EccVariant::HammingPlus);
        REQUIRE(expanded.size() % static_cast<std::size_t>(cw_len) == 0);
        Bits recovered;
        for (std::size_t off = 0; off < expanded.size();
             off += static_cast<std::size_t>(cw_len)) {
            Bits cw(expanded.begin() + static_cast<std::ptrdiff_t>(off),
                    expanded.begin() + static_cast<std::ptrdiff_t>(off) + cw_len);
            const auto [data, status] = decode_fragment(cw, n, EccVariant::HammingPlus);
            CHECK(status.ok());
            recovered.insert(recovered.end(), data.begin(), data.end());
        }
        recovered.resize(len); // strip tail padding
        CHECK(recovered == msg);
    }
}

TEST_CASE("near_match thresholds") {
    const Bits a = bits_from_string("10110011");
    Bits b = a;
    CHECK(near_match(a, b, EccVariant::HammingPlus));
    CHECK(near_match(a, b, EccVariant::None));
    b[3] ^= 1;
    CHECK(near_match(a, b, EccVariant::HammingPlus));
    CHECK_FALSE(near_match(a, b, EccVariant::Hamming));
    CHECK_FALSE(near_match(a, b, EccVariant::None));
    b[5] ^= 1;
    CHECK_FALSE(near_match(a, b, EccVariant::HammingPlus));
    CHECK_THROWS_AS(near_match(a, bits_from_string("101"), EccVariant::None), InvalidParameter);
}

TEST_CASE("match width: inline never widens the comparison") {
    for (int n : {2, 3, 4, 8}) {
        CHECK(match_width(n, EccVariant::None) == n);
        CHECK(match_width(n, EccVariant::InlineHammingPlus) == n);
        CHECK(match_width(n, EccVariant::Hamming) == n + hamming_parity_count(n));
        CHECK(match_width(n, EccVariant::HammingPlus) == n + hamming_parity_count(n) + 1);
    }
}
