#include "shp/hashing.hpp"

#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "shp/errors.hpp"

namespace shp {

Sha256Digest sha256(const std::uint8_t* data, std::size_t len) {
    Sha256Digest out{};
    unsigned int outlen = 0;
    if (EVP_Digest(data, len, out.data(), &outlen, EVP_sha256(), nullptr) != 1 || outlen != 32)
        throw Error("SHA-256 computation failed");
    return out;
}

Sha256Digest sha256(const std::vector<std::uint8_t>& data) {
    return sha256(data.data(), data.size());
}

std::string sha256_hex(const std::string& text) {
    const auto digest = sha256(reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
    char hex[65];
    for (unsigned i = 0; i < 32; ++i) std::snprintf(hex + 2 * i, 3, "%02x", digest[i]);
    return std::string(hex, 64);
}

std::string sha256_hex_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for digest: " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    unsigned char digest[32];
    unsigned int outlen = 0;
    EVP_DigestFinal_ex(ctx, digest, &outlen);
    EVP_MD_CTX_free(ctx);
    char hex[65];
    for (unsigned i = 0; i < 32; ++i) std::snprintf(hex + 2 * i, 3, "%02x", digest[i]);
    return std::string(hex, 64);
}

namespace {

void put_u32be(std::vector<std::uint8_t>& v, std::uint32_t x) {
    v.push_back(static_cast<std::uint8_t>(x >> 24));
    v.push_back(static_cast<std::uint8_t>(x >> 16));
    v.push_back(static_cast<std::uint8_t>(x >> 8));
    v.push_back(static_cast<std::uint8_t>(x));
}

void put_i64be(std::vector<std::uint8_t>& v, std::int64_t x) {
    auto u = static_cast<std::uint64_t>(x);
    for (int s = 56; s >= 0; s -= 8) v.push_back(static_cast<std::uint8_t>(u >> s));
}

std::vector<std::uint8_t> key_block(const std::string& key, const char* tag) {
    std::vector<std::uint8_t> v;
    v.reserve(key.size() + 6);
    put_u32be(v, static_cast<std::uint32_t>(key.size()));
    v.insert(v.end(), key.begin(), key.end());
    v.push_back(static_cast<std::uint8_t>(tag[0]));
    v.push_back(static_cast<std::uint8_t>(tag[1]));
    return v;
}

} // namespace

Bits deskew_hash_bits(std::int64_t value, std::uint32_t subchannel, const std::string& key,
                      std::size_t n, std::uint32_t iteration) {
    if (n < 1) throw InvalidParameter("deskew_hash_bits: n must be >= 1");
    if (n > 256) throw InvalidParameter("deskew_hash_bits: n exceeds digest size (256)");
    auto msg = key_block(key, "dk");
    put_i64be(msg, value);
    put_u32be(msg, subchannel);
    put_u32be(msg, iteration);
    return first_bits(sha256(msg), n);
}

std::uint32_t subchannel_hash(const std::vector<std::uint8_t>& payload, const std::string& key,
                              int bits) {
    if (bits == 0) return 0;
    if (bits < 0 || bits > 32) throw InvalidParameter("subchannel_hash: bits must be in [0,32]");
    auto msg = key_block(key, "sc");
    msg.insert(msg.end(), payload.begin(), payload.end());
    const Bits b = first_bits(sha256(msg), static_cast<std::size_t>(bits));
    return static_cast<std::uint32_t>(bits_to_uint(b));
}

std::uint8_t watchdog_checksum(const Bits& fragment, const std::string& key) {
    if (fragment.empty()) throw InvalidParameter("watchdog_checksum: empty fragment");
    auto msg = key_block(key, "wd");
    put_u32be(msg, static_cast<std::uint32_t>(fragment.size()));
    auto packed = bits_pack(fragment);
    msg.insert(msg.end(), packed.begin(), packed.end());
    return static_cast<std::uint8_t>(bits_to_uint(first_bits(sha256(msg), 6)));
}

} // namespace shp
