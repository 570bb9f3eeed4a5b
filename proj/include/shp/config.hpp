#pragma once

#include <cstdint>
#include <string>

#include "shp/errors.hpp"
#include "shp/pdu.hpp"

namespace shp {

enum class PoiFilter : std::uint8_t { All, BroadcastDomain };
enum class InputSource : std::uint8_t { Ipd, Isd, Icd, Ispn, Timestamp, Icpn };
enum class SubchannelMode : std::uint8_t { None, BaseIpd, IpHash, ClockHash };
enum class EccVariant : std::uint8_t { None, Hamming, HammingPlus, InlineHammingPlus };

std::string to_string(PoiFilter v);
std::string to_string(InputSource v);
std::string to_string(SubchannelMode v);
std::string to_string(EccVariant v);
PoiFilter poi_filter_from_string(const std::string& s);
InputSource input_source_from_string(const std::string& s);
SubchannelMode subchannel_mode_from_string(const std::string& s);
EccVariant ecc_variant_from_string(const std::string& s);

// The full channel parameter vector shared by sender and receiver.
//
// epsilon_places is the rounding window expressed as decimal places of a
// second: 0 = 1 s, 1 = 100 ms, 3 = 1 ms, 4 = 100 us, 6 = microsecond
// resolution (no rounding). For ISPN the same value doubles as the integer
// bucket divisor, so ISPN requires epsilon_places >= 1.
struct ChannelConfig {
    int bitlength = 4;                                    // n, in {2,3,4,8}
    int epsilon_places = 3;                               // in {0,1,3,4,6}
    PoiFilter poi_filter = PoiFilter::BroadcastDomain;
    InputSource inputsource = InputSource::Isd;
    SubchannelMode subchanneling_mode = SubchannelMode::None;
    int subchanneling_bits = 0;                           // in {0,2,4,8}
    EccVariant ecc = EccVariant::None;
    int rehash_bits = 0;                                  // m, in {0,2,4,7}
    int oood_bits = 0;                                    // s >= 0, m+s <= 8
    double silence_ms = 2.0;                              // phi
    std::string shared_key = "shp-default-key";
    std::string subnet = "192.168.1.0/24";

    Microseconds silence_us() const {
        return static_cast<Microseconds>(silence_ms * 1000.0 + 0.5);
    }
    Ipv4Subnet subnet_prefix() const { return Ipv4Subnet::parse(subnet); }

    // Throws ConfigError on any invariant violation.
    void validate() const;

    std::string to_json() const;
    static ChannelConfig from_json(const std::string& text);

    bool operator==(const ChannelConfig&) const = default;
};

} // namespace shp
