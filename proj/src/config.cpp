#include "shp/config.hpp"

#include <algorithm>
#include <array>

#include <json.hpp>

namespace shp {

std::string to_string(PoiFilter v) {
    return v == PoiFilter::All ? "all" : "broadcast_domain";
}
std::string to_string(InputSource v) {
    switch (v) {
    case InputSource::Ipd: return "ipd";
    case InputSource::Isd: return "isd";
    case InputSource::Icd: return "icd";
    case InputSource::Ispn: return "ispn";
    case InputSource::Timestamp: return "timestamp";
    default: return "icpn";
    }
}
std::string to_string(SubchannelMode v) {
    switch (v) {
    case SubchannelMode::None: return "none";
    case SubchannelMode::BaseIpd: return "baseipd";
    case SubchannelMode::IpHash: return "iphash";
    default: return "clockhash";
    }
}
std::string to_string(EccVariant v) {
    switch (v) {
    case EccVariant::None: return "none";
    case EccVariant::Hamming: return "hamming";
    case EccVariant::HammingPlus: return "hamming+";
    default: return "inline-hamming+";
    }
}

PoiFilter poi_filter_from_string(const std::string& s) {
    if (s == "all") return PoiFilter::All;
    if (s == "broadcast_domain") return PoiFilter::BroadcastDomain;
    throw ConfigError("unknown poi_filter: " + s);
}
InputSource input_source_from_string(const std::string& s) {
    if (s == "ipd") return InputSource::Ipd;
    if (s == "isd") return InputSource::Isd;
    if (s == "icd") return InputSource::Icd;
    if (s == "ispn") return InputSource::Ispn;
    if (s == "timestamp") return InputSource::Timestamp;
    if (s == "icpn") return InputSource::Icpn;
    throw ConfigError("unknown inputsource: " + s);
}
SubchannelMode subchannel_mode_from_string(const std::string& s) {
    if (s == "none") return SubchannelMode::None;
    if (s == "baseipd") return SubchannelMode::BaseIpd;
    if (s == "iphash") return SubchannelMode::IpHash;
    if (s == "clockhash") return SubchannelMode::ClockHash;
    throw ConfigError("unknown subchanneling_mode: " + s);
}
EccVariant ecc_variant_from_string(const std::string& s) {
    if (s == "none") return EccVariant::None;
    if (s == "hamming") return EccVariant::Hamming;
    if (s == "hamming+") return EccVariant::HammingPlus;
    if (s == "inline-hamming+") return EccVariant::InlineHammingPlus;
    throw ConfigError("unknown ecc: " + s);
}

namespace {
template <std::size_t N>
bool in_set(int v, const std::array<int, N>& set) {
    return std::find(set.begin(), set.end(), v) != set.end();
}
} // namespace

void ChannelConfig::validate() const {
    if (!in_set(bitlength, std::array<int, 4>{2, 3, 4, 8}))
        throw ConfigError("bitlength must be one of {2,3,4,8}");
    if (!in_set(epsilon_places, std::array<int, 5>{0, 1, 3, 4, 6}))
        throw ConfigError("epsilon_places must be one of {0,1,3,4,6}");
    if (!in_set(subchanneling_bits, std::array<int, 4>{0, 2, 4, 8}))
        throw ConfigError("subchanneling_bits must be one of {0,2,4,8}");
    if ((subchanneling_mode == SubchannelMode::None) != (subchanneling_bits == 0))
        throw ConfigError("subchanneling_mode=none iff subchanneling_bits=0");
    if (!in_set(rehash_bits, std::array<int, 4>{0, 2, 4, 7}))
        throw ConfigError("rehash_bits must be one of {0,2,4,7}");
    if (oood_bits < 0) throw ConfigError("oood_bits must be >= 0");
    if (rehash_bits + oood_bits > 8)
        throw ConfigError("rehash_bits + oood_bits exceed the signal octet capacity (8)");
    if (silence_ms < 0) throw ConfigError("silence_ms must be >= 0");
    if (inputsource == InputSource::Ispn && epsilon_places < 1)
        throw ConfigError("ISPN requires epsilon_places >= 1 (integer bucket divisor)");
    Ipv4Subnet::parse(subnet); // throws on malformed prefix
}

std::string ChannelConfig::to_json() const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["bitlength"] = bitlength;
    j["epsilon_places"] = epsilon_places;
    j["poi_filter"] = to_string(poi_filter);
    j["inputsource"] = to_string(inputsource);
    j["subchanneling_mode"] = to_string(subchanneling_mode);
    j["subchanneling_bits"] = subchanneling_bits;
    j["ecc"] = to_string(ecc);
    j["rehash_bits"] = rehash_bits;
    j["oood_bits"] = oood_bits;
    j["silence_ms"] = silence_ms;
    j["shared_key"] = shared_key;
    j["subnet"] = subnet;
    return j.dump(2);
}

ChannelConfig ChannelConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
    ChannelConfig c;
    try {
        if (j.contains("bitlength")) c.bitlength = j["bitlength"].get<int>();
        if (j.contains("epsilon_places")) c.epsilon_places = j["epsilon_places"].get<int>();
        if (j.contains("poi_filter"))
            c.poi_filter = poi_filter_from_string(j["poi_filter"].get<std::string>());
        if (j.contains("inputsource"))
            c.inputsource = input_source_from_string(j["inputsource"].get<std::string>());
        if (j.contains("subchanneling_mode"))
            c.subchanneling_mode =
                subchannel_mode_from_string(j["subchanneling_mode"].get<std::string>());
        if (j.contains("subchanneling_bits"))
            c.subchanneling_bits = j["subchanneling_bits"].get<int>();
        if (j.contains("ecc")) c.ecc = ecc_variant_from_string(j["ecc"].get<std::string>());
        if (j.contains("rehash_bits")) c.rehash_bits = j["rehash_bits"].get<int>();
        if (j.contains("oood_bits")) c.oood_bits = j["oood_bits"].get<int>();
        if (j.contains("silence_ms")) c.silence_ms = j["silence_ms"].get<double>();
        if (j.contains("shared_key")) c.shared_key = j["shared_key"].get<std::string>();
        if (j.contains("subnet")) c.subnet = j["subnet"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config field: ") + e.what());
    }
    c.validate();
    return c;
}

} // namespace shp
