#include "shp/pdu.hpp"

#include <cstdio>
#include <cstring>

namespace shp {

MacAddr MacAddr::parse(const std::string& s) {
    MacAddr m;
    unsigned v[6];
    if (std::sscanf(s.c_str(), "%x:%x:%x:%x:%x:%x", &v[0], &v[1], &v[2], &v[3], &v[4], &v[5]) != 6)
        throw InputError("bad MAC address: " + s);
    for (int i = 0; i < 6; ++i) {
        if (v[i] > 0xff) throw InputError("bad MAC address: " + s);
        m.bytes[i] = static_cast<std::uint8_t>(v[i]);
    }
    return m;
}

std::string IpAddr::to_string() const {
    if (len == 0) return "";
    char buf[48];
    if (len == 4) {
        std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", bytes[0], bytes[1], bytes[2], bytes[3]);
        return buf;
    }
    std::string out;
    for (int i = 0; i < 16; i += 2) {
        char grp[6];
        std::snprintf(grp, sizeof grp, "%02x%02x", bytes[i], bytes[i + 1]);
        if (!out.empty()) out += ':';
        out += grp;
    }
    return out;
}

IpAddr IpAddr::parse(const std::string& s) {
    IpAddr ip;
    if (s.empty()) return ip;
    if (s.find(':') != std::string::npos) {
        // Full-form colon hex only (eight 16-bit groups); "::" is not needed
        // for trace files we produce.
        ip.len = 16;
        int idx = 0;
        std::size_t pos = 0;
        while (idx < 16) {
            std::size_t next = s.find(':', pos);
            std::string grp = s.substr(pos, next == std::string::npos ? next : next - pos);
            if (grp.empty() || grp.size() > 4) throw InputError("bad IPv6 address: " + s);
            unsigned v = 0;
            for (char c : grp) {
                v <<= 4;
                if (c >= '0' && c <= '9') v |= unsigned(c - '0');
                else if (c >= 'a' && c <= 'f') v |= unsigned(c - 'a' + 10);
                else if (c >= 'A' && c <= 'F') v |= unsigned(c - 'A' + 10);
                else throw InputError("bad IPv6 address: " + s);
            }
            ip.bytes[idx++] = static_cast<std::uint8_t>(v >> 8);
            ip.bytes[idx++] = static_cast<std::uint8_t>(v);
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (idx != 16) throw InputError("bad IPv6 address: " + s);
        return ip;
    }
    unsigned a, b, c, d;
    if (std::sscanf(s.c_str(), "%u.%u.%u.%u", &a, &b, &c, &d) != 4 || a > 255 || b > 255 ||
        c > 255 || d > 255)
        throw InputError("bad IPv4 address: " + s);
    return IpAddr::from_v4((a << 24) | (b << 16) | (c << 8) | d);
}

Ipv4Subnet Ipv4Subnet::parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) throw InputError("subnet must be a.b.c.d/len: " + s);
    IpAddr net = IpAddr::parse(s.substr(0, slash));
    if (!net.is_v4()) throw InputError("subnet must be IPv4: " + s);
    int len = std::stoi(s.substr(slash + 1));
    if (len < 0 || len > 32) throw InputError("bad prefix length: " + s);
    Ipv4Subnet sn;
    sn.prefix_len = len;
    sn.network = net.v4() & (len == 0 ? 0u : ~std::uint32_t(0) << (32 - len));
    return sn;
}

std::string to_string(EtherType t) {
    switch (t) {
    case EtherType::Arp: return "arp";
    case EtherType::Ipv4: return "ipv4";
    case EtherType::Ipv6: return "ipv6";
    default: return "other";
    }
}

EtherType ether_type_from_string(const std::string& s) {
    if (s == "arp") return EtherType::Arp;
    if (s == "ipv4") return EtherType::Ipv4;
    if (s == "ipv6") return EtherType::Ipv6;
    if (s == "other") return EtherType::Other;
    throw InputError("unknown ether_type: " + s);
}

} // namespace shp
