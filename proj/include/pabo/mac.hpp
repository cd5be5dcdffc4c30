#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pabo {

struct MacAddr {
    std::array<uint8_t, 6> b{};
    auto operator<=>(const MacAddr&) const = default;
};

inline std::string to_string(const MacAddr& m) {
    char buf[18];
    std::snprintf(buf, sizeof(buf), "%02X-%02X-%02X-%02X-%02X-%02X", m.b[0], m.b[1], m.b[2],
                  m.b[3], m.b[4], m.b[5]);
    return buf;
}

inline MacAddr mac_from_string(std::string_view s) {
    MacAddr m;
    unsigned v[6];
    if (s.size() != 17 ||
        std::sscanf(std::string(s).c_str(), "%2x-%2x-%2x-%2x-%2x-%2x", &v[0], &v[1], &v[2], &v[3],
                    &v[4], &v[5]) != 6)
        throw std::invalid_argument("bad MAC address: " + std::string(s));
    for (int i = 0; i < 6; ++i) m.b[i] = static_cast<uint8_t>(v[i]);
    return m;
}

// Fattree addressing: the IP 10.pod.switch.id maps one-to-one onto the MAC
// 0A-AA-0A-<pod>-<switch>-<id>. Every address in a Fattree scenario shares
// the 0A-AA prefix; matching always excludes those two octets.
inline MacAddr mac_for_ip(int pod, int sw, int id) {
    if (pod < 0 || pod > 255 || sw < 0 || sw > 255 || id < 0 || id > 255)
        throw std::invalid_argument("MAC component out of octet range");
    return MacAddr{{0x0A, 0xAA, 0x0A, static_cast<uint8_t>(pod), static_cast<uint8_t>(sw),
                    static_cast<uint8_t>(id)}};
}

}  // namespace pabo
