#pragma once

#include <optional>
#include <vector>

#include "pabo/mac.hpp"

namespace pabo {

// One route entry. Prefix entries compare pattern octets left to right
// starting after the shared 0A-AA pair; suffix entries compare right to
// left. octets is the number of octets that must match (1..4).
struct RouteEntry {
    MacAddr pattern;
    bool is_suffix = false;
    int octets = 4;
    int port = -1;
};

// Two-level lookup: prefixes first (intra-pod and host routes), then
// suffixes (inter-pod dispersal by the last octets). First match wins
// within each level. Plain exact-match tables are the special case of
// 4-octet prefixes.
class TwoLevelTable {
  public:
    void add_prefix(const MacAddr& pattern, int octets, int port) {
        prefixes_.push_back({pattern, false, octets, port});
    }
    void add_suffix(const MacAddr& pattern, int octets, int port) {
        suffixes_.push_back({pattern, true, octets, port});
    }

    std::optional<int> lookup(const MacAddr& dst) const {
        for (const auto& e : prefixes_)
            if (match_prefix(e, dst)) return e.port;
        for (const auto& e : suffixes_)
            if (match_suffix(e, dst)) return e.port;
        return std::nullopt;
    }

    const std::vector<RouteEntry>& prefixes() const { return prefixes_; }
    const std::vector<RouteEntry>& suffixes() const { return suffixes_; }
    bool empty() const { return prefixes_.empty() && suffixes_.empty(); }

  private:
    static bool match_prefix(const RouteEntry& e, const MacAddr& dst) {
        for (int i = 0; i < e.octets; ++i)
            if (e.pattern.b[2 + i] != dst.b[2 + i]) return false;
        return true;
    }
    static bool match_suffix(const RouteEntry& e, const MacAddr& dst) {
        for (int i = 0; i < e.octets; ++i)
            if (e.pattern.b[5 - i] != dst.b[5 - i]) return false;
        return true;
    }

    std::vector<RouteEntry> prefixes_, suffixes_;
};

}  // namespace pabo
