#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "pabo/mac.hpp"
#include "pabo/time.hpp"

namespace pabo {

enum class FrameKind : uint8_t { data, request, ack };

inline const char* to_string(FrameKind k) {
    switch (k) {
        case FrameKind::data: return "data";
        case FrameKind::request: return "request";
        case FrameKind::ack: return "ack";
    }
    return "?";
}

// Link-layer data unit. Besides flow identity and the transport segment
// number it carries the four per-packet counters:
//   bounced_hop           times the frame has been bounced (n_p)
//   bounced_distance      hops it currently sits from its last normally
//                         reached switch; decremented on forward, floor 0
//   max_bounced_distance  farthest it has ever been pushed back
//   total_hop             every link traversed, bounces included, counting
//                         the sender's own emission
// upstream_ports is the frame's record of its forward arrival ports, one
// per normally reached node; a bounce departs through the top entry, so a
// chain of bounces retraces the forwarding path hop by hop.
struct Frame {
    uint64_t id = 0;
    int32_t flow = -1;
    int64_t seq = 0;
    FrameKind kind = FrameKind::data;
    MacAddr src, dst;
    int32_t payload_len = 0;

    int32_t bounced_hop = 0;
    int32_t bounced_distance = 0;
    int32_t max_bounced_distance = 0;
    int32_t total_hop = 0;
    bool bounced = false;  // set on bounce, cleared on normal forwarding

    int64_t send_order = 0;   // s_i, stamped at first transmission
    TimeNs created_at = 0;    // stamped per (re)transmission
    int64_t ack_seq = 0;      // cumulative ack carried by ack frames
    int64_t reply_len = 0;    // expected reply length carried by requests
    int32_t request_index = 0;

    std::vector<int16_t> upstream_ports;
};

using FramePtr = std::unique_ptr<Frame>;

// Counter update when a node redirects the frame to its previous hop.
inline void record_bounce(Frame& f) {
    f.bounced_hop += 1;
    f.bounced_distance += 1;
    f.max_bounced_distance = std::max(f.max_bounced_distance, f.bounced_distance);
    f.total_hop += 1;
    f.bounced = true;
}

// Counter update when a node sends the frame onward toward its destination.
inline void record_forward(Frame& f) {
    f.bounced_distance = std::max(0, f.bounced_distance - 1);
    f.total_hop += 1;
    f.bounced = false;
}

// Ethernet serialization overhead around the payload: 14 header + 4 FCS +
// 8 preamble + 12 inter-frame gap.
constexpr int64_t kWireOverheadBytes = 38;

inline TimeNs wire_time_ns(int64_t payload_bytes, int64_t rate_bps) {
    if (rate_bps <= 0) throw std::invalid_argument("link rate must be positive");
    const int64_t bits = (payload_bytes + kWireOverheadBytes) * 8;
    return bits * kNsPerSec / rate_bps;
}

inline double wire_time_s(int64_t payload_bytes, int64_t rate_bps) {
    if (rate_bps <= 0) throw std::invalid_argument("link rate must be positive");
    return static_cast<double>((payload_bytes + kWireOverheadBytes) * 8) /
           static_cast<double>(rate_bps);
}

}  // namespace pabo
