#pragma once

#include "pabo/time.hpp"

namespace pabo {

// Periodic uniform burst source: packets_per_generate frames spaced
// send_interval apart, then a pause, repeated until the simulation ends.
struct BurstGenCfg {
    int packets_per_generate = 500;
    TimeNs send_interval = 10 * kNsPerUs;
    TimeNs pause_interval = 200 * kNsPerMs;
    int payload = 1500;
};

struct BurstState {
    int sent_in_current = 0;
    int64_t next_seq = 1;
};

struct BurstTick {
    int64_t seq = 0;
    TimeNs next_after = 0;
};

// One frame per tick; the returned delay places the next tick either
// send_interval away or, after the generating completes, pause_interval
// away.
inline BurstTick burst_source_tick(const BurstGenCfg& cfg, BurstState& st) {
    BurstTick t{st.next_seq++, cfg.send_interval};
    if (++st.sent_in_current >= cfg.packets_per_generate) {
        st.sent_in_current = 0;
        t.next_after = cfg.pause_interval;
    }
    return t;
}

}  // namespace pabo
