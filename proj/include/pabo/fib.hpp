#pragma once

#include <cmath>

#include "pabo/engine.hpp"

namespace pabo {

// The Util column of the forwarding table, tracked per output port. Every
// FIB entry resolving to the port reads this one value, so updating it on
// enqueue/dequeue keeps the whole table consistent. Updates mirror the
// bookkeeping rule u <- u +- 1/C_q; occupancy is kept alongside to catch
// drift or sign errors immediately.
struct FibUtil {
    int capacity = 0;
    int occupancy = 0;
    double util = 0.0;

    void on_enqueue() { bump(+1); }
    void on_dequeue() { bump(-1); }

    // util accumulates in steps of 1/C_q and may sit an ulp outside [0,1];
    // consumers of the Util column read it clamped
    double clamped_util() const { return util < 0.0 ? 0.0 : (util > 1.0 ? 1.0 : util); }

    void bump(int delta) {
        occupancy += delta;
        util += static_cast<double>(delta) / capacity;
        if (occupancy < 0 || occupancy > capacity)
            throw SimError("queue occupancy outside [0,C_q]: " + std::to_string(occupancy));
        if (util < -1e-9 || util > 1.0 + 1e-9)
            throw SimError("utilization outside [0,1]: " + std::to_string(util));
        if (std::fabs(util - static_cast<double>(occupancy) / capacity) > 1e-9)
            throw SimError("utilization drifted from occupancy/C_q");
        if (occupancy == 0) util = 0.0;  // resorb rounding at the empty point
    }
};

}  // namespace pabo
