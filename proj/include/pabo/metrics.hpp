#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace pabo {

// d_i = r_i - s_i: positive means the packet arrived later than its send
// order predicted, negative means earlier.
inline int64_t displacement(int64_t send_order, int64_t recv_order) {
    return recv_order - send_order;
}

// RD[k] = S[k]/N over displacements within [-D_T, D_T]. Packets displaced
// beyond the threshold are deemed lost and excluded from both S and N.
struct ReorderDistribution {
    int64_t d_threshold = 0;
    std::map<int64_t, int64_t> s_counts;  // k -> S[k]
    int64_t n = 0;                        // packets within threshold
    int64_t excluded = 0;

    double rd(int64_t k) const {
        auto it = s_counts.find(k);
        return (it == s_counts.end() || n == 0) ? 0.0
                                                : static_cast<double>(it->second) / n;
    }
};

inline ReorderDistribution reorder_density(const std::vector<int64_t>& displacements,
                                           int64_t d_threshold) {
    if (d_threshold <= 0) throw std::invalid_argument("D_T must be positive");
    ReorderDistribution out;
    out.d_threshold = d_threshold;
    for (int64_t d : displacements) {
        if (d > d_threshold || d < -d_threshold) {
            ++out.excluded;
            continue;
        }
        ++out.s_counts[d];
        ++out.n;
    }
    return out;
}

// E_R = -sum RD[k] ln RD[k], with 0 ln 0 := 0. Zero iff delivery was fully
// in order; at most ln(2 D_T + 1).
inline double reorder_entropy(const ReorderDistribution& rd) {
    if (rd.n == 0) return 0.0;
    double e = 0.0;
    for (const auto& [k, c] : rd.s_counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / rd.n;
        e -= p * std::log(p);
    }
    return e < 0.0 ? 0.0 : e;
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

inline double population_variance(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / v.size();
}

// Variance across switches of each switch's time-weighted mean buffer
// utilization (all queues pooled over their combined capacity). One number
// per run; lower means PABO spread the load more evenly.
inline double util_variance(const std::vector<double>& per_switch_mean_util) {
    return population_variance(per_switch_mean_util);
}

// Over the queues whose utilization ever exceeded theta, the mean fraction
// of simulation time spent above theta. Empty set -> 0.
inline double time_ratio(const std::vector<double>& above_fraction_of_triggered) {
    return mean_of(above_fraction_of_triggered);
}

}  // namespace pabo
