#pragma once

#include <cmath>
#include <stdexcept>

namespace pabo {

// Knobs of the bounce probability: theta is the queue-utilization threshold
// below which no bouncing happens, lambda the exponential decay constant.
// Larger theta narrows the set of switches that bounce; larger lambda makes
// bouncing more aggressive once past the threshold.
struct BounceParams {
    double theta = 0.8;
    double lambda = 50.0;
};

// Probability that a frame gets bounced to its previous hop, given the
// destined queue's utilization u and the frame's bounce count n:
//
//            0                                          u <= theta
//   P(u,n) = (e^{lambda(theta-u)/(n+1)} - 1)
//            ---------------------------------          theta < u <= 1
//            (e^{lambda(theta-1)/(n+1)} - 1)
//
// Evaluated through expm1 on the combined (negative) exponents, so large
// lambda/(n+1) degrades gracefully toward 1 instead of overflowing the
// intermediate e^{lambda/(n+1)} factor. P(1,n) == 1 bit-exactly because
// numerator and denominator coincide at u == 1. lambda == 0 is accepted and
// evaluates the analytic limit, a linear ramp from (theta,0) to (1,1).
inline double bounce_probability(double u, int n, const BounceParams& p) {
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("queue utilization outside [0,1]");
    if (n < 0) throw std::invalid_argument("negative bounce count");
    if (p.lambda < 0.0 || p.theta < 0.0 || p.theta > 1.0)
        throw std::invalid_argument("bounce parameters out of range");

    if (u <= p.theta) return 0.0;
    if (p.lambda == 0.0) return (u - p.theta) / (1.0 - p.theta);

    const double k = p.lambda / (n + 1);
    const double num = std::expm1(k * (p.theta - u));
    const double den = std::expm1(k * (p.theta - 1.0));
    return num / den;
}

}  // namespace pabo
