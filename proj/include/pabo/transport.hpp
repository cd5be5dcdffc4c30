#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "pabo/time.hpp"

namespace pabo {

// Request-reply session parameters. The client sends request_len bytes and
// the server streams reply_len bytes back as mss-sized segments under a
// simple windowed transport.
struct SessionCfg {
    int request_len = 200;
    int64_t reply_len = 1 << 20;
    int requests_per_session = 4;
    TimeNs inter_request_gap = kNsPerSec;
    int64_t advertised_window = 45535;
    int mss = 1500;        // sequence bytes per full segment
    int header_len = 0;    // transport/network header carried on the wire

    int64_t segments_per_reply() const { return (reply_len + mss - 1) / mss; }
    int tail_len() const {
        int64_t r = reply_len % mss;
        return r == 0 ? mss : static_cast<int>(r);
    }
    // link-layer payload of a segment: its sequence bytes plus headers
    int frame_payload(int seq_bytes) const { return seq_bytes + header_len; }
};

// pabo: slow start without ssthresh, capped by the advertised window, no
//       retransmission and no window reduction of any kind. The network
//       guarantees delivery, so loss recovery would only add noise.
// reno: slow start / congestion avoidance, 3-dup-ACK fast retransmit with
//       fast recovery, RTO with Karn backoff.
enum class TransportMode : uint8_t { pabo, reno };

struct SegmentSend {
    int64_t seq = 0;
    int len = 0;
    int64_t send_order = 0;  // s_i; retransmissions reuse the original
    bool retransmit = false;
};

constexpr TimeNs kRtoInitial = kNsPerSec;
constexpr TimeNs kRtoMin = 200 * kNsPerMs;
constexpr TimeNs kRtoMax = 240 * kNsPerSec;

// Sender half of the transport, segment-granular with byte-denominated
// windows. Sequence numbers run 1..total across all requests of the
// session; requests never overlap, so each request occupies a contiguous
// block of the space.
//
// cursor_ is the next segment to transmit. It normally equals
// highest_sent_+1; a timeout pulls it back to cum_+1 so the unacked region
// is resent go-back-N style as the window reopens.
class Sender {
  public:
    Sender() = default;
    Sender(TransportMode mode, SessionCfg cfg) : mode_(mode), cfg_(cfg) {
        cwnd_ = cfg_.mss;
        ssthresh_ = std::numeric_limits<int64_t>::max() / 4;
    }

    int seg_len(int64_t seq) const {
        int64_t idx = (seq - 1) % cfg_.segments_per_reply();
        return idx == cfg_.segments_per_reply() - 1 ? cfg_.tail_len() : cfg_.mss;
    }

    // A request arrived: extend the stream by one reply's worth of segments.
    // The congestion window persists across the session's requests, so a
    // later reply opens with the window the previous episode grew.
    void on_request(TimeNs now, std::vector<SegmentSend>& out) {
        total_segments_ += cfg_.segments_per_reply();
        pump(now, out);
    }

    void on_ack(int64_t ack, TimeNs now, std::vector<SegmentSend>& out) {
        if (ack > cum_) {
            if (mode_ == TransportMode::reno) {
                sample_rtt(ack, now);
                if (in_recovery_) {
                    cwnd_ = ssthresh_;  // deflate on recovery exit
                    in_recovery_ = false;
                } else if (cwnd_ < ssthresh_) {
                    cwnd_ += cfg_.mss;
                } else {
                    cwnd_ += std::max<int64_t>(1, int64_t(cfg_.mss) * cfg_.mss / cwnd_);
                }
            } else {
                cwnd_ += cfg_.mss;  // slow start without ssthresh; never shrinks
            }
            cum_ = ack;
            dup_acks_ = 0;
            if (cursor_ <= cum_) cursor_ = cum_ + 1;
            sent_order_.erase(sent_order_.begin(), sent_order_.upper_bound(cum_));
            meta_.erase(meta_.begin(), meta_.upper_bound(cum_));
            restart_rto(now);
            pump(now, out);
        } else if (mode_ == TransportMode::reno && outstanding() > 0) {
            ++dup_acks_;
            if (in_recovery_) {
                cwnd_ += cfg_.mss;  // inflate per extra dup
                pump(now, out);
            } else if (dup_acks_ == 3) {
                ssthresh_ = std::max<int64_t>(in_flight_bytes() / 2, 2 * cfg_.mss);
                send_one(cum_ + 1, now, out);  // fast retransmit
                cwnd_ = ssthresh_ + 3 * cfg_.mss;
                in_recovery_ = true;
                restart_rto(now);
            }
        }
        // pabo mode ignores duplicate ACKs entirely
    }

    void on_rto(TimeNs now, std::vector<SegmentSend>& out) {
        if (mode_ != TransportMode::reno || outstanding() == 0) {
            rto_deadline_.reset();
            return;
        }
        ssthresh_ = std::max<int64_t>(in_flight_bytes() / 2, 2 * cfg_.mss);
        cwnd_ = cfg_.mss;
        dup_acks_ = 0;
        in_recovery_ = false;
        cursor_ = cum_ + 1;  // go back and resend the unacked region
        rto_current_ = std::min(rto_current_ * 2, kRtoMax);  // Karn backoff
        pump(now, out);
        rto_deadline_ = now + rto_current_;
    }

    std::optional<TimeNs> rto_deadline() const { return rto_deadline_; }

    int64_t cum_acked() const { return cum_; }
    int64_t total_segments() const { return total_segments_; }
    int64_t outstanding() const { return highest_sent_ - cum_; }
    int64_t cwnd_bytes() const { return cwnd_; }
    int64_t window_bytes() const { return std::min(cwnd_, cfg_.advertised_window); }
    int64_t segments_sent() const { return segments_sent_; }
    int64_t retransmissions() const { return retransmissions_; }
    bool done() const { return total_segments_ > 0 && cum_ == total_segments_; }
    const SessionCfg& cfg() const { return cfg_; }
    TransportMode mode() const { return mode_; }

    // Bytes the window accounting considers in flight: the send region
    // between the cumulative ACK and the send cursor.
    int64_t in_flight_bytes() const {
        int64_t bytes = 0;
        for (int64_t s = cum_ + 1; s < cursor_; ++s) bytes += seg_len(s);
        return bytes;
    }

  private:
    void pump(TimeNs now, std::vector<SegmentSend>& out) {
        // whole segments go out while usable window remains, so the last one
        // may overrun the byte window by up to mss-1 (stacks fill the
        // advertised window to the byte; at segment granularity this is the
        // equivalent behavior)
        while (cursor_ <= total_segments_ && in_flight_bytes() < window_bytes()) {
            send_one(cursor_, now, out);
            ++cursor_;
        }
        if (mode_ == TransportMode::reno && outstanding() > 0 && !rto_deadline_)
            rto_deadline_ = now + rto_current_;
    }

    // Transmit one segment; first transmissions get a fresh send order,
    // resends reuse the order recorded in the live sentSeqQueue.
    void send_one(int64_t seq, TimeNs now, std::vector<SegmentSend>& out) {
        bool retx = seq <= highest_sent_;
        int64_t s_i;
        if (retx) {
            auto it = sent_order_.find(seq);
            if (it == sent_order_.end())
                throw std::logic_error("resend of a segment with no recorded send order");
            s_i = it->second;
            auto mit = meta_.find(seq);
            if (mit != meta_.end()) mit->second.retransmitted = true;
            ++retransmissions_;
        } else {
            s_i = next_send_order_++;
            sent_order_[seq] = s_i;
            meta_[seq] = {now, false};
            highest_sent_ = seq;
        }
        out.push_back({seq, seg_len(seq), s_i, retx});
        ++segments_sent_;
    }

    void sample_rtt(int64_t ack, TimeNs now) {
        auto it = meta_.find(ack);
        if (it == meta_.end() || it->second.retransmitted) return;  // Karn
        TimeNs r = now - it->second.sent_at;
        if (srtt_ == 0) {
            srtt_ = r;
            rttvar_ = r / 2;
        } else {
            rttvar_ = (3 * rttvar_ + std::abs(srtt_ - r)) / 4;
            srtt_ = (7 * srtt_ + r) / 8;
        }
        rto_current_ = std::clamp(srtt_ + 4 * rttvar_, kRtoMin, kRtoMax);
    }

    void restart_rto(TimeNs now) {
        if (mode_ != TransportMode::reno) return;
        if (outstanding() > 0)
            rto_deadline_ = now + rto_current_;
        else
            rto_deadline_.reset();
    }

    struct SegMeta {
        TimeNs sent_at = 0;
        bool retransmitted = false;
    };

    TransportMode mode_ = TransportMode::pabo;
    SessionCfg cfg_;
    int64_t total_segments_ = 0;
    int64_t cursor_ = 1;        // next segment to transmit
    int64_t highest_sent_ = 0;  // highest segment ever transmitted
    int64_t cum_ = 0;
    int64_t cwnd_ = 0;
    int64_t ssthresh_ = 0;
    int dup_acks_ = 0;
    bool in_recovery_ = false;
    int64_t next_send_order_ = 1;
    int64_t segments_sent_ = 0;
    int64_t retransmissions_ = 0;
    std::map<int64_t, int64_t> sent_order_;  // live sentSeqQueue: seq -> s_i
    std::map<int64_t, SegMeta> meta_;
    TimeNs srtt_ = 0, rttvar_ = 0;
    TimeNs rto_current_ = kRtoInitial;
    std::optional<TimeNs> rto_deadline_;
};

struct DispPair {
    int64_t seq = 0;
    int64_t send_order = 0;
    int64_t recv_order = 0;
};

// Receiver half: assigns receive orders r_i to first copies only (losses
// and duplicates get none) and tracks the cumulative ACK point. The reorder
// buffer is unbounded; the sender window bounds it in practice.
class Receiver {
  public:
    struct Result {
        bool duplicate = false;
        int64_t recv_order = 0;
        int64_t cum = 0;
    };

    Result on_data(int64_t seq, int64_t send_order) {
        if (seq <= cum_ || ooo_.count(seq)) {
            ++duplicates_;
            return {true, 0, cum_};
        }
        int64_t r = next_recv_order_++;
        pairs_.push_back({seq, send_order, r});
        if (seq == cum_ + 1) {
            ++cum_;
            while (!ooo_.empty() && *ooo_.begin() == cum_ + 1) {
                ooo_.erase(ooo_.begin());
                ++cum_;
            }
        } else {
            ooo_.insert(seq);
        }
        return {false, r, cum_};
    }

    int64_t cum() const { return cum_; }
    int64_t duplicates() const { return duplicates_; }
    int64_t unique_received() const { return next_recv_order_ - 1; }
    const std::vector<DispPair>& pairs() const { return pairs_; }

  private:
    int64_t cum_ = 0;
    int64_t next_recv_order_ = 1;
    int64_t duplicates_ = 0;
    std::set<int64_t> ooo_;
    std::vector<DispPair> pairs_;
};

}  // namespace pabo
