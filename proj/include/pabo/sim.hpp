#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "pabo/bounce.hpp"
#include "pabo/dual_queue.hpp"
#include "pabo/engine.hpp"
#include "pabo/fib.hpp"
#include "pabo/frame.hpp"
#include "pabo/metrics.hpp"
#include "pabo/scenario.hpp"
#include "pabo/topology.hpp"
#include "pabo/traffic.hpp"
#include "pabo/transport.hpp"

namespace pabo {

// A scenario whose declared capacities cannot hold the traffic (bounce
// queue or sender buffer overflow in pabo mode). Loud by design: silently
// dropping would fake the zero-loss property.
class ScenarioError : public SimError {
  public:
    explicit ScenarioError(const std::string& what) : SimError(what) {}
};

struct TraceRow {
    TimeNs t;
    uint64_t frame;
    int32_t flow;
    int64_t seq;
    int32_t node;
    const char* event;
    int32_t bounced_hop, bounced_distance, max_bounced_distance, total_hop;
};

struct SwitchStats {
    int64_t bounces = 0;
    int64_t forwards = 0;
    int64_t drops = 0;
};

struct RequestRec {
    TimeNs sent_at = -1;
    TimeNs completed_at = -1;
    bool complete = false;
};

struct QueueOut {
    std::string node;
    int port = 0;
    std::string queue;  // "normal" | "bounce"
    int capacity = 0;
    double mean_util = 0;
    int peak = 0;
    double above_theta_frac = 0;  // normal queues only
    std::vector<std::pair<TimeNs, int>> series;
};

struct FlowOut {
    int id = 0;
    std::string name, src, dst;
    bool is_rr = false;
    int64_t segments_sent = 0;
    int64_t unique_received = 0;
    int64_t duplicates = 0;
    int64_t retransmissions = 0;
    double delay_sum_ns = 0;
    std::vector<RequestRec> requests;  // one per request; bursts get a single pseudo-record
    std::vector<int64_t> displacements;
    int64_t d_threshold = 0;
    double entropy = 0;
};

struct RunResult {
    ScenarioConfig cfg;
    uint64_t cfg_hash = 0;
    RunStats engine;

    // frame conservation (all kinds)
    int64_t created = 0, delivered = 0, dropped = 0;
    int64_t residual_queued = 0, residual_wire = 0;
    // data-frame detail
    int64_t data_created = 0, data_delivered = 0, data_dropped = 0, data_duplicates = 0;
    int64_t bounce_events = 0;
    int64_t bounced_frames = 0;  // delivered data frames bounced at least once
    int64_t scheduler_violations = 0;
    int64_t delay_bound_violations = 0;
    int64_t hop_algebra_violations = 0;

    std::map<std::string, SwitchStats> node_stats;  // switches and hosts with activity
    std::map<int, int64_t> totalhop_hist;           // delivered data frames
    std::map<int, int64_t> maxdist_hist;
    double delay_sum_ns = 0;
    int64_t delay_count = 0;

    std::vector<FlowOut> flows;
    ReorderDistribution rd_pooled;
    double entropy_pooled = 0;

    std::vector<QueueOut> queues;
    double util_variance = 0;
    double time_ratio = 0;

    std::vector<TraceRow> trace;
    std::vector<std::string> node_names;  // resolves TraceRow.node

    double drop_rate() const {
        return data_created ? static_cast<double>(data_dropped) / data_created : 0.0;
    }
    double bounce_fraction() const {
        return data_delivered ? static_cast<double>(bounced_frames) / data_delivered : 0.0;
    }
    double mean_delay_ns() const { return delay_count ? delay_sum_ns / delay_count : 0.0; }
    double mean_total_hop() const {
        int64_t n = 0, s = 0;
        for (auto& [h, c] : totalhop_hist) {
            n += c;
            s += h * c;
        }
        return n ? static_cast<double>(s) / n : 0.0;
    }
    double mean_fct_ns() const {
        double s = 0;
        int64_t n = 0;
        for (auto& f : flows)
            for (auto& r : f.requests)
                if (r.complete) {
                    s += static_cast<double>(r.completed_at - r.sent_at);
                    ++n;
                }
        return n ? s / n : 0.0;
    }
    int64_t incomplete_requests() const {
        int64_t n = 0;
        for (auto& f : flows)
            for (auto& r : f.requests)
                if (r.sent_at >= 0 && !r.complete) ++n;
        return n;
    }
};

class Simulation {
  public:
    explicit Simulation(ScenarioConfig cfg, bool collect_series = true,
                        bool collect_trace = false)
        : cfg_(std::move(cfg)),
          engine_(cfg_.seed),
          collect_series_(collect_series),
          collect_trace_(collect_trace) {
        validate(cfg_);
        net_ = build_topology(cfg_.topology, cfg_.link_rate_bps);
        params_ = BounceParams{cfg_.theta, cfg_.lambda};
        init_nodes();
        install_traffic();
    }

    RunResult run() {
        auto stats = engine_.run(cfg_.duration);
        return finalize(stats);
    }

    const Network& network() const { return net_; }
    Engine& engine() { return engine_; }

  private:
    struct PortRt {
        DualQueue q;
        FibUtil fib;  // tracks the normal queue; the Util column of the FIB
        bool busy = false;
        TimeNs last_t = 0;
        double normal_integral = 0, bounce_integral = 0;  // occupancy * ns
        TimeNs above_theta = 0;
        bool ever_above = false;
        int normal_peak = 0, bounce_peak = 0;
        std::vector<std::pair<TimeNs, int>> normal_series, bounce_series;
    };

    struct NodeRt {
        std::vector<PortRt> ports;
        SwitchStats stats;
    };

    struct FlowRt {
        int id = 0;
        std::string name;
        int src_host = -1, dst_host = -1;  // data direction
        bool is_rr = false;
        BurstGenCfg bcfg;
        BurstState bstate;
        Sender sender;
        Receiver receiver;
        SessionCfg scfg;
        std::vector<RequestRec> requests;
        int requests_sent = 0;
        int requests_completed = 0;
        bool rto_armed = false;
        TimeNs rto_at = 0;
        EventId rto_event;
        int64_t frames_sent = 0;
        double delay_sum_ns = 0;
        int64_t delivered_unique = 0;
        int base_hops = 0;  // table-driven path length, for the hop algebra check
    };

    void init_nodes() {
        rt_.resize(net_.node_count());
        for (int n = 0; n < net_.node_count(); ++n) {
            bool host = net_.info(n).is_host;
            int ncap = host ? cfg_.host_normal_cap() : cfg_.switch_normal_cap();
            int bcap = host ? cfg_.host_bounce_cap() : cfg_.switch_bounce_cap();
            rt_[n].ports.resize(net_.port_count(n));
            for (auto& p : rt_[n].ports) {
                p.q = DualQueue(ncap, bcap);
                p.fib = FibUtil{ncap};
            }
        }
    }

    void install_traffic() {
        for (const auto& block : cfg_.traffic) {
            if (block.kind == TrafficBlock::Kind::burst) {
                for (const auto& sender : block.burst.senders) {
                    int fid = static_cast<int>(flows_.size());
                    FlowRt fl;
                    fl.id = fid;
                    fl.src_host = net_.host_id(sender);
                    fl.dst_host = net_.host_id(block.burst.receiver);
                    fl.name = sender + "->" + block.burst.receiver;
                    fl.bcfg.packets_per_generate = block.burst.packets_per_generate;
                    fl.bcfg.send_interval = block.burst.send_interval;
                    fl.bcfg.pause_interval = block.burst.pause_interval;
                    fl.bcfg.payload = block.burst.payload;
                    fl.base_hops = path_hops(net_, fl.src_host, fl.dst_host);
                    flows_.push_back(std::move(fl));
                    engine_.schedule(0, EventKind::generator_tick,
                                     [this, fid] { burst_tick(fid); });
                }
            } else {
                for (const auto& server : block.rr.servers) {
                    int fid = static_cast<int>(flows_.size());
                    FlowRt fl;
                    fl.id = fid;
                    fl.src_host = net_.host_id(server);
                    fl.dst_host = net_.host_id(block.rr.client);
                    fl.name = server + "->" + block.rr.client;
                    fl.is_rr = true;
                    fl.scfg.request_len = block.rr.request_len;
                    fl.scfg.reply_len = block.rr.reply_len;
                    fl.scfg.requests_per_session = block.rr.requests_per_session;
                    fl.scfg.inter_request_gap = block.rr.inter_request_gap;
                    fl.scfg.advertised_window = block.rr.advertised_window;
                    fl.scfg.mss = block.rr.mss;
                    fl.scfg.header_len = block.rr.header_len;
                    fl.sender = Sender(cfg_.is_baseline() ? TransportMode::reno
                                                          : TransportMode::pabo,
                                       fl.scfg);
                    fl.requests.resize(fl.scfg.requests_per_session);
                    fl.base_hops = path_hops(net_, fl.src_host, fl.dst_host);
                    flows_.push_back(std::move(fl));
                    for (int k = 0; k < block.rr.requests_per_session; ++k)
                        engine_.schedule(static_cast<TimeNs>(k) * block.rr.inter_request_gap,
                                         EventKind::generator_tick,
                                         [this, fid, k] { send_request(fid, k); });
                }
            }
        }
    }

    // ---- traffic drivers ----

    void burst_tick(int fid) {
        FlowRt& fl = flows_[fid];
        auto tick = burst_source_tick(fl.bcfg, fl.bstate);
        auto f = make_frame(FrameKind::data, fl, tick.seq, fl.bcfg.payload);
        f->send_order = tick.seq;  // emitted strictly in order
        ++fl.frames_sent;
        host_emit(fl.src_host, std::move(f));
        engine_.schedule(engine_.now() + tick.next_after, EventKind::generator_tick,
                         [this, fid] { burst_tick(fid); });
    }

    void send_request(int fid, int k) {
        FlowRt& fl = flows_[fid];
        fl.requests[k].sent_at = engine_.now();
        ++fl.requests_sent;
        auto f = std::make_unique<Frame>();
        f->id = next_frame_id_++;
        f->flow = fid;
        f->kind = FrameKind::request;
        f->payload_len = fl.scfg.request_len;
        f->reply_len = fl.scfg.reply_len;
        f->request_index = k;
        f->src = net_.info(fl.dst_host).mac;  // client asks
        f->dst = net_.info(fl.src_host).mac;
        f->created_at = engine_.now();
        count_created(*f);
        host_emit(fl.dst_host, std::move(f));
    }

    FramePtr make_frame(FrameKind kind, const FlowRt& fl, int64_t seq, int payload) {
        auto f = std::make_unique<Frame>();
        f->id = next_frame_id_++;
        f->flow = fl.id;
        f->seq = seq;
        f->kind = kind;
        f->payload_len = payload;
        f->src = net_.info(fl.src_host).mac;
        f->dst = net_.info(fl.dst_host).mac;
        f->created_at = engine_.now();
        count_created(*f);
        return f;
    }

    void emit_segments(FlowRt& fl, const std::vector<SegmentSend>& segs) {
        for (const auto& ss : segs) {
            auto f = make_frame(FrameKind::data, fl, ss.seq, fl.scfg.frame_payload(ss.len));
            f->send_order = ss.send_order;
            ++fl.frames_sent;
            host_emit(fl.src_host, std::move(f));
        }
    }

    void sync_rto(FlowRt& fl) {
        auto want = fl.sender.rto_deadline();
        if (fl.rto_armed && (!want || *want != fl.rto_at)) {
            engine_.cancel(fl.rto_event);
            fl.rto_armed = false;
        }
        if (want && !fl.rto_armed) {
            fl.rto_at = *want;
            fl.rto_event = engine_.schedule(*want, EventKind::timer,
                                            [this, fid = fl.id] { on_rto(fid); });
            fl.rto_armed = true;
        }
    }

    void on_rto(int fid) {
        FlowRt& fl = flows_[fid];
        fl.rto_armed = false;
        std::vector<SegmentSend> out;
        fl.sender.on_rto(engine_.now(), out);
        emit_segments(fl, out);
        sync_rto(fl);
    }

    // ---- queue and wire machinery ----

    // Accumulate time-weighted occupancy up to now; call before and after
    // any occupancy change.
    void touch(PortRt& pr) {
        TimeNs now = engine_.now();
        TimeNs dt = now - pr.last_t;
        if (dt > 0) {
            pr.normal_integral += static_cast<double>(pr.fib.occupancy) * dt;
            pr.bounce_integral += static_cast<double>(pr.q.bounce_size()) * dt;
            if (pr.fib.clamped_util() > cfg_.theta) {
                pr.above_theta += dt;
                pr.ever_above = true;
            }
            pr.last_t = now;
        }
    }

    void sample(PortRt& pr) {
        if (!collect_series_) return;
        pr.normal_series.emplace_back(engine_.now(), static_cast<int>(pr.q.normal_size()));
        if (pr.q.bounce_capacity() > 0)
            pr.bounce_series.emplace_back(engine_.now(), static_cast<int>(pr.q.bounce_size()));
    }

    // Emission and re-injection path at hosts. Fresh frames enter the normal
    // queue; returned bounced frames enter the bounce queue and get priority.
    void host_emit(int host, FramePtr f, bool to_bounce = false) {
        PortRt& pr = rt_[host].ports[0];
        touch(pr);
        record_forward(*f);  // covers the upcoming host-to-switch traversal
        if (to_bounce) {
            if (pr.q.bounce_full())
                throw ScenarioError("sender bounce buffer overflow at " + net_.info(host).name +
                                    " at " + format_time(engine_.now()));
            trace(*f, host, "enqueue");
            pr.q.push_bounce(std::move(f));
            pr.bounce_peak = std::max(pr.bounce_peak, static_cast<int>(pr.q.bounce_size()));
        } else {
            if (pr.q.normal_full()) {
                if (cfg_.is_baseline()) {
                    drop(host, std::move(f));
                    return;
                }
                throw ScenarioError("sender buffer overflow at " + net_.info(host).name +
                                    " at " + format_time(engine_.now()));
            }
            trace(*f, host, "enqueue");
            pr.q.push_normal(std::move(f));
            pr.fib.on_enqueue();
            pr.normal_peak = std::max(pr.normal_peak, pr.fib.occupancy);
        }
        sample(pr);
        try_transmit(host, 0);
    }

    void try_transmit(int node, int port) {
        PortRt& pr = rt_[node].ports[port];
        if (pr.busy || pr.q.empty()) return;
        touch(pr);
        auto popped = pr.q.pop_next();
        if (popped.from_normal) {
            pr.fib.on_dequeue();
            if (pr.q.bounce_size() > 0) ++scheduler_violations_;  // must never happen
        }
        sample(pr);
        trace(*popped.frame, node, "dequeue");
        pr.busy = true;

        const LinkParams& lp = net_.link(node, port);
        const PortPeer peer = net_.peer(node, port);
        TimeNs wt = wire_time_ns(popped.frame->payload_len, lp.rate_bps);
        uint64_t id = popped.frame->id;
        wires_.emplace(id, std::move(popped.frame));
        engine_.schedule(engine_.now() + wt + lp.prop_delay_ns, EventKind::frame_arrival,
                         [this, n = peer.node, p = peer.port, id] { frame_arrival(n, p, id); });
        engine_.schedule(engine_.now() + wt, EventKind::tx_complete,
                         [this, node, port] { tx_complete(node, port); });
    }

    void tx_complete(int node, int port) {
        rt_[node].ports[port].busy = false;
        try_transmit(node, port);
    }

    void frame_arrival(int node, int port, uint64_t frame_id) {
        auto it = wires_.find(frame_id);
        if (it == wires_.end()) throw SimError("frame vanished from the wire");
        FramePtr f = std::move(it->second);
        wires_.erase(it);
        if (net_.info(node).is_host)
            host_arrival(node, std::move(f));
        else
            switch_arrival(node, port, std::move(f));
    }

    // ---- switch pipeline ----

    // Utilization the destined lane would have after admitting this frame.
    // Reading the would-be occupancy keeps P at 1 before the lane actually
    // fills, so a data frame can never be forwarded into a full lane.
    static double admit_util(int occupancy, int capacity) {
        double u = static_cast<double>(occupancy + 1) / capacity;
        return u > 1.0 ? 1.0 : u;
    }

    void switch_arrival(int sw, int in_port, FramePtr f) {
        NodeRt& rt = rt_[sw];
        if (!cfg_.is_baseline() && !f->bounced)  // forward arrival: remember the way back
            f->upstream_ports.push_back(static_cast<int16_t>(in_port));

        int out = net_.route(sw, f->dst);
        PortRt& outp = rt.ports[out];
        // Frames that have been bounced at least once retry through the
        // bounce lane: they keep strict priority until delivered, which pays
        // their bouncing detour back as reduced queueing delay. They stay off
        // the Util column, so congestion pressure reaches fresh traffic only
        // through normal-queue starvation.
        const bool priority_lane = !cfg_.is_baseline() && f->bounced_hop > 0;

        if (!cfg_.is_baseline() && f->kind == FrameKind::data) {
            double u = priority_lane
                           ? admit_util(static_cast<int>(outp.q.bounce_size()),
                                        outp.q.bounce_capacity())
                           : admit_util(outp.fib.occupancy, outp.q.normal_capacity());
            double p = bounce_probability(u, f->bounced_hop, params_);
            if (p > 0.0 && engine_.stream("bounce/" + net_.info(sw).name).next_double() < p) {
                bounce(sw, std::move(f));
                return;
            }
        }
        // forward toward the destination
        if (!priority_lane && outp.q.normal_full()) {
            drop(sw, std::move(f));  // reachable only for never-bounced ack/request frames
            return;
        }
        record_forward(*f);
        ++rt.stats.forwards;
        if (priority_lane) {
            if (outp.q.bounce_full())
                throw ScenarioError("bounce queue overflow at " + net_.info(sw).name +
                                    " port " + std::to_string(out) + " at " +
                                    format_time(engine_.now()));
            touch(outp);
            trace(*f, sw, "forward");
            outp.q.push_bounce(std::move(f));
            outp.bounce_peak = std::max(outp.bounce_peak, static_cast<int>(outp.q.bounce_size()));
        } else {
            touch(outp);
            trace(*f, sw, "forward");
            outp.q.push_normal(std::move(f));
            outp.fib.on_enqueue();
            outp.normal_peak = std::max(outp.normal_peak, outp.fib.occupancy);
        }
        sample(outp);
        try_transmit(sw, out);
    }

    // Redirect to the previous hop on the frame's forwarding path. For a
    // frame that arrived traveling forward this is its arrival port; for a
    // frame already traveling backward it is the port it originally arrived
    // through, so repeated bounces walk back toward the source.
    void bounce(int sw, FramePtr f) {
        if (f->upstream_ports.empty())
            throw SimError("bounce with empty upstream path at " + net_.info(sw).name);
        int target = f->upstream_ports.back();
        f->upstream_ports.pop_back();
        record_bounce(*f);
        ++rt_[sw].stats.bounces;
        ++bounce_events_;
        PortRt& tp = rt_[sw].ports[target];
        if (tp.q.bounce_full())
            throw ScenarioError("bounce queue overflow at " + net_.info(sw).name + " port " +
                                std::to_string(target) + " at " + format_time(engine_.now()));
        touch(tp);
        trace(*f, sw, "bounce");
        tp.q.push_bounce(std::move(f));
        tp.bounce_peak = std::max(tp.bounce_peak, static_cast<int>(tp.q.bounce_size()));
        sample(tp);
        try_transmit(sw, target);
    }

    void drop(int node, FramePtr f) {
        ++dropped_;
        if (f->kind == FrameKind::data) ++data_dropped_;
        ++rt_[node].stats.drops;
        trace(*f, node, "drop");
        // frame destroyed here
    }

    // ---- host pipeline ----

    void host_arrival(int host, FramePtr f) {
        const NodeInfo& info = net_.info(host);
        if (f->dst == info.mac) {
            deliver(host, std::move(f));
            return;
        }
        if (f->bounced && f->src == info.mac) {
            // pushed all the way back to its source: re-inject for another try
            ++rt_[host].stats.forwards;
            trace(*f, host, "forward");
            host_emit(host, std::move(f), /*to_bounce=*/true);
            return;
        }
        throw SimError("misrouted frame " + std::to_string(f->id) + " at " + info.name +
                       " (dst " + to_string(f->dst) + ")");
    }

    void deliver(int host, FramePtr f) {
        ++delivered_;
        trace(*f, host, "deliver");
        switch (f->kind) {
            case FrameKind::data: {
                FlowRt& fl = flows_[f->flow];
                auto res = fl.receiver.on_data(f->seq, f->send_order);
                if (res.duplicate) {
                    ++data_duplicates_;
                } else {
                    ++data_delivered_;
                    ++fl.delivered_unique;
                    TimeNs delay = engine_.now() - f->created_at;
                    delay_sum_ += static_cast<double>(delay);
                    ++delay_count_;
                    fl.delay_sum_ns += static_cast<double>(delay);
                    ++totalhop_hist_[f->total_hop];
                    ++maxdist_hist_[f->max_bounced_distance];
                    if (f->bounced_hop > 0) ++bounced_frames_;
                    if (delay < f->total_hop * wire_time_ns(f->payload_len, cfg_.link_rate_bps))
                        ++delay_bound_violations_;
                    if (f->total_hop != fl.base_hops + 2 * f->bounced_hop)
                        ++hop_algebra_violations_;
                }
                if (fl.is_rr) {
                    send_ack(fl);
                    int64_t segs = fl.scfg.segments_per_reply();
                    while (fl.requests_completed < fl.requests_sent &&
                           fl.receiver.cum() >=
                               static_cast<int64_t>(fl.requests_completed + 1) * segs) {
                        fl.requests[fl.requests_completed].completed_at = engine_.now();
                        fl.requests[fl.requests_completed].complete = true;
                        ++fl.requests_completed;
                    }
                }
                break;
            }
            case FrameKind::ack: {
                FlowRt& fl = flows_[f->flow];
                std::vector<SegmentSend> out;
                fl.sender.on_ack(f->ack_seq, engine_.now(), out);
                emit_segments(fl, out);
                sync_rto(fl);
                break;
            }
            case FrameKind::request: {
                FlowRt& fl = flows_[f->flow];
                std::vector<SegmentSend> out;
                fl.sender.on_request(engine_.now(), out);
                emit_segments(fl, out);
                sync_rto(fl);
                break;
            }
        }
    }

    void send_ack(FlowRt& fl) {
        auto f = std::make_unique<Frame>();
        f->id = next_frame_id_++;
        f->flow = fl.id;
        f->kind = FrameKind::ack;
        f->payload_len = 0;
        f->ack_seq = fl.receiver.cum();
        f->src = net_.info(fl.dst_host).mac;
        f->dst = net_.info(fl.src_host).mac;
        f->created_at = engine_.now();
        count_created(*f);
        host_emit(fl.dst_host, std::move(f));
    }

    // ---- bookkeeping ----

    void count_created(const Frame& f) {
        ++created_;
        if (f.kind == FrameKind::data) ++data_created_;
    }

    void trace(const Frame& f, int node, const char* event) {
        if (!collect_trace_) return;
        trace_.push_back({engine_.now(), f.id, f.flow, f.seq, node, event, f.bounced_hop,
                          f.bounced_distance, f.max_bounced_distance, f.total_hop});
    }

    RunResult finalize(const RunStats& stats) {
        RunResult r;
        r.cfg = cfg_;
        r.cfg_hash = config_hash(cfg_);
        r.engine = stats;
        r.created = created_;
        r.delivered = delivered_;
        r.dropped = dropped_;
        r.data_created = data_created_;
        r.data_delivered = data_delivered_;
        r.data_dropped = data_dropped_;
        r.data_duplicates = data_duplicates_;
        r.bounce_events = bounce_events_;
        r.bounced_frames = bounced_frames_;
        r.scheduler_violations = scheduler_violations_;
        r.delay_bound_violations = delay_bound_violations_;
        r.hop_algebra_violations = hop_algebra_violations_;
        r.totalhop_hist = totalhop_hist_;
        r.maxdist_hist = maxdist_hist_;
        r.delay_sum_ns = delay_sum_;
        r.delay_count = delay_count_;
        r.residual_wire = static_cast<int64_t>(wires_.size());

        const double dur = static_cast<double>(cfg_.duration);
        std::vector<double> per_switch_mean;
        std::vector<double> above_fracs;
        for (int n = 0; n < net_.node_count(); ++n) {
            NodeRt& rt = rt_[n];
            const bool is_host = net_.info(n).is_host;
            double occ_int = 0, cap_total = 0;
            for (int p = 0; p < static_cast<int>(rt.ports.size()); ++p) {
                PortRt& pr = rt.ports[p];
                touch(pr);  // flush to end of run
                r.residual_queued += static_cast<int64_t>(pr.q.total_size());

                QueueOut qn;
                qn.node = net_.info(n).name;
                qn.port = p;
                qn.queue = "normal";
                qn.capacity = pr.q.normal_capacity();
                qn.mean_util = pr.normal_integral / (dur * pr.q.normal_capacity());
                qn.peak = pr.normal_peak;
                qn.above_theta_frac = static_cast<double>(pr.above_theta) / dur;
                qn.series = std::move(pr.normal_series);
                r.queues.push_back(std::move(qn));
                if (!is_host && pr.ever_above)
                    above_fracs.push_back(static_cast<double>(pr.above_theta) / dur);

                if (pr.q.bounce_capacity() > 0) {
                    QueueOut qb;
                    qb.node = net_.info(n).name;
                    qb.port = p;
                    qb.queue = "bounce";
                    qb.capacity = pr.q.bounce_capacity();
                    qb.mean_util = pr.bounce_integral / (dur * pr.q.bounce_capacity());
                    qb.peak = pr.bounce_peak;
                    qb.series = std::move(pr.bounce_series);
                    r.queues.push_back(std::move(qb));
                }
                occ_int += pr.normal_integral + pr.bounce_integral;
                cap_total += pr.q.normal_capacity() + pr.q.bounce_capacity();
            }
            if (!is_host) per_switch_mean.push_back(occ_int / (dur * cap_total));
            if (rt.stats.bounces || rt.stats.forwards || rt.stats.drops || !is_host)
                r.node_stats[net_.info(n).name] = rt.stats;
        }
        r.util_variance = util_variance(per_switch_mean);
        r.time_ratio = time_ratio(above_fracs);

        std::vector<int64_t> pooled;
        int64_t pooled_dt = cfg_.d_threshold;
        for (auto& fl : flows_) {
            FlowOut fo;
            fo.id = fl.id;
            fo.name = fl.name;
            fo.src = net_.info(fl.src_host).name;
            fo.dst = net_.info(fl.dst_host).name;
            fo.is_rr = fl.is_rr;
            fo.segments_sent = fl.is_rr ? fl.sender.segments_sent() : fl.frames_sent;
            fo.unique_received = fl.receiver.unique_received();
            fo.duplicates = fl.receiver.duplicates();
            fo.retransmissions = fl.is_rr ? fl.sender.retransmissions() : 0;
            fo.delay_sum_ns = fl.delay_sum_ns;
            if (fl.is_rr) {
                fo.requests = fl.requests;
            } else {
                RequestRec rec;
                rec.sent_at = 0;
                rec.complete = fl.delivered_unique == fl.frames_sent && fl.frames_sent > 0;
                rec.completed_at = rec.complete ? stats.end_clock : -1;
                fo.requests.push_back(rec);
            }
            for (const auto& pr : fl.receiver.pairs())
                fo.displacements.push_back(displacement(pr.send_order, pr.recv_order));
            // default threshold: the stream length, so nothing is excluded
            fo.d_threshold = cfg_.d_threshold > 0
                                 ? cfg_.d_threshold
                                 : std::max<int64_t>(1, fo.segments_sent);
            if (!fo.displacements.empty())
                fo.entropy = reorder_entropy(reorder_density(fo.displacements, fo.d_threshold));
            pooled.insert(pooled.end(), fo.displacements.begin(), fo.displacements.end());
            if (cfg_.d_threshold <= 0) pooled_dt = std::max(pooled_dt, fo.d_threshold);
            r.flows.push_back(std::move(fo));
        }
        if (pooled_dt <= 0) pooled_dt = 1;
        r.rd_pooled = reorder_density(pooled, pooled_dt);
        r.entropy_pooled = reorder_entropy(r.rd_pooled);

        r.trace = std::move(trace_);
        r.node_names.reserve(net_.node_count());
        for (int n = 0; n < net_.node_count(); ++n) r.node_names.push_back(net_.info(n).name);
        return r;
    }

    ScenarioConfig cfg_;
    Engine engine_;
    bool collect_series_;
    bool collect_trace_;
    Network net_;
    BounceParams params_;

    std::vector<NodeRt> rt_;
    std::vector<FlowRt> flows_;
    std::unordered_map<uint64_t, FramePtr> wires_;
    uint64_t next_frame_id_ = 1;

    int64_t created_ = 0, delivered_ = 0, dropped_ = 0;
    int64_t data_created_ = 0, data_delivered_ = 0, data_dropped_ = 0, data_duplicates_ = 0;
    int64_t bounce_events_ = 0, bounced_frames_ = 0;
    int64_t scheduler_violations_ = 0, delay_bound_violations_ = 0;
    int64_t hop_algebra_violations_ = 0;
    double delay_sum_ = 0;
    int64_t delay_count_ = 0;
    std::map<int, int64_t> totalhop_hist_, maxdist_hist_;
    std::vector<TraceRow> trace_;
};

// Convenience wrapper: build, run, return.
inline RunResult run_scenario(const ScenarioConfig& cfg, bool collect_series = true,
                              bool collect_trace = false) {
    Simulation sim(cfg, collect_series, collect_trace);
    return sim.run();
}

}  // namespace pabo
