#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "pabo/sim.hpp"

namespace pabo {

namespace detail {

inline std::string fmt_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string hash_hex(uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw SimError("cannot open for writing: " + p.string());
    return f;
}

}  // namespace detail

// Writes the full metric file set for one run into out_dir:
//   manifest.json            config hash, seeds, headline scalars
//   config.canonical.txt     re-runnable canonical config
//   rd.csv / rd_by_flow.csv  reorder density
//   entropy.csv              pooled and per-flow reorder entropy
//   bounce_by_switch.csv     bounce/forward/drop counts per node
//   max_bounced_distance.csv distribution over delivered data frames
//   totalhop_cdf.csv         CDF of total_hop
//   flows.csv                per-request flow summaries
//   util_summary.csv         per-queue time-weighted means
//   util_timeseries.csv      downsampled occupancy samples
//   trace.csv                event-level rows (only when collected)
inline void write_outputs(const RunResult& r, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    using detail::fmt_g12;
    fs::create_directories(out_dir);

    {
        auto f = detail::open_out(out_dir / "config.canonical.txt");
        f << render(r.cfg);
    }
    {
        auto f = detail::open_out(out_dir / "rd.csv");
        f << "k,s_count,rd\n";
        for (const auto& [k, c] : r.rd_pooled.s_counts)
            f << k << "," << c << "," << fmt_g12(r.rd_pooled.rd(k)) << "\n";
    }
    {
        auto f = detail::open_out(out_dir / "rd_by_flow.csv");
        f << "flow,name,k,s_count,rd\n";
        for (const auto& fo : r.flows) {
            if (fo.displacements.empty()) continue;
            auto rd = reorder_density(fo.displacements, fo.d_threshold);
            for (const auto& [k, c] : rd.s_counts)
                f << fo.id << "," << fo.name << "," << k << "," << c << ","
                  << fmt_g12(rd.rd(k)) << "\n";
        }
    }
    {
        auto f = detail::open_out(out_dir / "entropy.csv");
        f << "scope,n,excluded,entropy\n";
        f << "pooled," << r.rd_pooled.n << "," << r.rd_pooled.excluded << ","
          << fmt_g12(r.entropy_pooled) << "\n";
        for (const auto& fo : r.flows)
            f << fo.name << "," << fo.unique_received << "," << 0 << ","
              << fmt_g12(fo.entropy) << "\n";
    }
    {
        auto f = detail::open_out(out_dir / "bounce_by_switch.csv");
        f << "node,bounces,forwards,drops\n";
        for (const auto& [name, st] : r.node_stats)
            f << name << "," << st.bounces << "," << st.forwards << "," << st.drops << "\n";
    }
    {
        auto f = detail::open_out(out_dir / "max_bounced_distance.csv");
        f << "distance,count,fraction,denominator\n";
        for (const auto& [d, c] : r.maxdist_hist)
            f << d << "," << c << ","
              << fmt_g12(r.data_delivered ? static_cast<double>(c) / r.data_delivered : 0.0)
              << "," << r.data_delivered << "\n";
    }
    {
        auto f = detail::open_out(out_dir / "totalhop_cdf.csv");
        f << "total_hop,count,cum_count,cum_fraction\n";
        int64_t cum = 0;
        for (const auto& [h, c] : r.totalhop_hist) {
            cum += c;
            f << h << "," << c << "," << cum << ","
              << fmt_g12(r.data_delivered ? static_cast<double>(cum) / r.data_delivered : 0.0)
              << "\n";
        }
    }
    {
        auto f = detail::open_out(out_dir / "flows.csv");
        f << "flow,name,src,dst,request,start_ns,end_ns,fct_ns,complete,"
             "segments_sent,unique_received,duplicates,retransmissions,mean_delay_ns\n";
        for (const auto& fo : r.flows) {
            double mean_delay =
                fo.unique_received ? fo.delay_sum_ns / fo.unique_received : 0.0;
            for (size_t k = 0; k < fo.requests.size(); ++k) {
                const auto& rq = fo.requests[k];
                f << fo.id << "," << fo.name << "," << fo.src << "," << fo.dst << "," << k
                  << "," << rq.sent_at << "," << rq.completed_at << ","
                  << (rq.complete ? rq.completed_at - rq.sent_at : -1) << ","
                  << (rq.complete ? 1 : 0) << "," << fo.segments_sent << ","
                  << fo.unique_received << "," << fo.duplicates << ","
                  << fo.retransmissions << "," << fmt_g12(mean_delay) << "\n";
            }
        }
    }
    {
        auto f = detail::open_out(out_dir / "util_summary.csv");
        f << "node,port,queue,capacity,mean_util,peak,above_theta_frac\n";
        for (const auto& q : r.queues)
            f << q.node << "," << q.port << "," << q.queue << "," << q.capacity << ","
              << fmt_g12(q.mean_util) << "," << q.peak << ","
              << fmt_g12(q.queue == "normal" ? q.above_theta_frac : 0.0) << "\n";
    }
    {
        auto f = detail::open_out(out_dir / "util_timeseries.csv");
        f << "node,port,queue,time_ns,occupancy\n";
        for (const auto& q : r.queues) {
            size_t stride = std::max<size_t>(1, q.series.size() / 10000);
            for (size_t i = 0; i < q.series.size(); i += stride)
                f << q.node << "," << q.port << "," << q.queue << "," << q.series[i].first
                  << "," << q.series[i].second << "\n";
        }
    }
    if (!r.trace.empty()) {
        auto f = detail::open_out(out_dir / "trace.csv");
        f << "time_ns,frame,flow,seq,node,event,n_p,dist,max_dist,total_hop\n";
        for (const auto& t : r.trace)
            f << t.t << "," << t.frame << "," << t.flow << "," << t.seq << ","
              << r.node_names[t.node] << "," << t.event << "," << t.bounced_hop << ","
              << t.bounced_distance << "," << t.max_bounced_distance << "," << t.total_hop
              << "\n";
    }

    nlohmann::json m;
    m["name"] = r.cfg.name;
    m["config_hash"] = detail::hash_hex(r.cfg_hash);
    m["seed"] = r.cfg.seed;
    m["mode"] = r.cfg.mode;
    m["topology"] = r.cfg.topology;
    m["theta"] = r.cfg.theta;
    m["lambda"] = r.cfg.lambda;
    m["duration_ns"] = r.cfg.duration;
    m["engine"] = {{"scheduled", r.engine.scheduled},
                   {"dispatched", r.engine.dispatched},
                   {"cancelled", r.engine.cancelled},
                   {"remaining", r.engine.remaining},
                   {"end_clock_ns", r.engine.end_clock}};
    m["conservation"] = {{"created", r.created},
                         {"delivered", r.delivered},
                         {"dropped", r.dropped},
                         {"residual_queued", r.residual_queued},
                         {"residual_wire", r.residual_wire}};
    m["metrics"] = {{"entropy", r.entropy_pooled},
                    {"util_variance", r.util_variance},
                    {"time_ratio", r.time_ratio},
                    {"drop_rate", r.drop_rate()},
                    {"bounce_fraction", r.bounce_fraction()},
                    {"bounce_events", r.bounce_events},
                    {"mean_total_hop", r.mean_total_hop()},
                    {"mean_delay_ns", r.mean_delay_ns()},
                    {"mean_fct_ns", r.mean_fct_ns()},
                    {"incomplete_requests", r.incomplete_requests()},
                    {"data_created", r.data_created},
                    {"data_delivered", r.data_delivered},
                    {"data_dropped", r.data_dropped},
                    {"data_duplicates", r.data_duplicates},
                    {"bounced_frames", r.bounced_frames},
                    {"scheduler_violations", r.scheduler_violations},
                    {"delay_bound_violations", r.delay_bound_violations},
                    {"hop_algebra_violations", r.hop_algebra_violations}};
    {
        nlohmann::json by_switch = nlohmann::json::object();
        for (const auto& [name, st] : r.node_stats)
            by_switch[name] = {{"bounces", st.bounces},
                               {"forwards", st.forwards},
                               {"drops", st.drops}};
        m["nodes"] = by_switch;
    }
    auto f = detail::open_out(out_dir / "manifest.json");
    f << m.dump(2) << "\n";
}

// Run + write in one step; returns the result for further inspection.
inline RunResult run_and_write(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                               bool collect_trace = false) {
    Simulation sim(cfg, /*collect_series=*/true, collect_trace);
    RunResult r = sim.run();
    write_outputs(r, out_dir);
    return r;
}

// Node/edge CSV export of a topology, for visualization.
inline void write_topology_csv(const Network& net, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        auto f = detail::open_out(out_dir / "nodes.csv");
        f << "node,kind,mac\n";
        for (int n = 0; n < net.node_count(); ++n)
            f << net.info(n).name << "," << (net.info(n).is_host ? "host" : "switch") << ","
              << to_string(net.info(n).mac) << "\n";
    }
    auto f = detail::open_out(out_dir / "edges.csv");
    f << "a,a_port,b,b_port,rate_bps\n";
    for (int n = 0; n < net.node_count(); ++n)
        for (int p = 0; p < net.port_count(n); ++p) {
            auto peer = net.peer(n, p);
            if (peer.node > n || (peer.node == n && peer.port > p))
                f << net.info(n).name << "," << p << "," << net.info(peer.node).name << ","
                  << peer.port << "," << net.link(n, p).rate_bps << "\n";
        }
}

}  // namespace pabo
