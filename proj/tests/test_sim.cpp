#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pabo/pabo.hpp"

using namespace pabo;
namespace fs = std::filesystem;

namespace {

ScenarioConfig tiny_burst(int packets, int switch_cap, double theta, const char* mode) {
    ScenarioConfig c;
    c.name = "tiny";
    c.topology = "tree";
    c.mode = mode;
    c.theta = theta;
    c.lambda = 50;
    c.queues = {switch_cap, switch_cap, 3000, 3000, switch_cap, 3000};
    c.duration = from_seconds(0.2);
    c.seed = 7;
    TrafficBlock t;
    t.kind = TrafficBlock::Kind::burst;
    t.burst.senders = {"H1", "H2", "H3"};
    t.burst.receiver = "H4";
    t.burst.packets_per_generate = packets;
    c.traffic.push_back(t);
    return c;
}

int64_t conserved_residual(const RunResult& r) {
    return r.created - r.delivered - r.dropped;
}

}  // namespace

TEST_CASE("single uncongested flow: all frames arrive in order") {
    ScenarioConfig c = tiny_burst(50, 500, 0.8, "pabo");
    c.traffic.front().burst.senders = {"H1"};
    RunResult r = run_scenario(c);
    CHECK(r.data_created == 50);
    CHECK(r.data_delivered == 50);
    CHECK(r.dropped == 0);
    CHECK(r.bounce_events == 0);
    CHECK(r.entropy_pooled == 0.0);
    // four links end to end, no bounces
    CHECK(r.totalhop_hist.size() == 1);
    CHECK(r.totalhop_hist.count(4) == 1);
    // serialization bound holds
    CHECK(r.delay_bound_violations == 0);
    CHECK(conserved_residual(r) == r.residual_queued + r.residual_wire);
    CHECK(r.residual_queued + r.residual_wire == 0);
}

TEST_CASE("overload in pabo mode bounces instead of dropping") {
    // 3 senders x 400 frames against a 40-slot queue: heavy transient congestion
    ScenarioConfig c = tiny_burst(400, 40, 0.5, "pabo");
    RunResult r = run_scenario(c);
    CHECK(r.dropped == 0);
    CHECK(r.bounce_events > 0);
    CHECK(r.data_delivered == r.data_created);
    CHECK(r.scheduler_violations == 0);
    CHECK(r.delay_bound_violations == 0);
    // bounced frames took detours: some total_hop beyond the 4-link path
    CHECK(r.totalhop_hist.rbegin()->first > 4);
    // counter algebra: total_hop = 4 + 2 * bounces for every delivered frame
    int64_t extra_hops = 0;
    for (auto& [h, n] : r.totalhop_hist) extra_hops += (h - 4) * n;
    CHECK(extra_hops == 2 * r.bounce_events);
}

TEST_CASE("overload in baseline mode drops at the hot switch") {
    ScenarioConfig c = tiny_burst(400, 40, 0.5, "baseline");
    RunResult r = run_scenario(c);
    CHECK(r.dropped > 0);
    CHECK(r.bounce_events == 0);
    CHECK(r.node_stats.at("S7").drops == r.dropped);  // only the aggregation point drops
    CHECK(conserved_residual(r) == r.residual_queued + r.residual_wire);
}

TEST_CASE("sustained pressure pushes frames back to the sources and re-injects them") {
    // three synchronized senders against 8-slot queues with a hair-trigger
    // threshold: bouncing becomes contagious all the way back to the hosts
    ScenarioConfig c = tiny_burst(400, 8, 0.1, "pabo");
    RunResult r = run_scenario(c);
    CHECK(r.dropped == 0);
    CHECK(r.data_delivered == r.data_created);
    // at least one source saw returned frames and forwarded them again
    int64_t host_forwards = 0;
    for (auto name : {"H1", "H2", "H3"})
        if (r.node_stats.count(name)) host_forwards += r.node_stats.at(name).forwards;
    CHECK(host_forwards > 0);
    CHECK(r.maxdist_hist.rbegin()->first == 3);  // pushed back to the sender
    CHECK(r.delay_bound_violations == 0);
    CHECK(r.hop_algebra_violations == 0);
}

TEST_CASE("pabo with theta=1 behaves exactly like the drop-tail baseline") {
    ScenarioConfig pabo_cfg = tiny_burst(200, 30, 1.0, "pabo");
    ScenarioConfig base_cfg = tiny_burst(200, 30, 1.0, "baseline");
    // same capacities on both sides (baseline fields already equal here)
    Simulation a(pabo_cfg, false, true), b(base_cfg, false, true);
    RunResult ra = a.run(), rb = b.run();
    CHECK(ra.dropped == rb.dropped);
    CHECK(ra.delivered == rb.delivered);
    CHECK(ra.bounce_events == 0);
    REQUIRE(ra.trace.size() == rb.trace.size());
    for (size_t i = 0; i < ra.trace.size(); ++i) {
        CHECK(ra.trace[i].t == rb.trace[i].t);
        CHECK(ra.trace[i].frame == rb.trace[i].frame);
        CHECK(ra.trace[i].node == rb.trace[i].node);
        CHECK(std::string(ra.trace[i].event) == rb.trace[i].event);
        CHECK(ra.trace[i].total_hop == rb.trace[i].total_hop);
    }
}

TEST_CASE("burst cadence: five generatings in one second") {
    ScenarioConfig c = tiny_burst(500, 1000, 0.8, "pabo");
    c.duration = kNsPerSec;
    RunResult r = run_scenario(c);
    // 3 senders x 500 frames x 5 appearances
    CHECK(r.data_created == 3 * 500 * 5);
}

TEST_CASE("without losses, pabo and reno transports behave identically") {
    // same seed, same windows, queues too deep to congest: the only
    // difference between modes would be loss handling, which never triggers
    ScenarioConfig c;
    c.name = "calm";
    c.topology = "tree";
    c.mode = "pabo";
    c.theta = 0.99;
    c.lambda = 50;
    c.queues = {1000, 1000, 1000, 1000, 1000, 1000};
    c.duration = from_seconds(2.0);
    c.seed = 11;
    TrafficBlock t;
    t.kind = TrafficBlock::Kind::request_reply;
    t.rr.servers = {"H1", "H2", "H3"};
    t.rr.client = "H4";
    t.rr.requests_per_session = 1;
    c.traffic.push_back(t);
    RunResult rp = run_scenario(c);
    c.mode = "baseline";
    RunResult rb = run_scenario(c);

    CHECK(rp.dropped == 0);
    CHECK(rb.dropped == 0);
    CHECK(rp.bounce_events == 0);  // theta 0.99 never reached
    REQUIRE(rp.flows.size() == rb.flows.size());
    for (size_t i = 0; i < rp.flows.size(); ++i) {
        CHECK(rp.flows[i].segments_sent == rb.flows[i].segments_sent);
        CHECK(rp.flows[i].retransmissions == 0);
        CHECK(rb.flows[i].retransmissions == 0);
        CHECK(rp.flows[i].displacements == rb.flows[i].displacements);
        CHECK(rp.flows[i].requests.front().completed_at ==
              rb.flows[i].requests.front().completed_at);
    }
}

TEST_CASE("request-reply session completes with correct byte accounting") {
    ScenarioConfig c;
    c.name = "rr";
    c.topology = "tree";
    c.mode = "pabo";
    c.theta = 0.5;
    c.lambda = 50;
    c.queues = {100, 100, 100, 100, 200, 200};
    c.duration = from_seconds(2.5);
    c.seed = 3;
    TrafficBlock t;
    t.kind = TrafficBlock::Kind::request_reply;
    t.rr.servers = {"H1", "H2", "H3"};
    t.rr.client = "H4";
    t.rr.requests_per_session = 2;
    c.traffic.push_back(t);
    RunResult r = run_scenario(c);

    CHECK(r.dropped == 0);
    CHECK(r.incomplete_requests() == 0);
    for (auto& fo : r.flows) {
        CHECK(fo.is_rr);
        CHECK(fo.unique_received == 2 * 700);  // two 1 MiB replies
        CHECK(fo.duplicates == 0);             // pabo never retransmits
        CHECK(fo.retransmissions == 0);
        for (auto& rq : fo.requests) {
            CHECK(rq.complete);
            CHECK(rq.completed_at > rq.sent_at);
        }
    }
    // requests are one second apart
    auto& rq = r.flows.front().requests;
    CHECK(rq[1].sent_at - rq[0].sent_at == kNsPerSec);

    // the shared last hop congests, so bouncing reorders deliveries
    CHECK(r.bounce_events > 0);
    CHECK(r.entropy_pooled > 0.0);
    // pooled reorder density concatenates the per-flow displacement lists
    int64_t total_disp = 0;
    for (auto& fo : r.flows) total_disp += static_cast<int64_t>(fo.displacements.size());
    CHECK(r.rd_pooled.n + r.rd_pooled.excluded == total_disp);
}

TEST_CASE("reno baseline recovers from incast losses and completes") {
    ScenarioConfig c;
    c.name = "rr-base";
    c.topology = "tree";
    c.mode = "baseline";
    c.theta = 0.5;
    c.lambda = 50;
    c.queues = {100, 100, 100, 100, 100, 100};  // deliberately tight
    c.duration = from_seconds(3.0);
    c.seed = 3;
    TrafficBlock t;
    t.kind = TrafficBlock::Kind::request_reply;
    t.rr.servers = {"H1", "H2", "H3"};
    t.rr.client = "H4";
    t.rr.requests_per_session = 2;
    t.rr.advertised_window = 150000;  // enough in-flight to overflow the queue
    c.traffic.push_back(t);
    RunResult r = run_scenario(c);

    CHECK(r.data_dropped > 0);
    int64_t retx = 0;
    for (auto& fo : r.flows) retx += fo.retransmissions;
    CHECK(retx > 0);
    CHECK(r.incomplete_requests() == 0);  // Reno fills the holes
    for (auto& fo : r.flows) CHECK(fo.unique_received == 2 * 700);
}

TEST_CASE("burst severities reproduce the expected bounce-distance support") {
    // mild: only the last-hop switch bounces, nothing pushed back further
    RunResult mild = run_scenario(presets().at("tree-mild"), false);
    CHECK(mild.maxdist_hist.rbegin()->first <= 1);
    for (auto& [name, st] : mild.node_stats)
        if (name != "S7") CHECK(st.bounces == 0);
    // severe: contagion reaches two hops back, never three
    RunResult sev = run_scenario(presets().at("tree-severe"), false);
    CHECK(sev.maxdist_hist.rbegin()->first == 2);
    CHECK(sev.dropped == 0);
    // ever-bounced and never-bounced fractions partition the deliveries
    int64_t sum = 0;
    for (auto& [d, c] : sev.maxdist_hist) sum += c;
    CHECK(sum == sev.data_delivered);
    CHECK(sev.maxdist_hist.at(0) == sev.data_delivered - sev.bounced_frames);
}

TEST_CASE("identical config and seed reproduce identical output files") {
    ScenarioConfig c = tiny_burst(200, 40, 0.5, "pabo");
    fs::path base = fs::temp_directory_path() / "pabo_det_test";
    fs::remove_all(base);
    RunResult r1 = run_and_write(c, base / "a");
    RunResult r2 = run_and_write(c, base / "b");
    CHECK(r1.engine.dispatched == r2.engine.dispatched);
    for (auto& entry : fs::directory_iterator(base / "a")) {
        auto name = entry.path().filename();
        std::ifstream fa(entry.path(), std::ios::binary);
        std::ifstream fb(base / "b" / name, std::ios::binary);
        REQUIRE(fb.good());
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        CHECK_MESSAGE(sa.str() == sb.str(), "file differs: ", name.string());
    }
    fs::remove_all(base);
}

TEST_CASE("different seeds perturb a congested run") {
    ScenarioConfig c1 = tiny_burst(400, 40, 0.5, "pabo");
    ScenarioConfig c2 = c1;
    c2.seed = 8;
    RunResult r1 = run_scenario(c1), r2 = run_scenario(c2);
    CHECK(r1.bounce_events != r2.bounce_events);
}

TEST_CASE("random scenarios keep every structural invariant") {
    RngStream rng(20240808);
    for (int trial = 0; trial < 12; ++trial) {
        ScenarioConfig c;
        c.name = "fuzz" + std::to_string(trial);
        c.topology = trial % 3 == 2 ? "fattree" : "tree";
        c.mode = trial % 4 == 3 ? "baseline" : "pabo";
        c.theta = 0.05 + 0.9 * rng.next_double();
        c.lambda = rng.next_below(2) ? static_cast<double>(rng.next_below(200)) : 0.0;
        int cap = 16 + static_cast<int>(rng.next_below(200));
        c.queues = {cap, cap, 4000, 4000, 2 * cap, 8000};
        c.duration = from_seconds(0.15);
        c.seed = 1000 + trial;
        TrafficBlock t;
        t.kind = TrafficBlock::Kind::burst;
        if (c.topology == "tree") {
            t.burst.senders = {"H1", "H2", "H3"};
            t.burst.receiver = "H4";
        } else {
            t.burst.senders = {"H1", "H5", "H13"};
            t.burst.receiver = "H9";
        }
        t.burst.packets_per_generate = 50 + static_cast<int>(rng.next_below(400));
        c.traffic.push_back(t);

        CAPTURE(trial);
        RunResult r = run_scenario(c, false);
        CHECK(r.created == r.delivered + r.dropped + r.residual_queued + r.residual_wire);
        CHECK(r.scheduler_violations == 0);
        CHECK(r.delay_bound_violations == 0);
        CHECK(r.hop_algebra_violations == 0);
        if (c.mode == "pabo") CHECK(r.dropped == 0);
        if (c.mode == "baseline") CHECK(r.bounce_events == 0);
        CHECK(r.engine.dispatched ==
              r.engine.scheduled - r.engine.cancelled - r.engine.remaining);
    }
}

TEST_CASE("total events dispatched equals scheduled minus cancelled minus remaining") {
    ScenarioConfig c = tiny_burst(100, 100, 0.8, "pabo");
    RunResult r = run_scenario(c);
    CHECK(r.engine.dispatched ==
          r.engine.scheduled - r.engine.cancelled - r.engine.remaining);
}
