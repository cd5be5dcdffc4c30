#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pabo/rng.hpp"
#include "pabo/time.hpp"
#include "pabo/topology.hpp"
#include "pabo/traffic.hpp"
#include "pabo/transport.hpp"

namespace pabo {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct BurstBlock {
    std::vector<std::string> senders;
    std::string receiver;
    int packets_per_generate = 500;
    TimeNs send_interval = 10 * kNsPerUs;
    TimeNs pause_interval = 200 * kNsPerMs;
    int payload = 1500;
};

struct RequestReplyBlock {
    std::vector<std::string> servers;
    std::string client;
    int request_len = 200;
    int64_t reply_len = 1 << 20;
    int requests_per_session = 4;
    TimeNs inter_request_gap = kNsPerSec;
    int64_t advertised_window = 45535;
    int mss = 1500;
    int header_len = 0;
};

struct TrafficBlock {
    enum class Kind { burst, request_reply } kind = Kind::burst;
    BurstBlock burst;
    RequestReplyBlock rr;
};

// Queue capacities in frames. Baseline (no-PABO) runs use the baseline_*
// values for the single drop-tail queue; bounce queues do not exist there.
struct QueueCfg {
    int switch_normal = 500;
    int switch_bounce = 500;
    int host_normal = 1500;
    int host_bounce = 1500;
    int baseline_switch_normal = 1000;
    int baseline_host_normal = 3000;
};

struct ScenarioConfig {
    std::string name = "custom";
    std::string topology = "tree";  // tree | fattree
    std::string mode = "pabo";      // pabo | baseline
    double theta = 0.8;
    double lambda = 50.0;
    QueueCfg queues;
    std::vector<TrafficBlock> traffic;
    TimeNs duration = kNsPerSec;
    uint64_t seed = 1;
    int64_t d_threshold = 0;  // 0: no loss classification (threshold = stream length)
    int64_t link_rate_bps = 1'000'000'000;

    bool is_baseline() const { return mode == "baseline"; }
    int switch_normal_cap() const {
        return is_baseline() ? queues.baseline_switch_normal : queues.switch_normal;
    }
    int switch_bounce_cap() const { return is_baseline() ? 0 : queues.switch_bounce; }
    int host_normal_cap() const {
        return is_baseline() ? queues.baseline_host_normal : queues.host_normal;
    }
    int host_bounce_cap() const { return is_baseline() ? 0 : queues.host_bounce; }
};

namespace detail {

inline std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += v[i];
    }
    return out;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace detail

// Canonical render: fixed key order, times in integer nanoseconds. The
// config hash is the FNV-1a of this text, so two configs agree iff their
// renders agree.
inline std::string render(const ScenarioConfig& c) {
    std::ostringstream o;
    o << "name = " << c.name << "\n";
    o << "topology = " << c.topology << "\n";
    o << "mode = " << c.mode << "\n";
    o << "theta = " << detail::fmt_double(c.theta) << "\n";
    o << "lambda = " << detail::fmt_double(c.lambda) << "\n";
    o << "duration_ns = " << c.duration << "\n";
    o << "seed = " << c.seed << "\n";
    o << "d_threshold = " << c.d_threshold << "\n";
    o << "link_rate_bps = " << c.link_rate_bps << "\n";
    o << "\n[queues]\n";
    o << "switch_normal = " << c.queues.switch_normal << "\n";
    o << "switch_bounce = " << c.queues.switch_bounce << "\n";
    o << "host_normal = " << c.queues.host_normal << "\n";
    o << "host_bounce = " << c.queues.host_bounce << "\n";
    o << "baseline_switch_normal = " << c.queues.baseline_switch_normal << "\n";
    o << "baseline_host_normal = " << c.queues.baseline_host_normal << "\n";
    for (const auto& t : c.traffic) {
        o << "\n[traffic]\n";
        if (t.kind == TrafficBlock::Kind::burst) {
            o << "kind = burst\n";
            o << "senders = " << detail::join(t.burst.senders) << "\n";
            o << "receiver = " << t.burst.receiver << "\n";
            o << "packets_per_generate = " << t.burst.packets_per_generate << "\n";
            o << "send_interval_ns = " << t.burst.send_interval << "\n";
            o << "pause_interval_ns = " << t.burst.pause_interval << "\n";
            o << "payload = " << t.burst.payload << "\n";
        } else {
            o << "kind = request_reply\n";
            o << "servers = " << detail::join(t.rr.servers) << "\n";
            o << "client = " << t.rr.client << "\n";
            o << "request_len = " << t.rr.request_len << "\n";
            o << "reply_len = " << t.rr.reply_len << "\n";
            o << "requests_per_session = " << t.rr.requests_per_session << "\n";
            o << "inter_request_gap_ns = " << t.rr.inter_request_gap << "\n";
            o << "advertised_window = " << t.rr.advertised_window << "\n";
            o << "mss = " << t.rr.mss << "\n";
            o << "header_len = " << t.rr.header_len << "\n";
        }
    }
    return o.str();
}

inline uint64_t config_hash(const ScenarioConfig& c) { return fnv1a64(render(c)); }

// Key/value parser with [section] blocks; repeated [traffic] sections
// accumulate. Time-valued keys accept _ns, _us and _s suffixes.
inline ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig c;
    c.traffic.clear();
    std::string section;
    TrafficBlock* tb = nullptr;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    auto fail = [&](const std::string& msg) {
        throw ConfigError("config line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);

        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section == "traffic") {
                c.traffic.emplace_back();
                tb = &c.traffic.back();
            } else if (section != "queues") {
                fail("unknown section [" + section + "]");
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            size_t b2 = s.find_first_not_of(" \t");
            size_t e2 = s.find_last_not_of(" \t");
            s = (b2 == std::string::npos) ? "" : s.substr(b2, e2 - b2 + 1);
        };
        trim(key);
        trim(val);
        if (val.empty()) fail("empty value for " + key);

        auto as_i64 = [&]() -> int64_t {
            try {
                return std::stoll(val);
            } catch (...) {
                fail("field " + key + ": not an integer: " + val);
            }
            return 0;
        };
        auto as_f = [&]() -> double {
            try {
                return std::stod(val);
            } catch (...) {
                fail("field " + key + ": not a number: " + val);
            }
            return 0;
        };
        // time keys: base name plus _ns/_us/_s
        auto time_key = [&](const std::string& base, TimeNs& out) -> bool {
            if (key == base + "_ns") {
                out = as_i64();
                return true;
            }
            if (key == base + "_us") {
                out = from_seconds(as_f() * 1e-6);
                return true;
            }
            if (key == base + "_s") {
                out = from_seconds(as_f());
                return true;
            }
            return false;
        };

        if (section.empty()) {
            if (key == "name") c.name = val;
            else if (key == "topology") c.topology = val;
            else if (key == "mode") c.mode = val;
            else if (key == "theta") c.theta = as_f();
            else if (key == "lambda") c.lambda = as_f();
            else if (time_key("duration", c.duration)) {}
            else if (key == "seed") c.seed = static_cast<uint64_t>(as_i64());
            else if (key == "d_threshold") c.d_threshold = as_i64();
            else if (key == "link_rate_bps") c.link_rate_bps = as_i64();
            else fail("unknown field " + key);
        } else if (section == "queues") {
            if (key == "switch_normal") c.queues.switch_normal = static_cast<int>(as_i64());
            else if (key == "switch_bounce") c.queues.switch_bounce = static_cast<int>(as_i64());
            else if (key == "host_normal") c.queues.host_normal = static_cast<int>(as_i64());
            else if (key == "host_bounce") c.queues.host_bounce = static_cast<int>(as_i64());
            else if (key == "baseline_switch_normal")
                c.queues.baseline_switch_normal = static_cast<int>(as_i64());
            else if (key == "baseline_host_normal")
                c.queues.baseline_host_normal = static_cast<int>(as_i64());
            else fail("unknown queue field " + key);
        } else {  // traffic
            if (!tb) fail("traffic field outside a [traffic] section");
            if (key == "kind") {
                if (val == "burst") tb->kind = TrafficBlock::Kind::burst;
                else if (val == "request_reply") tb->kind = TrafficBlock::Kind::request_reply;
                else fail("field kind: expected burst or request_reply");
            }
            else if (key == "senders") tb->burst.senders = detail::split_list(val);
            else if (key == "receiver") tb->burst.receiver = val;
            else if (key == "packets_per_generate")
                tb->burst.packets_per_generate = static_cast<int>(as_i64());
            else if (time_key("send_interval", tb->burst.send_interval)) {}
            else if (time_key("pause_interval", tb->burst.pause_interval)) {}
            else if (key == "payload") tb->burst.payload = static_cast<int>(as_i64());
            else if (key == "servers") tb->rr.servers = detail::split_list(val);
            else if (key == "client") tb->rr.client = val;
            else if (key == "request_len") tb->rr.request_len = static_cast<int>(as_i64());
            else if (key == "reply_len") tb->rr.reply_len = as_i64();
            else if (key == "requests_per_session")
                tb->rr.requests_per_session = static_cast<int>(as_i64());
            else if (time_key("inter_request_gap", tb->rr.inter_request_gap)) {}
            else if (key == "advertised_window") tb->rr.advertised_window = as_i64();
            else if (key == "mss") tb->rr.mss = static_cast<int>(as_i64());
            else if (key == "header_len") tb->rr.header_len = static_cast<int>(as_i64());
            else fail("unknown traffic field " + key);
        }
    }
    return c;
}

// Full structural validation; diagnostics name the offending field.
inline void validate(const ScenarioConfig& c) {
    auto fail = [&](const std::string& msg) { throw ConfigError(c.name + ": " + msg); };
    if (c.topology != "tree" && c.topology != "fattree")
        fail("field topology: expected tree or fattree, got " + c.topology);
    if (c.mode != "pabo" && c.mode != "baseline")
        fail("field mode: expected pabo or baseline, got " + c.mode);
    if (c.theta < 0.0 || c.theta > 1.0) fail("field theta: outside [0,1]");
    if (c.lambda < 0.0) fail("field lambda: negative");
    if (c.duration <= 0) fail("field duration: must be positive");
    if (c.link_rate_bps <= 0) fail("field link_rate_bps: must be positive");
    if (c.d_threshold < 0) fail("field d_threshold: negative");
    if (c.queues.switch_normal <= 0 || c.queues.host_normal <= 0 ||
        c.queues.baseline_switch_normal <= 0 || c.queues.baseline_host_normal <= 0)
        fail("field queues: capacities must be positive");
    if (!c.is_baseline() && (c.queues.switch_bounce <= 0 || c.queues.host_bounce <= 0))
        fail("field queues: bounce capacities must be positive in pabo mode");
    if (c.traffic.empty()) fail("field traffic: at least one block required");

    Network net = build_topology(c.topology, c.link_rate_bps);
    auto check_host = [&](const std::string& h, const std::string& field) {
        if (!net.has_node(h) || !net.info(net.node_id(h)).is_host)
            fail("field " + field + ": " + h + " is not a host of topology " + c.topology);
    };
    for (const auto& t : c.traffic) {
        if (t.kind == TrafficBlock::Kind::burst) {
            if (t.burst.senders.empty()) fail("field senders: empty");
            for (auto& s : t.burst.senders) check_host(s, "senders");
            check_host(t.burst.receiver, "receiver");
            for (auto& s : t.burst.senders)
                if (s == t.burst.receiver) fail("field receiver: also listed as sender");
            if (t.burst.packets_per_generate <= 0) fail("field packets_per_generate: must be positive");
            if (t.burst.send_interval <= 0) fail("field send_interval: must be positive");
            if (t.burst.payload <= 0) fail("field payload: must be positive");
            if (t.burst.pause_interval <=
                static_cast<TimeNs>(t.burst.packets_per_generate) * t.burst.send_interval)
                fail("field pause_interval: generatings would overlap "
                     "(needs pause > packets_per_generate * send_interval)");
        } else {
            if (t.rr.servers.empty()) fail("field servers: empty");
            for (auto& s : t.rr.servers) check_host(s, "servers");
            check_host(t.rr.client, "client");
            for (auto& s : t.rr.servers)
                if (s == t.rr.client) fail("field client: also listed as server");
            if (t.rr.mss <= 0) fail("field mss: must be positive");
            if (t.rr.header_len < 0) fail("field header_len: negative");
            if (t.rr.advertised_window < t.rr.mss)
                fail("field advertised_window: smaller than one mss");
            if (t.rr.reply_len <= 0) fail("field reply_len: must be positive");
            if (t.rr.request_len <= 0) fail("field request_len: must be positive");
            if (t.rr.requests_per_session <= 0) fail("field requests_per_session: must be positive");
            if (t.rr.inter_request_gap <= 0) fail("field inter_request_gap: must be positive");
        }
    }
}

// Seed for one grid point of a sweep: a stable hash of the base seed and
// the coordinates. Adding points to a grid never changes existing points.
inline uint64_t derive_point_seed(uint64_t base, double theta, double lambda, int servers) {
    std::string key = "seed=" + std::to_string(base) + ";theta=" + detail::fmt_double(theta) +
                      ";lambda=" + detail::fmt_double(lambda) +
                      ";servers=" + std::to_string(servers);
    uint64_t h = fnv1a64(key);
    return h ? h : 1;
}

// The paper's experiments as ready-to-run scenarios.
inline std::map<std::string, ScenarioConfig> presets() {
    std::map<std::string, ScenarioConfig> out;

    auto tree_burst = [&](const std::string& name, int packets) {
        ScenarioConfig c;
        c.name = name;
        c.topology = "tree";
        c.mode = "pabo";
        c.theta = 0.8;
        c.lambda = 50.0;
        c.queues = {500, 500, 1500, 1500, 1000, 3000};
        c.duration = kNsPerSec;
        c.seed = 1;
        TrafficBlock t;
        t.kind = TrafficBlock::Kind::burst;
        t.burst.senders = {"H1", "H2", "H3"};
        t.burst.receiver = "H4";
        t.burst.packets_per_generate = packets;
        c.traffic.push_back(t);
        out[name] = c;
    };
    tree_burst("tree-mild", 500);
    tree_burst("tree-moderate", 1500);
    tree_burst("tree-severe", 2500);

    {  // request-reply instrumentation scenario on the tree
        ScenarioConfig c;
        c.name = "oo-sweep";
        c.topology = "tree";
        c.mode = "pabo";
        c.theta = 0.5;
        c.lambda = 50.0;
        c.queues = {100, 100, 100, 100, 200, 200};
        c.duration = from_seconds(4.5);
        c.seed = 1;
        TrafficBlock t;
        t.kind = TrafficBlock::Kind::request_reply;
        t.rr.servers = {"H1", "H2", "H3"};
        t.rr.client = "H4";
        t.rr.advertised_window = 45535;
        t.rr.mss = 1460;  // standard Ethernet TCP segment in a 1500-byte frame
        t.rr.header_len = 40;
        c.traffic.push_back(t);
        out[c.name] = c;
    }

    auto fattree_rr = [&](const std::string& name, std::vector<std::string> servers,
                          const std::string& client) {
        ScenarioConfig c;
        c.name = name;
        c.topology = "fattree";
        c.mode = "pabo";
        c.theta = 0.95;
        c.lambda = 50.0;
        // same buffer setup as the tree request-reply scenario; baseline
        // keeps the same capacity so congestion points stay reproducible
        c.queues = {100, 100, 100, 100, 100, 100};
        c.duration = from_seconds(6.0);
        c.seed = 1;
        TrafficBlock t;
        t.kind = TrafficBlock::Kind::request_reply;
        t.rr.servers = std::move(servers);
        t.rr.client = client;
        t.rr.advertised_window = 50000;
        t.rr.mss = 1460;
        t.rr.header_len = 40;
        c.traffic.push_back(t);
        out[name] = c;
        return &out[name];
    };
    // server sets grow incrementally; the first N of the 12-server list
    // reproduce the smaller scenarios
    fattree_rr("ft-3to1", {"H1", "H5", "H13"}, "H9");
    fattree_rr("ft-6to1", {"H1", "H5", "H13", "H3", "H7", "H15"}, "H9");
    fattree_rr("ft-9to1", {"H1", "H5", "H13", "H3", "H7", "H15", "H2", "H8", "H14"}, "H9");
    fattree_rr("ft-12to1",
               {"H1", "H5", "H13", "H3", "H7", "H15", "H2", "H8", "H14", "H4", "H6", "H11"},
               "H9");

    {  // two synchronized 3-to-1 groups
        auto* c = fattree_rr("ft-m2m", {"H1", "H5", "H13"}, "H9");
        TrafficBlock t = c->traffic.front();
        t.rr.servers = {"H4", "H8", "H16"};
        t.rr.client = "H10";
        c->traffic.push_back(t);
    }

    return out;
}

}  // namespace pabo
