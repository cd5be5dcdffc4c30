#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pabo/engine.hpp"
#include "pabo/routing.hpp"

namespace pabo {

struct PortPeer {
    int node = -1;
    int port = -1;
    bool connected() const { return node >= 0; }
};

struct LinkParams {
    int64_t rate_bps = 1'000'000'000;
    TimeNs prop_delay_ns = 0;
};

struct NodeInfo {
    std::string name;
    bool is_host = false;
    MacAddr mac;
};

// Immutable wiring plus per-switch route tables. Built once per scenario,
// shared read-only by the simulation instance.
class Network {
  public:
    int add_node(const std::string& name, bool is_host, MacAddr mac, int nports) {
        int id = static_cast<int>(nodes_.size());
        nodes_.push_back({name, is_host, mac});
        peers_.emplace_back(nports);
        links_.emplace_back(nports);
        tables_.emplace_back();
        index_[name] = id;
        return id;
    }

    void connect(int a, int pa, int b, int pb, LinkParams lp = {}) {
        if (peers_[a][pa].connected() || peers_[b][pb].connected())
            throw SimError("port already wired: " + nodes_[a].name + ":" + std::to_string(pa) +
                           " <-> " + nodes_[b].name + ":" + std::to_string(pb));
        peers_[a][pa] = {b, pb};
        peers_[b][pb] = {a, pa};
        links_[a][pa] = lp;
        links_[b][pb] = lp;
    }

    int node_id(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw SimError("unknown node: " + name);
        return it->second;
    }
    bool has_node(const std::string& name) const { return index_.count(name) > 0; }

    const NodeInfo& info(int id) const { return nodes_[id]; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int port_count(int id) const { return static_cast<int>(peers_[id].size()); }
    const PortPeer& peer(int id, int port) const { return peers_[id][port]; }
    const LinkParams& link(int id, int port) const { return links_[id][port]; }

    TwoLevelTable& table(int id) { return tables_[id]; }
    const TwoLevelTable& table(int id) const { return tables_[id]; }

    int route(int sw, const MacAddr& dst) const {
        auto port = tables_[sw].lookup(dst);
        if (!port)
            throw SimError("no route at " + nodes_[sw].name + " for " + to_string(dst));
        return *port;
    }

    int host_id(const std::string& name) const {
        int id = node_id(name);
        if (!nodes_[id].is_host) throw SimError(name + " is not a host");
        return id;
    }

    std::vector<int> hosts() const {
        std::vector<int> out;
        for (int i = 0; i < node_count(); ++i)
            if (nodes_[i].is_host) out.push_back(i);
        return out;
    }

  private:
    std::vector<NodeInfo> nodes_;
    std::vector<std::vector<PortPeer>> peers_;
    std::vector<std::vector<LinkParams>> links_;
    std::vector<TwoLevelTable> tables_;
    std::map<std::string, int, std::less<>> index_;
};

// The seven-switch tree: three servers H1..H3, one client H4, paths
// H1-S1-S4-S7-H4, H2-S2-S5-S7-H4, H3-S3-S6-S7-H4. Every server is three
// switch hops from the client and all server-to-client paths converge at
// the last-hop switch S7.
//
//   H1 - S1 - S4 -.
//   H2 - S2 - S5 --- S7 - H4
//   H3 - S3 - S6 -'
inline Network build_tree(int64_t rate_bps = 1'000'000'000) {
    Network net;
    LinkParams lp{rate_bps, 0};

    std::vector<int> hosts, switches;
    for (int i = 1; i <= 4; ++i)
        hosts.push_back(net.add_node("H" + std::to_string(i), true, mac_for_ip(0, 0, i), 1));
    // S1..S3: port 0 host, port 1 up. S4..S6: port 0 down, port 1 up to S7.
    // S7: ports 0..2 from S4..S6, port 3 to the client.
    for (int i = 1; i <= 6; ++i)
        switches.push_back(net.add_node("S" + std::to_string(i), false,
                                        MacAddr{{0x0A, 0xAB, 0, 0, 0, static_cast<uint8_t>(i)}},
                                        2));
    switches.push_back(net.add_node("S7", false, MacAddr{{0x0A, 0xAB, 0, 0, 0, 7}}, 4));

    auto S = [&](int i) { return switches[i - 1]; };
    auto H = [&](int i) { return hosts[i - 1]; };

    for (int i = 1; i <= 3; ++i) {
        net.connect(H(i), 0, S(i), 0, lp);
        net.connect(S(i), 1, S(i + 3), 0, lp);
        net.connect(S(i + 3), 1, S(7), i - 1, lp);
    }
    net.connect(S(7), 3, H(4), 0, lp);

    // Exact host routes everywhere (4-octet prefixes).
    auto host_route = [&](int sw, int host, int port) {
        net.table(sw).add_prefix(net.info(host).mac, 4, port);
    };
    for (int i = 1; i <= 3; ++i) {
        host_route(S(i), H(i), 0);
        for (int j = 1; j <= 4; ++j)
            if (j != i) host_route(S(i), H(j), 1);
        host_route(S(i + 3), H(i), 0);
        for (int j = 1; j <= 4; ++j)
            if (j != i) host_route(S(i + 3), H(j), 1);
    }
    for (int i = 1; i <= 3; ++i) host_route(S(7), H(i), i - 1);
    host_route(S(7), H(4), 3);
    return net;
}

// k=4 Fattree: 4 pods of {edge-left, edge-right, agg-left, agg-right},
// 4 cores, 16 hosts. Pod p owns S(4p+1)..S(4p+4) in that order; hosts
// H(4p+1),H(4p+2) attach to the left edge and H(4p+3),H(4p+4) to the right
// edge. Host H(4p+1) gets address 10.p.0.2, H(4p+2) 10.p.0.3, H(4p+3)
// 10.p.1.2, H(4p+4) 10.p.1.3.
//
// Port numbering: edges and aggs use 0,1 downward and 2,3 upward; cores use
// port p toward pod p. C1/C2 attach to the left aggs (ports 2/3), C3/C4 to
// the right aggs (ports 2/3).
//
// Suffix dispersal: a left-side switch sends last-octet 02 out port 2 and
// 03 out port 3; a right-side switch works the opposite way. Prefix entries
// carry intra-pod traffic downward and win over suffixes.
inline Network build_fattree(int64_t rate_bps = 1'000'000'000) {
    Network net;
    LinkParams lp{rate_bps, 0};

    std::vector<int> hosts(16), sw(16), core(4);
    for (int h = 0; h < 16; ++h) {
        int pod = h / 4, slot = h % 4;
        MacAddr mac = mac_for_ip(pod, slot / 2, 2 + slot % 2);
        hosts[h] = net.add_node("H" + std::to_string(h + 1), true, mac, 1);
    }
    for (int s = 0; s < 16; ++s)
        sw[s] = net.add_node("S" + std::to_string(s + 1), false,
                             MacAddr{{0x0A, 0xAB, 1, 0, 0, static_cast<uint8_t>(s + 1)}}, 4);
    for (int c = 0; c < 4; ++c)
        core[c] = net.add_node("C" + std::to_string(c + 1), false,
                               MacAddr{{0x0A, 0xAB, 2, 0, 0, static_cast<uint8_t>(c + 1)}}, 4);

    for (int p = 0; p < 4; ++p) {
        int el = sw[4 * p], er = sw[4 * p + 1], al = sw[4 * p + 2], ar = sw[4 * p + 3];
        net.connect(hosts[4 * p], 0, el, 0, lp);
        net.connect(hosts[4 * p + 1], 0, el, 1, lp);
        net.connect(hosts[4 * p + 2], 0, er, 0, lp);
        net.connect(hosts[4 * p + 3], 0, er, 1, lp);
        net.connect(el, 2, al, 0, lp);
        net.connect(el, 3, ar, 0, lp);
        net.connect(er, 2, al, 1, lp);
        net.connect(er, 3, ar, 1, lp);
        net.connect(al, 2, core[0], p, lp);
        net.connect(al, 3, core[1], p, lp);
        net.connect(ar, 2, core[2], p, lp);
        net.connect(ar, 3, core[3], p, lp);
    }

    MacAddr oct2{{0, 0, 0, 0, 0, 0x02}}, oct3{{0, 0, 0, 0, 0, 0x03}};
    for (int p = 0; p < 4; ++p) {
        for (int side = 0; side < 2; ++side) {  // 0 = left column, 1 = right column
            int edge = sw[4 * p + side];
            net.table(edge).add_prefix(mac_for_ip(p, side, 2), 4, 0);
            net.table(edge).add_prefix(mac_for_ip(p, side, 3), 4, 1);
            net.table(edge).add_suffix(oct2, 1, side == 0 ? 2 : 3);
            net.table(edge).add_suffix(oct3, 1, side == 0 ? 3 : 2);

            int agg = sw[4 * p + 2 + side];
            net.table(agg).add_prefix(mac_for_ip(p, 0, 0), 3, 0);
            net.table(agg).add_prefix(mac_for_ip(p, 1, 0), 3, 1);
            net.table(agg).add_suffix(oct2, 1, side == 0 ? 2 : 3);
            net.table(agg).add_suffix(oct3, 1, side == 0 ? 3 : 2);
        }
    }
    for (int c = 0; c < 4; ++c)
        for (int p = 0; p < 4; ++p)
            net.table(core[c]).add_prefix(mac_for_ip(p, 0, 0), 2, p);

    return net;
}

inline Network build_topology(const std::string& kind, int64_t rate_bps = 1'000'000'000) {
    if (kind == "tree") return build_tree(rate_bps);
    if (kind == "fattree") return build_fattree(rate_bps);
    throw SimError("unknown topology: " + kind);
}

// Hop count of the table-driven path between two hosts; throws on loops.
// Used for sanity checks and the total_hop accounting invariants.
inline int path_hops(const Network& net, int src_host, int dst_host) {
    const MacAddr dst = net.info(dst_host).mac;
    int node = net.peer(src_host, 0).node;
    int hops = 1;
    const int limit = 4 * net.node_count();
    while (node != dst_host) {
        if (++hops > limit) throw SimError("routing loop between " + net.info(src_host).name +
                                           " and " + net.info(dst_host).name);
        node = net.peer(node, net.route(node, dst)).node;
    }
    return hops;
}

}  // namespace pabo
