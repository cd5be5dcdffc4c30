#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pabo/routing.hpp"
#include "pabo/topology.hpp"

using namespace pabo;

TEST_CASE("prefix matching excludes the shared first two octets") {
    TwoLevelTable t;
    t.add_prefix(mac_for_ip(0, 0, 0), 3, 7);  // 10.0.0.x
    CHECK(t.lookup(mac_for_ip(0, 0, 2)) == 7);
    CHECK(t.lookup(mac_for_ip(0, 0, 3)) == 7);
    CHECK_FALSE(t.lookup(mac_for_ip(0, 1, 2)).has_value());
    CHECK_FALSE(t.lookup(mac_for_ip(1, 0, 2)).has_value());
}

TEST_CASE("suffix matching goes right to left") {
    TwoLevelTable t;
    t.add_suffix(MacAddr{{0, 0, 0, 0, 0, 0x03}}, 1, 3);
    CHECK(t.lookup(mac_for_ip(2, 0, 3)) == 3);
    CHECK(t.lookup(mac_for_ip(0, 1, 3)) == 3);
    CHECK_FALSE(t.lookup(mac_for_ip(0, 0, 2)).has_value());
}

TEST_CASE("prefixes win over suffixes") {
    TwoLevelTable t;
    t.add_prefix(mac_for_ip(0, 0, 3), 4, 1);
    t.add_suffix(MacAddr{{0, 0, 0, 0, 0, 0x03}}, 1, 3);
    CHECK(t.lookup(mac_for_ip(0, 0, 3)) == 1);   // own host, downward
    CHECK(t.lookup(mac_for_ip(1, 0, 3)) == 3);   // inter-pod, dispersed up
}

TEST_CASE("first matching prefix wins") {
    TwoLevelTable t;
    t.add_prefix(mac_for_ip(0, 0, 0), 2, 1);
    t.add_prefix(mac_for_ip(0, 0, 0), 3, 2);  // never reached: same prefix class
    CHECK(t.lookup(mac_for_ip(0, 5, 5)) == 1);
}

TEST_CASE("fattree edge lookup follows the paper's example") {
    Network net = build_fattree();
    // At S1 (left-side edge): inter-pod destination with last octet 03 goes
    // out port 3; at S4 (right-side agg) the same destination goes out
    // port 2, landing at C3.
    int s1 = net.node_id("S1"), s4 = net.node_id("S4");
    MacAddr h10 = net.info(net.node_id("H10")).mac;  // 10.2.0.3
    CHECK(to_string(h10) == "0A-AA-0A-02-00-03");
    CHECK(net.route(s1, h10) == 3);
    CHECK(net.peer(s1, 3).node == s4);
    CHECK(net.route(s4, h10) == 2);
    CHECK(net.info(net.peer(s4, 2).node).name == "C3");
}

TEST_CASE("intra-pod destinations resolve via prefix to host-facing ports") {
    Network net = build_fattree();
    int s1 = net.node_id("S1");
    CHECK(net.route(s1, net.info(net.node_id("H1")).mac) == 0);
    CHECK(net.route(s1, net.info(net.node_id("H2")).mac) == 1);
}

TEST_CASE("unroutable destination is fatal") {
    Network net = build_tree();
    CHECK_THROWS_AS(net.route(net.node_id("S1"), mac_for_ip(9, 9, 9)), SimError);
}
