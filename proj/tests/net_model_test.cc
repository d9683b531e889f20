// Copyright 2026 The Backhaul Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "backhaul/net_model.h"
#include "doctest.h"

namespace backhaul {
namespace {

Path route_path(const Topology& topo, Direction dir, int action) {
  return candidate_routes(topo)[action].path(dir);
}

TEST_CASE("default topology has the nine nodes and all link pairs") {
  const Topology topo = build_default_topology();
  CHECK(topo.nodes().size() == 9);
  CHECK(topo.num_base_stations() == 7);
  // 7 wired pairs, 6 wireless pairs, 2 satellite pairs.
  CHECK(topo.num_links() == 30);
  CHECK(topo.has_node(kSatelliteNode));
  CHECK(topo.find_link(NodeId{1}, kSatelliteNode).has_value());
  CHECK(topo.find_link(kSatelliteNode, kCoreNode).has_value());
  CHECK_FALSE(topo.find_link(NodeId{2}, NodeId{3}).has_value());

  const Topology ground = build_default_topology(false);
  CHECK(ground.num_links() == 26);
  CHECK(ground.has_node(kSatelliteNode));
  CHECK_FALSE(ground.find_link(NodeId{1}, kSatelliteNode).has_value());
}

TEST_CASE("link parameters follow the link kind") {
  const Topology topo = build_default_topology();
  for (const Link& l : topo.links()) {
    CHECK(l.capacity_mbps == 1000.0);
    switch (l.kind) {
      case LinkKind::kWired:
        CHECK(l.base_delay_ms == 0.1);
        break;
      case LinkKind::kWireless:
        CHECK(l.base_delay_ms == 1.0);
        break;
      case LinkKind::kSatellite:
        CHECK(l.base_delay_ms == 100.0);
        break;
    }
  }
}

TEST_CASE("topology rejects malformed input") {
  std::vector<Node> nodes = {{kCoreNode, "core"}, {NodeId{1}, "BS1"},
                             {kSatelliteNode, "sat"}};
  CHECK_NOTHROW(Topology(nodes, {{LinkKind::kWired, NodeId{1}, kCoreNode,
                                  1000.0, 0.1}}));
  CHECK_THROWS_AS(Topology(nodes, {{LinkKind::kWired, NodeId{1}, NodeId{5},
                                    1000.0, 0.1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Topology(nodes, {{LinkKind::kWired, NodeId{1}, kCoreNode,
                                    0.0, 0.1}}),
                  std::invalid_argument);
  auto dup = nodes;
  dup.push_back({NodeId{1}, "again"});
  CHECK_THROWS_AS(Topology(dup, {}), std::invalid_argument);
  CHECK_THROWS_AS(Topology({{NodeId{1}, "BS1"}, {kSatelliteNode, "sat"}}, {}),
                  std::invalid_argument);
}

TEST_CASE("link kind strings round trip") {
  for (LinkKind k : {LinkKind::kWired, LinkKind::kWireless, LinkKind::kSatellite}) {
    CHECK(LinkKindFromString(ToString(k)) == k);
  }
  CHECK_THROWS(LinkKindFromString("copper"));
}

TEST_CASE("enumerate_paths finds the eight uplink options") {
  const Topology topo = build_default_topology();
  const auto paths = enumerate_paths(topo, NodeId{1}, kCoreNode, 2);
  CHECK(paths.size() == 8);
  for (const Path& p : paths) CHECK(topo.is_valid_path(p));
  CHECK(enumerate_paths(topo, NodeId{1}, kCoreNode, 1).size() == 1);
  CHECK(enumerate_paths(build_default_topology(false), NodeId{1}, kCoreNode, 2)
            .size() == 7);
}

TEST_CASE("candidate routes come in action order") {
  const Topology topo = build_default_topology();
  const auto routes = candidate_routes(topo);
  REQUIRE(routes.size() == 8);
  CHECK(routes[0].kind == RouteKind::kSatellite);
  CHECK(routes[1].kind == RouteKind::kWired);
  for (int a = 2; a < 8; ++a) {
    CHECK(routes[a].kind == RouteKind::kNeighbor);
    CHECK(routes[a].via == NodeId{a});
  }
  for (const Route& r : routes) {
    CHECK(r.available);
    CHECK(topo.is_valid_path(r.uplink));
    CHECK(topo.is_valid_path(r.downlink));
    CHECK(topo.link(r.uplink.links.front()).src == NodeId{1});
    CHECK(topo.link(r.uplink.links.back()).dst == kCoreNode);
    CHECK(topo.link(r.downlink.links.front()).src == kCoreNode);
    CHECK(topo.link(r.downlink.links.back()).dst == NodeId{1});
  }
  const auto ground = candidate_routes(build_default_topology(false));
  REQUIRE(ground.size() == 8);
  CHECK_FALSE(ground[0].available);
  CHECK(ground[0].uplink.links.empty());
}

TEST_CASE("M/D/1 waiting time") {
  CHECK(mdq_waiting_time(0.0, 1.0) == 0.0);
  CHECK(mdq_waiting_time(0.5, 1.0) == doctest::Approx(0.5));
  CHECK(mdq_waiting_time(0.9, 2.0) == doctest::Approx(0.9 / (2 * 2.0 * 0.1)));
  CHECK(std::isinf(mdq_waiting_time(1.0, 1.0)));
  CHECK(std::isinf(mdq_waiting_time(1.7, 5.0)));
  CHECK_THROWS_AS(mdq_waiting_time(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(mdq_waiting_time(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mdq_waiting_time(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("unloaded path latencies are the base delays") {
  const Topology topo = build_default_topology();
  const BandwidthLedger ledger(topo);
  for (Direction d : {Direction::kDownlink, Direction::kUplink}) {
    CHECK(path_latency(topo, route_path(topo, d, 0), ledger) == 200.0);
    CHECK(path_latency(topo, route_path(topo, d, 1), ledger) == 0.1);
    CHECK(path_latency(topo, route_path(topo, d, 4), ledger) ==
          doctest::Approx(1.1));
  }
}

TEST_CASE("loaded wired link adds the queueing delay") {
  const Topology topo = build_default_topology();
  BandwidthLedger ledger(topo);
  const Path up = route_path(topo, Direction::kUplink, 1);
  REQUIRE(try_reserve(topo, up, 500.0, ledger).ok());
  const double mu = 1000.0 * 1000.0 / 12000.0;
  CHECK(link_utilization(topo, up.links[0], ledger) == 0.5);
  CHECK(path_latency(topo, up, ledger) ==
        doctest::Approx(0.1 + 0.5 / (2 * mu * 0.5)));
  // Larger packets serve slower.
  CHECK(path_latency(topo, up, ledger, 24000.0) >
        path_latency(topo, up, ledger, 12000.0));
  REQUIRE(try_reserve(topo, up, 500.0, ledger).ok());
  CHECK(std::isinf(path_latency(topo, up, ledger)));
  CHECK(free_capacity(topo, up.links[0], ledger) == 0.0);
}

TEST_CASE("access load counts against capacity") {
  const Topology topo = build_default_topology();
  BandwidthLedger ledger(topo);
  const Path up = route_path(topo, Direction::kUplink, 3);
  ledger.set_access_load(up.links[0], 700.0);
  CHECK(path_free_capacity(topo, up, ledger) == 300.0);
  CHECK_FALSE(try_reserve(topo, up, 300.5, ledger).ok());
  CHECK(try_reserve(topo, up, 300.0, ledger).ok());
  CHECK(path_free_capacity(topo, Path{}, ledger) == 0.0);
  CHECK_THROWS_AS(ledger.set_access_load(up.links[0], -1.0),
                  std::invalid_argument);
}

TEST_CASE("try_reserve is all or nothing") {
  const Topology topo = build_default_topology();
  BandwidthLedger ledger(topo);
  const Path up = route_path(topo, Direction::kUplink, 2);
  REQUIRE(up.links.size() == 2);
  ledger.set_access_load(up.links[1], 950.0);
  const BandwidthLedger before = ledger;
  const ReserveResult r = try_reserve(topo, up, 100.0, ledger);
  CHECK_FALSE(r.ok());
  REQUIRE(r.limiting_link.has_value());
  CHECK(*r.limiting_link == up.links[1]);
  CHECK(ledger == before);
}

TEST_CASE("try_reserve rejects bad arguments") {
  const Topology topo = build_default_topology();
  BandwidthLedger ledger(topo);
  const Path up = route_path(topo, Direction::kUplink, 1);
  CHECK_THROWS_AS(try_reserve(topo, up, -1.0, ledger), std::invalid_argument);
  CHECK_THROWS_AS(try_reserve(topo, Path{{0, 0}}, 1.0, ledger),
                  std::invalid_argument);
  CHECK_THROWS_AS(try_reserve(topo, Path{}, 1.0, ledger),
                  std::invalid_argument);
}

TEST_CASE("release restores the ledger exactly") {
  const Topology topo = build_default_topology();
  BandwidthLedger ledger(topo);
  const Path up = route_path(topo, Direction::kUplink, 5);
  const Path down = route_path(topo, Direction::kDownlink, 5);
  REQUIRE(try_reserve(topo, up, 0.1, ledger).ok());
  const BandwidthLedger before = ledger;
  const ReserveResult a = try_reserve(topo, down, 0.2, ledger);
  const ReserveResult b = try_reserve(topo, up, 0.7, ledger);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(release(*b.reservation, ledger));
  CHECK(release(*a.reservation, ledger));
  CHECK(ledger.reserved(up.links[0]) == before.reserved(up.links[0]));
  CHECK(ledger.reservations().size() == before.reservations().size());
  CHECK(ledger.consistent());
  CHECK_FALSE(release(*a.reservation, ledger));
  CHECK_FALSE(release(ReservationId{12345}, ledger));
}

TEST_CASE("topology JSON round trip") {
  const Topology topo = build_default_topology();
  const nlohmann::json j = topo;
  const Topology back = j.get<Topology>();
  REQUIRE(back.num_links() == topo.num_links());
  for (LinkId i = 0; i < topo.num_links(); ++i) {
    CHECK(back.link(i).kind == topo.link(i).kind);
    CHECK(back.link(i).src == topo.link(i).src);
    CHECK(back.link(i).dst == topo.link(i).dst);
    CHECK(back.link(i).capacity_mbps == topo.link(i).capacity_mbps);
    CHECK(back.link(i).base_delay_ms == topo.link(i).base_delay_ms);
  }
  CHECK(back.nodes().size() == topo.nodes().size());
  CHECK(j.at("links").at(0).contains("delay_ms"));
}

}  // namespace
}  // namespace backhaul
