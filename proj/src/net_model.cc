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

#include "backhaul/net_model.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace backhaul {

std::string ToString(LinkKind kind) {
  switch (kind) {
    case LinkKind::kWired:
      return "wired";
    case LinkKind::kWireless:
      return "wireless";
    case LinkKind::kSatellite:
      return "satellite";
  }
  return "unknown";
}

LinkKind LinkKindFromString(const std::string& name) {
  if (name == "wired") return LinkKind::kWired;
  if (name == "wireless") return LinkKind::kWireless;
  if (name == "satellite") return LinkKind::kSatellite;
  throw std::invalid_argument("unknown link kind: " + name);
}

std::string ToString(Direction direction) {
  return direction == Direction::kDownlink ? "DL" : "UL";
}

Topology::Topology(std::vector<Node> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  std::set<int> ids;
  for (const Node& node : nodes_) {
    if (!ids.insert(node.id.value).second) {
      throw std::invalid_argument("duplicate node id " +
                                  std::to_string(node.id.value));
    }
  }
  if (!ids.contains(kCoreNode.value) || !ids.contains(kSatelliteNode.value)) {
    throw std::invalid_argument("topology needs core node 0 and satellite 99");
  }
  for (const Link& link : links_) {
    if (!ids.contains(link.src.value) || !ids.contains(link.dst.value)) {
      throw std::invalid_argument("link endpoint is not a node");
    }
    if (!(link.capacity_mbps > 0.0) || !(link.base_delay_ms >= 0.0)) {
      throw std::invalid_argument("link capacity must be > 0, delay >= 0");
    }
  }
}

int Topology::num_base_stations() const {
  return static_cast<int>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const Node& node) {
        return node.id != kCoreNode && node.id != kSatelliteNode;
      }));
}

bool Topology::has_node(NodeId id) const {
  return std::any_of(nodes_.begin(), nodes_.end(),
                     [id](const Node& node) { return node.id == id; });
}

std::optional<LinkId> Topology::find_link(NodeId src, NodeId dst) const {
  for (LinkId i = 0; i < links_.size(); ++i) {
    if (links_[i].src == src && links_[i].dst == dst) return i;
  }
  return std::nullopt;
}

bool Topology::is_valid_path(const Path& path) const {
  if (path.links.empty()) return false;
  for (std::size_t i = 0; i < path.links.size(); ++i) {
    if (path.links[i] >= links_.size()) return false;
    if (i > 0 && links_[path.links[i - 1]].dst != links_[path.links[i]].src) {
      return false;
    }
  }
  return true;
}

Topology build_default_topology(bool with_satellite) {
  constexpr int kStations = 7;
  constexpr Mbps kCapacity = 1000.0;
  constexpr Millis kWiredDelay = 0.1;
  constexpr Millis kWirelessDelay = 1.0;
  constexpr Millis kSatelliteDelay = 100.0;
  // Stations on a ring of roughly 1 km around BS1.
  constexpr std::array<std::pair<double, double>, kStations> kSites = {{
      {42.1699, -8.6877},
      {42.1789, -8.6877},
      {42.1744, -8.6772},
      {42.1654, -8.6772},
      {42.1609, -8.6877},
      {42.1654, -8.6982},
      {42.1744, -8.6982},
  }};

  std::vector<Node> nodes;
  nodes.push_back({kCoreNode, "core", 42.2328, -8.7226});
  for (int b = 1; b <= kStations; ++b) {
    nodes.push_back({NodeId{b}, "BS" + std::to_string(b),
                     kSites[b - 1].first, kSites[b - 1].second});
  }
  nodes.push_back({kSatelliteNode, "satellite", 0.0, -8.0});

  std::vector<Link> links;
  auto add_pair = [&links](LinkKind kind, NodeId a, NodeId b, Mbps capacity,
                           Millis delay) {
    links.push_back({kind, a, b, capacity, delay});
    links.push_back({kind, b, a, capacity, delay});
  };
  for (int b = 1; b <= kStations; ++b) {
    add_pair(LinkKind::kWired, NodeId{b}, kCoreNode, kCapacity, kWiredDelay);
  }
  for (int b = 2; b <= kStations; ++b) {
    add_pair(LinkKind::kWireless, kCongestedStation, NodeId{b}, kCapacity,
             kWirelessDelay);
  }
  if (with_satellite) {
    add_pair(LinkKind::kSatellite, kCongestedStation, kSatelliteNode, kCapacity,
             kSatelliteDelay);
    add_pair(LinkKind::kSatellite, kSatelliteNode, kCoreNode, kCapacity,
             kSatelliteDelay);
  }
  return Topology(std::move(nodes), std::move(links));
}

namespace {

void extend_paths(const Topology& topology, NodeId at, NodeId dst,
                  int hops_left, std::vector<NodeId>& visited, Path& current,
                  std::vector<Path>& out) {
  if (at == dst && !current.links.empty()) {
    out.push_back(current);
    return;
  }
  if (hops_left == 0) return;
  for (LinkId id = 0; id < topology.num_links(); ++id) {
    const Link& link = topology.link(id);
    if (link.src != at) continue;
    if (std::find(visited.begin(), visited.end(), link.dst) != visited.end()) {
      continue;
    }
    visited.push_back(link.dst);
    current.links.push_back(id);
    extend_paths(topology, link.dst, dst, hops_left - 1, visited, current, out);
    current.links.pop_back();
    visited.pop_back();
  }
}

}  // namespace

std::vector<Path> enumerate_paths(const Topology& topology, NodeId src,
                                  NodeId dst, int max_hops) {
  std::vector<Path> out;
  std::vector<NodeId> visited = {src};
  Path current;
  extend_paths(topology, src, dst, max_hops, visited, current, out);
  return out;
}

std::vector<Route> candidate_routes(const Topology& topology, NodeId station) {
  auto two_hop = [&topology](NodeId a, NodeId mid, NodeId b) -> Path {
    auto first = topology.find_link(a, mid);
    auto second = topology.find_link(mid, b);
    if (!first || !second) return {};
    return Path{{*first, *second}};
  };

  std::vector<Route> routes;
  Route satellite{RouteKind::kSatellite, kSatelliteNode,
                  two_hop(kCoreNode, kSatelliteNode, station),
                  two_hop(station, kSatelliteNode, kCoreNode), false};
  routes.push_back(std::move(satellite));

  Route wired{RouteKind::kWired, station, {}, {}, false};
  if (auto dl = topology.find_link(kCoreNode, station)) wired.downlink = {{*dl}};
  if (auto ul = topology.find_link(station, kCoreNode)) wired.uplink = {{*ul}};
  routes.push_back(std::move(wired));

  for (const Node& node : topology.nodes()) {
    if (node.id == kCoreNode || node.id == kSatelliteNode ||
        node.id == station) {
      continue;
    }
    routes.push_back({RouteKind::kNeighbor, node.id,
                      two_hop(kCoreNode, node.id, station),
                      two_hop(station, node.id, kCoreNode), false});
  }
  for (Route& route : routes) {
    route.available = !route.downlink.links.empty() &&
                      !route.uplink.links.empty();
  }
  return routes;
}

void BandwidthLedger::set_access_load(LinkId link, Mbps load) {
  if (!(load >= 0.0)) throw std::invalid_argument("access load must be >= 0");
  access_load_.at(link) = load;
}

ReservationId BandwidthLedger::add(Path path, Mbps demand) {
  ReservationId id{next_id_++};
  records_.push_back({id, std::move(path), demand});
  recompute(records_.back().path);
  return id;
}

bool BandwidthLedger::remove(ReservationId id) {
  auto it = std::find_if(records_.begin(), records_.end(),
                         [id](const Reservation& r) { return r.id == id; });
  if (it == records_.end()) return false;
  Path path = std::move(it->path);
  records_.erase(it);
  recompute(path);
  return true;
}

void BandwidthLedger::recompute(const Path& path) {
  for (LinkId link : path.links) {
    Mbps total = 0.0;
    for (const Reservation& r : records_) {
      for (LinkId used : r.path.links) {
        if (used == link) total += r.demand_mbps;
      }
    }
    reserved_.at(link) = total;
  }
}

bool BandwidthLedger::consistent() const {
  std::vector<Mbps> expected(reserved_.size(), 0.0);
  for (const Reservation& r : records_) {
    for (LinkId link : r.path.links) expected.at(link) += r.demand_mbps;
  }
  return expected == reserved_;
}

Millis mdq_waiting_time(double utilization, double service_rate) {
  if (!(utilization >= 0.0) || !(service_rate >= 0.0)) {
    throw std::invalid_argument("utilization and service rate must be >= 0");
  }
  if (service_rate == 0.0) {
    throw std::invalid_argument("service rate must be positive");
  }
  if (utilization >= 1.0) return kInfiniteLatency;
  return utilization / (2.0 * service_rate * (1.0 - utilization));
}

double link_utilization(const Topology& topology, LinkId link,
                        const BandwidthLedger& ledger) {
  const Link& l = topology.link(link);
  return (ledger.access_load(link) + ledger.reserved(link)) / l.capacity_mbps;
}

Millis link_latency(const Topology& topology, LinkId link,
                    const BandwidthLedger& ledger, double packet_size_bits) {
  const Link& l = topology.link(link);
  // 1 Mbps carries 1000 bits per millisecond.
  const double service_rate = l.capacity_mbps * 1000.0 / packet_size_bits;
  return l.base_delay_ms +
         mdq_waiting_time(link_utilization(topology, link, ledger),
                          service_rate);
}

Millis path_latency(const Topology& topology, const Path& path,
                    const BandwidthLedger& ledger, double packet_size_bits) {
  Millis total = 0.0;
  for (LinkId link : path.links) {
    total += link_latency(topology, link, ledger, packet_size_bits);
  }
  return total;
}

Mbps free_capacity(const Topology& topology, LinkId link,
                   const BandwidthLedger& ledger) {
  const Mbps free = topology.link(link).capacity_mbps -
                    ledger.access_load(link) - ledger.reserved(link);
  return std::max(free, 0.0);
}

Mbps path_free_capacity(const Topology& topology, const Path& path,
                        const BandwidthLedger& ledger) {
  if (path.links.empty()) return 0.0;
  Mbps bottleneck = std::numeric_limits<double>::infinity();
  for (LinkId link : path.links) {
    bottleneck = std::min(bottleneck, free_capacity(topology, link, ledger));
  }
  return bottleneck;
}

ReserveResult try_reserve(const Topology& topology, const Path& path,
                          Mbps demand_mbps, BandwidthLedger& ledger) {
  if (!topology.is_valid_path(path)) {
    throw std::invalid_argument("path is not valid in this topology");
  }
  if (!(demand_mbps >= 0.0)) throw std::invalid_argument("demand must be >= 0");
  for (LinkId link : path.links) {
    if (free_capacity(topology, link, ledger) < demand_mbps) {
      return {std::nullopt, link};
    }
  }
  return {ledger.add(path, demand_mbps), std::nullopt};
}

bool release(ReservationId id, BandwidthLedger& ledger) {
  return ledger.remove(id);
}

void to_json(nlohmann::json& j, const Topology& topology) {
  j = nlohmann::json::object();
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const Node& node : topology.nodes()) {
    nodes.push_back({{"id", node.id.value},
                     {"name", node.name},
                     {"lat", node.lat},
                     {"lon", node.lon}});
  }
  auto& links = j["links"] = nlohmann::json::array();
  for (const Link& link : topology.links()) {
    links.push_back({{"kind", ToString(link.kind)},
                     {"src", link.src.value},
                     {"dst", link.dst.value},
                     {"capacity_mbps", link.capacity_mbps},
                     {"delay_ms", link.base_delay_ms}});
  }
}

void from_json(const nlohmann::json& j, Topology& topology) {
  std::vector<Node> nodes;
  for (const auto& n : j.at("nodes")) {
    nodes.push_back({NodeId{n.at("id").get<int>()},
                     n.value("name", std::string{}), n.value("lat", 0.0),
                     n.value("lon", 0.0)});
  }
  std::vector<Link> links;
  for (const auto& l : j.at("links")) {
    links.push_back({LinkKindFromString(l.at("kind").get<std::string>()),
                     NodeId{l.at("src").get<int>()},
                     NodeId{l.at("dst").get<int>()},
                     l.at("capacity_mbps").get<double>(),
                     l.at("delay_ms").get<double>()});
  }
  topology = Topology(std::move(nodes), std::move(links));
}

}  // namespace backhaul
