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

#ifndef BACKHAUL_NET_MODEL_H_
#define BACKHAUL_NET_MODEL_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace backhaul {

using Mbps = double;
using Millis = double;

// Latency of a path whose interfaces are saturated. Compares greater than any
// finite latency.
inline constexpr Millis kInfiniteLatency = std::numeric_limits<double>::infinity();

// 1500-byte Ethernet frame.
inline constexpr double kDefaultPacketBits = 12000.0;

struct NodeId {
  int value = 0;
  auto operator<=>(const NodeId&) const = default;
};

inline constexpr NodeId kCoreNode{0};
inline constexpr NodeId kSatelliteNode{99};
inline constexpr NodeId kCongestedStation{1};

enum class LinkKind { kWired, kWireless, kSatellite };
enum class Direction { kDownlink, kUplink };

std::string ToString(LinkKind kind);
LinkKind LinkKindFromString(const std::string& name);
std::string ToString(Direction direction);

struct Node {
  NodeId id;
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
};

// One directional link record. Wired connections are two such records (one
// fiber per direction); wireless and satellite records are the per-direction
// halves of a radio resource.
struct Link {
  LinkKind kind = LinkKind::kWired;
  NodeId src;
  NodeId dst;
  Mbps capacity_mbps = 0.0;
  Millis base_delay_ms = 0.0;
};

using LinkId = std::size_t;

// Contiguous sequence of links; links[i].dst == links[i + 1].src.
struct Path {
  std::vector<LinkId> links;
  bool operator==(const Path&) const = default;
};

class Topology {
 public:
  Topology() = default;
  // Throws std::invalid_argument on duplicate nodes, a missing core or
  // satellite node, dangling link endpoints, or non-positive capacities.
  Topology(std::vector<Node> nodes, std::vector<Link> links);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const { return links_.at(id); }
  std::size_t num_links() const { return links_.size(); }

  // Base stations are the nodes other than core and satellite.
  int num_base_stations() const;
  bool has_node(NodeId id) const;
  std::optional<LinkId> find_link(NodeId src, NodeId dst) const;
  bool is_valid_path(const Path& path) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
};

// Nine-node layout: core, BS1..BS7 and the satellite. Every base station has a
// wired pair to the core, BS1 has a wireless pair to each neighbor and a
// satellite pair through node 99. With `with_satellite` false the satellite
// node is kept but carries no links.
Topology build_default_topology(bool with_satellite = true);

// All simple directed paths from `src` to `dst` with at most `max_hops` links.
std::vector<Path> enumerate_paths(const Topology& topology, NodeId src,
                                  NodeId dst, int max_hops = 2);

enum class RouteKind { kSatellite, kWired, kNeighbor };

// A backhaul option for the congested station: the uplink path towards the
// core and the matching downlink path back. `available` is false when the
// topology lacks the links for this option.
struct Route {
  RouteKind kind = RouteKind::kWired;
  NodeId via;
  Path downlink;
  Path uplink;
  bool available = false;

  const Path& path(Direction direction) const {
    return direction == Direction::kDownlink ? downlink : uplink;
  }
};

// Routes in action order: satellite, wired, then via each neighbor BS2..BSn.
std::vector<Route> candidate_routes(const Topology& topology,
                                    NodeId station = kCongestedStation);

struct ReservationId {
  std::uint64_t value = 0;
  bool operator==(const ReservationId&) const = default;
};

struct Reservation {
  ReservationId id;
  Path path;
  Mbps demand_mbps = 0.0;
  bool operator==(const Reservation&) const = default;
};

// Per-link bandwidth accounting. Link totals are always the in-order sum of
// the outstanding reservation records touching that link.
class BandwidthLedger {
 public:
  BandwidthLedger() = default;
  explicit BandwidthLedger(const Topology& topology)
      : access_load_(topology.num_links(), 0.0),
        reserved_(topology.num_links(), 0.0) {}

  std::size_t num_links() const { return reserved_.size(); }
  void set_access_load(LinkId link, Mbps load);
  Mbps access_load(LinkId link) const { return access_load_.at(link); }
  Mbps reserved(LinkId link) const { return reserved_.at(link); }
  std::span<const Reservation> reservations() const { return records_; }

  ReservationId add(Path path, Mbps demand);
  // Returns false if `id` is not outstanding.
  bool remove(ReservationId id);

  // True when every link total equals the sum of its outstanding records.
  bool consistent() const;

  bool operator==(const BandwidthLedger&) const = default;

 private:
  void recompute(const Path& path);

  std::vector<Mbps> access_load_;
  std::vector<Mbps> reserved_;
  std::vector<Reservation> records_;
  std::uint64_t next_id_ = 1;
};

// Mean M/D/1 waiting time rho / (2 mu (1 - rho)), infinite for rho >= 1.
// `service_rate` is in packets per millisecond.
Millis mdq_waiting_time(double utilization, double service_rate);

// Interface utilization (access + reserved) / capacity.
double link_utilization(const Topology& topology, LinkId link,
                        const BandwidthLedger& ledger);

Millis link_latency(const Topology& topology, LinkId link,
                    const BandwidthLedger& ledger,
                    double packet_size_bits = kDefaultPacketBits);

// Sum of base delays plus one M/D/1 wait per traversed link.
Millis path_latency(const Topology& topology, const Path& path,
                    const BandwidthLedger& ledger,
                    double packet_size_bits = kDefaultPacketBits);

// capacity - access_load - reserved, clamped at zero.
Mbps free_capacity(const Topology& topology, LinkId link,
                   const BandwidthLedger& ledger);

// Smallest free capacity along the path; zero for an empty path.
Mbps path_free_capacity(const Topology& topology, const Path& path,
                        const BandwidthLedger& ledger);

struct ReserveResult {
  std::optional<ReservationId> reservation;
  // Set on failure: the first link whose free capacity is below the demand.
  std::optional<LinkId> limiting_link;

  bool ok() const { return reservation.has_value(); }
};

// Reserves `demand_mbps` on every link of `path` or on none of them.
ReserveResult try_reserve(const Topology& topology, const Path& path,
                          Mbps demand_mbps, BandwidthLedger& ledger);

bool release(ReservationId id, BandwidthLedger& ledger);

void to_json(nlohmann::json& j, const Topology& topology);
void from_json(const nlohmann::json& j, Topology& topology);

}  // namespace backhaul

#endif  // BACKHAUL_NET_MODEL_H_
