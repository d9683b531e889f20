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

#ifndef BACKHAUL_ENV_H_
#define BACKHAUL_ENV_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "backhaul/net_model.h"
#include "backhaul/traffic_gen.h"

namespace backhaul {

// Action index: 0 = satellite, 1 = wired, 2..7 = wireless via BS2..BS7.
using Action = int;

inline constexpr int kNumActions = 8;
inline constexpr int kObservationSize = 36;
inline constexpr int kCriticInputSize = kObservationSize + kNumActions;

// Throughputs and free bandwidths are divided by the largest link capacity;
// latencies are capped at the loosest slice bound.
inline constexpr Mbps kThroughputScale = 1000.0;
inline constexpr Millis kLatencyCap = 10000.0;

// Layout: [0..3]   slice thdl, thul, ddl, dul
//         [4..19]  free bandwidth, route r at 4 + 2r (DL) and 5 + 2r (UL)
//         [20..35] route latency, route r at 20 + 2r (DL) and 21 + 2r (UL)
using Observation = Eigen::Matrix<double, kObservationSize, 1>;

double normalize_throughput(Mbps value);
// +inf maps to 1.
double normalize_latency(Millis value);

enum class FailureCause { kNone, kThroughput, kLatency };
std::string ToString(FailureCause cause);

struct AdmissionResult {
  bool admitted = false;
  FailureCause cause = FailureCause::kNone;
  std::optional<Direction> failed_direction;
  // Latency including the slice's own demand where it was reserved,
  // otherwise the current-load latency.
  Millis dl_latency_ms = kInfiniteLatency;
  Millis ul_latency_ms = kInfiniteLatency;
};

// Reserves DL then UL and checks each direction's latency with the slice's
// own demand included. On any failure every tentative reservation is
// released and the ledger's link totals are restored exactly.
AdmissionResult admit_slice(const Topology& topology, const Route& route,
                            const SliceProfileEntry& slice,
                            BandwidthLedger& ledger,
                            double packet_size_bits = kDefaultPacketBits);

// Fresh ledger for interval t: neighbor access loads on the wireless links.
BandwidthLedger interval_ledger(const Scenario& scenario, int t);

Observation make_observation(const Scenario& scenario,
                             std::span<const Route> routes,
                             const SliceProfileEntry& slice,
                             const BandwidthLedger& ledger);

struct StepOutcome {
  int reward = 0;
  Observation next_observation = Observation::Zero();
  bool terminal = false;
  FailureCause failure_cause = FailureCause::kNone;
  std::optional<Direction> failed_direction;
  int t = 0;
  int sid = 0;
  Action action = 0;
  Millis dl_latency_ms = 0.0;
  Millis ul_latency_ms = 0.0;
};

// Row of the optional step trace.
struct StepRecord {
  int episode = 0;
  int step = 0;
  int t = 0;
  int sid = 0;
  Action action = 0;
  int reward = 0;
  FailureCause failure_cause = FailureCause::kNone;
  Millis dl_latency_ms = 0.0;
  Millis ul_latency_ms = 0.0;
};

StepRecord make_step_record(int episode, int step, const StepOutcome& outcome);
void write_step_trace(const std::filesystem::path& file,
                      std::span<const StepRecord> records);

// Episodic environment over a list of intervals. Within an interval the
// slices are decided one at a time in ascending sid order against a ledger
// that is rebuilt at every interval boundary. The scenario must outlive the
// environment.
class BackhaulEnv {
 public:
  explicit BackhaulEnv(const Scenario& scenario);

  Observation reset(SplitPart part);
  // Throws std::invalid_argument for an empty interval list.
  Observation reset(std::vector<int> intervals);

  Observation observe() const;
  // Throws std::logic_error once the episode is over.
  StepOutcome step(Action action);

  bool done() const { return done_; }
  int episode_length() const;
  int num_slices() const { return scenario_->num_slices(); }
  int current_interval() const { return intervals_.at(interval_cursor_); }
  int current_slice_index() const { return slice_cursor_; }
  const SliceProfileEntry& current_slice() const;
  const BandwidthLedger& ledger() const { return ledger_; }
  const std::vector<Route>& routes() const { return routes_; }
  const Scenario& scenario() const { return *scenario_; }

 private:
  void begin_interval();

  const Scenario* scenario_;
  std::vector<Route> routes_;
  std::vector<int> intervals_;
  std::size_t interval_cursor_ = 0;
  int slice_cursor_ = 0;
  bool done_ = true;
  BandwidthLedger ledger_;
};

}  // namespace backhaul

#endif  // BACKHAUL_ENV_H_
