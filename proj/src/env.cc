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

#include "backhaul/env.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace backhaul {

double normalize_throughput(Mbps value) {
  return std::clamp(value / kThroughputScale, 0.0, 1.0);
}

double normalize_latency(Millis value) {
  if (std::isinf(value)) return 1.0;
  return std::log1p(std::clamp(value, 0.0, kLatencyCap)) /
         std::log1p(kLatencyCap);
}

std::string ToString(FailureCause cause) {
  switch (cause) {
    case FailureCause::kNone:
      return "none";
    case FailureCause::kThroughput:
      return "throughput";
    case FailureCause::kLatency:
      return "latency";
  }
  return "unknown";
}

AdmissionResult admit_slice(const Topology& topology, const Route& route,
                            const SliceProfileEntry& slice,
                            BandwidthLedger& ledger, double packet_size_bits) {
  AdmissionResult result;
  if (!route.available) {
    result.cause = FailureCause::kThroughput;
    result.failed_direction = Direction::kDownlink;
    return result;
  }
  std::vector<ReservationId> held;
  auto fail = [&](FailureCause cause, Direction direction) {
    for (auto it = held.rbegin(); it != held.rend(); ++it) release(*it, ledger);
    result.admitted = false;
    result.cause = cause;
    result.failed_direction = direction;
    return result;
  };
  for (Direction direction : {Direction::kDownlink, Direction::kUplink}) {
    const Path& path = route.path(direction);
    const Mbps demand =
        direction == Direction::kDownlink ? slice.thdl : slice.thul;
    const Millis bound =
        direction == Direction::kDownlink ? slice.ddl : slice.dul;
    Millis& latency = direction == Direction::kDownlink ? result.dl_latency_ms
                                                        : result.ul_latency_ms;
    ReserveResult reserved = try_reserve(topology, path, demand, ledger);
    if (!reserved.ok()) {
      latency = path_latency(topology, path, ledger, packet_size_bits);
      return fail(FailureCause::kThroughput, direction);
    }
    held.push_back(*reserved.reservation);
    latency = path_latency(topology, path, ledger, packet_size_bits);
    if (!(latency <= bound)) return fail(FailureCause::kLatency, direction);
  }
  result.admitted = true;
  return result;
}

BandwidthLedger interval_ledger(const Scenario& scenario, int t) {
  BandwidthLedger ledger(scenario.topology);
  const auto& links = scenario.topology.links();
  for (LinkId id = 0; id < links.size(); ++id) {
    const Link& link = links[id];
    if (link.kind != LinkKind::kWireless) continue;
    const bool uplink = link.src == kCongestedStation;
    const NodeId neighbor = uplink ? link.dst : link.src;
    if (neighbor.value < 2 || neighbor.value > 7) continue;
    const BsLoadEntry& load = scenario.load_at(neighbor, t);
    ledger.set_access_load(id, uplink ? load.thul : load.thdl);
  }
  return ledger;
}

Observation make_observation(const Scenario& scenario,
                             std::span<const Route> routes,
                             const SliceProfileEntry& slice,
                             const BandwidthLedger& ledger) {
  const Topology& topology = scenario.topology;
  const double packet_bits = scenario.params.packet_size_bits;
  Observation obs;
  obs(0) = normalize_throughput(slice.thdl);
  obs(1) = normalize_throughput(slice.thul);
  obs(2) = normalize_latency(slice.ddl);
  obs(3) = normalize_latency(slice.dul);
  for (int r = 0; r < kNumActions; ++r) {
    const Route& route = routes[r];
    if (!route.available) {
      obs(4 + 2 * r) = 0.0;
      obs(5 + 2 * r) = 0.0;
      obs(20 + 2 * r) = 1.0;
      obs(21 + 2 * r) = 1.0;
      continue;
    }
    obs(4 + 2 * r) = normalize_throughput(
        path_free_capacity(topology, route.downlink, ledger));
    obs(5 + 2 * r) = normalize_throughput(
        path_free_capacity(topology, route.uplink, ledger));
    obs(20 + 2 * r) = normalize_latency(
        path_latency(topology, route.downlink, ledger, packet_bits));
    obs(21 + 2 * r) = normalize_latency(
        path_latency(topology, route.uplink, ledger, packet_bits));
  }
  return obs;
}

StepRecord make_step_record(int episode, int step, const StepOutcome& o) {
  return {episode,  step,           o.t,
          o.sid,    o.action,       o.reward,
          o.failure_cause, o.dl_latency_ms, o.ul_latency_ms};
}

void write_step_trace(const std::filesystem::path& file,
                      std::span<const StepRecord> records) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "episode,step,t,sid,action,reward,failure_cause,dl_latency_ms,"
         "ul_latency_ms\n";
  out.precision(17);
  for (const StepRecord& r : records) {
    out << r.episode << ',' << r.step << ',' << r.t << ',' << r.sid << ','
        << r.action << ',' << r.reward << ',' << ToString(r.failure_cause)
        << ',' << r.dl_latency_ms << ',' << r.ul_latency_ms << '\n';
  }
}

BackhaulEnv::BackhaulEnv(const Scenario& scenario)
    : scenario_(&scenario), routes_(candidate_routes(scenario.topology)) {
  if (static_cast<int>(routes_.size()) != kNumActions) {
    throw std::invalid_argument("topology must offer exactly " +
                                std::to_string(kNumActions) +
                                " backhaul options for BS1");
  }
  if (scenario.num_slices() == 0) {
    throw std::invalid_argument("scenario has no slices");
  }
}

Observation BackhaulEnv::reset(SplitPart part) {
  return reset(intervals_of(scenario_->split, part));
}

Observation BackhaulEnv::reset(std::vector<int> intervals) {
  if (intervals.empty()) {
    throw std::invalid_argument("cannot run an episode over an empty split");
  }
  for (int t : intervals) {
    if (t < 0 || t >= kIntervalsPerDay) {
      throw std::invalid_argument("interval index out of range");
    }
  }
  intervals_ = std::move(intervals);
  interval_cursor_ = 0;
  done_ = false;
  begin_interval();
  return observe();
}

void BackhaulEnv::begin_interval() {
  slice_cursor_ = 0;
  ledger_ = interval_ledger(*scenario_, current_interval());
}

int BackhaulEnv::episode_length() const {
  return static_cast<int>(intervals_.size()) * num_slices();
}

const SliceProfileEntry& BackhaulEnv::current_slice() const {
  return scenario_->slice_at(current_interval(), slice_cursor_);
}

Observation BackhaulEnv::observe() const {
  if (done_) return Observation::Zero();
  return make_observation(*scenario_, routes_, current_slice(), ledger_);
}

StepOutcome BackhaulEnv::step(Action action) {
  if (done_) throw std::logic_error("step() called on a finished episode");
  if (action < 0 || action >= kNumActions) {
    throw std::invalid_argument("action index out of range");
  }
  const SliceProfileEntry& slice = current_slice();
  StepOutcome outcome;
  outcome.t = slice.t;
  outcome.sid = slice.sid;
  outcome.action = action;

  AdmissionResult admission =
      admit_slice(scenario_->topology, routes_[action], slice, ledger_,
                  scenario_->params.packet_size_bits);
  outcome.reward = admission.admitted ? 1 : 0;
  outcome.failure_cause = admission.cause;
  outcome.failed_direction = admission.failed_direction;
  outcome.dl_latency_ms = admission.dl_latency_ms;
  outcome.ul_latency_ms = admission.ul_latency_ms;

  if (++slice_cursor_ == num_slices()) {
    if (++interval_cursor_ == intervals_.size()) {
      done_ = true;
    } else {
      begin_interval();
    }
  }
  outcome.terminal = done_;
  outcome.next_observation = observe();
  return outcome;
}

}  // namespace backhaul
