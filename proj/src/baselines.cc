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

#include "backhaul/baselines.h"

#include <cmath>
#include <random>
#include <stdexcept>

namespace backhaul {
namespace {

struct Search {
  const Scenario& scenario;
  const std::vector<Route>& routes;
  int interval;
  int slices;
  std::vector<Action> current;
  std::vector<Action> best;
  int best_count = -1;

  // Depth-first in lexicographic order; only a strictly better count
  // replaces the incumbent, so the first optimum found is kept.
  void visit(int depth, const BandwidthLedger& ledger, int count) {
    if (count + (slices - depth) <= best_count) return;
    if (depth == slices) {
      best_count = count;
      best = current;
      return;
    }
    const SliceProfileEntry& slice = scenario.slice_at(interval, depth);
    for (Action a = 0; a < kNumActions; ++a) {
      BandwidthLedger next = ledger;
      const bool admitted =
          admit_slice(scenario.topology, routes[a], slice, next,
                      scenario.params.packet_size_bits)
              .admitted;
      current.push_back(a);
      visit(depth + 1, admitted ? next : ledger, count + (admitted ? 1 : 0));
      current.pop_back();
    }
  }
};

}  // namespace

std::vector<std::pair<int, int>> OracleResult::infeasible() const {
  std::vector<std::pair<int, int>> pairs;
  for (const IntervalOptimum& o : intervals) {
    for (int sid : o.infeasible_sids) pairs.emplace_back(o.interval, sid);
  }
  return pairs;
}

IntervalOptimum exhaustive_optimum(const Scenario& scenario, int interval) {
  const std::vector<Route> routes = candidate_routes(scenario.topology);
  if (static_cast<int>(routes.size()) != kNumActions) {
    throw std::invalid_argument("topology must offer 8 backhaul options");
  }
  Search search{scenario, routes, interval, scenario.num_slices(), {}, {}, -1};
  search.visit(0, interval_ledger(scenario, interval), 0);

  IntervalOptimum result;
  result.interval = interval;
  result.best_assignment = search.best;
  result.count = search.best_count;
  // Replay the winner to name the slices it leaves out.
  BandwidthLedger ledger = interval_ledger(scenario, interval);
  for (int i = 0; i < scenario.num_slices(); ++i) {
    const SliceProfileEntry& slice = scenario.slice_at(interval, i);
    if (!admit_slice(scenario.topology, routes[search.best[i]], slice, ledger,
                     scenario.params.packet_size_bits)
             .admitted) {
      result.infeasible_sids.push_back(slice.sid);
    }
  }
  return result;
}

OracleResult exhaustive_optimum(const Scenario& scenario,
                                std::span<const int> intervals) {
  OracleResult result;
  for (int t : intervals) {
    result.intervals.push_back(exhaustive_optimum(scenario, t));
    result.total += result.intervals.back().count;
  }
  return result;
}

OracleResult exhaustive_optimum(const Scenario& scenario, SplitPart part) {
  return exhaustive_optimum(scenario, intervals_of(scenario.split, part));
}

int max_episode_reward(const Scenario& scenario, SplitPart part) {
  return exhaustive_optimum(scenario, part).total;
}

RandomPolicyStats random_policy_reward(BackhaulEnv& env, SplitPart part,
                                       int n_runs, std::uint64_t seed) {
  if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> uniform(0, kNumActions - 1);
  RandomPolicyStats stats;
  for (int run = 0; run < n_runs; ++run) {
    env.reset(part);
    int reward = 0;
    while (!env.done()) reward += env.step(uniform(rng)).reward;
    stats.rewards.push_back(reward);
  }
  double sum = 0.0;
  for (int r : stats.rewards) sum += r;
  stats.mean = sum / n_runs;
  double sq = 0.0;
  for (int r : stats.rewards) sq += (r - stats.mean) * (r - stats.mean);
  stats.stddev = n_runs > 1 ? std::sqrt(sq / (n_runs - 1)) : 0.0;
  return stats;
}

void to_json(nlohmann::json& j, const IntervalOptimum& o) {
  j = {{"interval", o.interval},
       {"best_assignment", o.best_assignment},
       {"count", o.count},
       {"infeasible_slices", o.infeasible_sids}};
}

void from_json(const nlohmann::json& j, IntervalOptimum& o) {
  o.interval = j.at("interval").get<int>();
  o.best_assignment = j.at("best_assignment").get<std::vector<Action>>();
  o.count = j.at("count").get<int>();
  o.infeasible_sids = j.at("infeasible_slices").get<std::vector<int>>();
}

void to_json(nlohmann::json& j, const OracleResult& r) {
  j = {{"intervals", r.intervals}, {"total", r.total}};
}

void from_json(const nlohmann::json& j, OracleResult& r) {
  r.intervals = j.at("intervals").get<std::vector<IntervalOptimum>>();
  r.total = j.at("total").get<int>();
}

void to_json(nlohmann::json& j, const RandomPolicyStats& s) {
  j = {{"mean", s.mean}, {"stddev", s.stddev}, {"rewards", s.rewards}};
}

void from_json(const nlohmann::json& j, RandomPolicyStats& s) {
  s.mean = j.at("mean").get<double>();
  s.stddev = j.at("stddev").get<double>();
  s.rewards = j.at("rewards").get<std::vector<int>>();
}

}  // namespace backhaul
