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

#ifndef BACKHAUL_BASELINES_H_
#define BACKHAUL_BASELINES_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "backhaul/env.h"
#include "backhaul/traffic_gen.h"
#include "json.hpp"

namespace backhaul {

struct IntervalOptimum {
  int interval = 0;
  // One action per slice in ascending sid order.
  std::vector<Action> best_assignment;
  int count = 0;
  // Slices the best assignment leaves unallocated.
  std::vector<int> infeasible_sids;
};

struct OracleResult {
  std::vector<IntervalOptimum> intervals;
  int total = 0;

  // (interval, sid) pairs the best assignments cannot allocate.
  std::vector<std::pair<int, int>> infeasible() const;
};

// Tries all kNumActions^N_s joint assignments for one interval under the
// environment's slice order and admission rules. Ties go to the
// lexicographically smallest action tuple.
IntervalOptimum exhaustive_optimum(const Scenario& scenario, int interval);

OracleResult exhaustive_optimum(const Scenario& scenario,
                                std::span<const int> intervals);
OracleResult exhaustive_optimum(const Scenario& scenario, SplitPart part);

// Reward ceiling for an episode over `part`.
int max_episode_reward(const Scenario& scenario, SplitPart part);

struct RandomPolicyStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<int> rewards;
};

// Uniform action choice for every slice, one episode per run.
RandomPolicyStats random_policy_reward(BackhaulEnv& env, SplitPart part,
                                       int n_runs, std::uint64_t seed);

void to_json(nlohmann::json& j, const IntervalOptimum& o);
void from_json(const nlohmann::json& j, IntervalOptimum& o);
void to_json(nlohmann::json& j, const OracleResult& r);
void from_json(const nlohmann::json& j, OracleResult& r);
void to_json(nlohmann::json& j, const RandomPolicyStats& s);
void from_json(const nlohmann::json& j, RandomPolicyStats& s);

}  // namespace backhaul

#endif  // BACKHAUL_BASELINES_H_
