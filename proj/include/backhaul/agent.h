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

#ifndef BACKHAUL_AGENT_H_
#define BACKHAUL_AGENT_H_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "backhaul/env.h"
#include "backhaul/neural.h"

namespace backhaul {

// Tuned DDQN defaults with a single 80-neuron hidden layer.
struct AgentConfig {
  double learning_rate = 0.001;
  double discount = 0.99;
  double epsilon_initial = 0.99;
  double epsilon_decay = 0.01;
  double epsilon_floor = 0.01;
  int minibatch_size = 64;
  int replay_capacity = 20000;
  int target_sync_period = 4;
  std::vector<int> hidden_layers = {80};
  std::uint64_t seed = 1;
  // The last step of an episode ends the day, not the task: when set, its
  // replay record bootstraps from the first observation of the next pass
  // instead of being stored as terminal.
  bool bootstrap_episode_end = true;

  std::vector<int> layer_sizes() const;
};

struct Experience {
  Observation state = Observation::Zero();
  Action action = 0;
  double reward = 0.0;
  Observation next_state = Observation::Zero();
  bool terminal = false;
};

// Fixed-capacity ring buffer; once full the oldest experience is replaced.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Experience experience);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool full() const { return data_.size() == capacity_; }
  // Index 0 is the oldest stored experience.
  const Experience& at(std::size_t i) const;

  // `count` distinct storage slots drawn uniformly.
  std::vector<std::size_t> sample_indices(std::size_t count,
                                          std::mt19937_64& rng) const;
  const Experience& slot(std::size_t i) const { return data_.at(i); }

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Experience> data_;
};

using QValues = Eigen::Matrix<double, kNumActions, 1>;

// Observation followed by the one-hot action.
Eigen::VectorXd critic_input(const Observation& observation, Action action);

QValues q_values(const QNetwork& net, const Observation& observation);
// Ties resolve to the lowest index.
Action argmax_action(const QValues& q);
Action select_action(const QNetwork& net, const Observation& observation,
                     double epsilon, std::mt19937_64& rng);

// Double-Q target: the online network picks a', the target network scores it.
double compute_target(const Experience& experience, const QNetwork& online,
                      const QNetwork& target, double discount);

// Batched form of compute_target over replay slots.
Eigen::RowVectorXd compute_targets(const ReplayBuffer& buffer,
                                   const std::vector<std::size_t>& slots,
                                   const QNetwork& online,
                                   const QNetwork& target, double discount);

class DdqnAgent {
 public:
  explicit DdqnAgent(AgentConfig config);

  // Epsilon-greedy action at the current exploration rate.
  Action act(const Observation& observation);
  Action act_greedy(const Observation& observation) const;

  // Stores the transition, runs one minibatch Adam step once the buffer
  // holds a full minibatch, syncs the target every C timesteps and decays
  // epsilon. Returns the minibatch loss when a gradient step happened.
  std::optional<double> train_step(Experience experience);

  const AgentConfig& config() const { return config_; }
  double epsilon() const { return epsilon_; }
  std::int64_t timestep() const { return timestep_; }
  const QNetwork& online() const { return online_; }
  const QNetwork& target() const { return target_; }
  const QAdamState& optimizer() const { return adam_; }
  const ReplayBuffer& buffer() const { return buffer_; }

 private:
  AgentConfig config_;
  QNetwork online_;
  QNetwork target_;
  QAdamState adam_;
  ReplayBuffer buffer_;
  std::mt19937_64 rng_;
  double epsilon_;
  std::int64_t timestep_ = 0;
};

struct StopRule {
  // Stop once the moving average reaches threshold * optimum.
  double threshold = 0.97;
  double optimum = 0.0;
  int window = 10;
  int episode_cap = 500;
};

struct SliceFailures {
  int throughput = 0;
  int latency = 0;
};

struct EpisodeStats {
  int episode = 0;
  int reward = 0;
  int length = 0;
  double moving_average = 0.0;
  double epsilon = 0.0;
  double loss_mean = 0.0;
  // Indexed by slice position (ascending sid).
  std::vector<SliceFailures> failures;
  std::vector<std::array<int, kNumActions>> action_counts;
};

struct TrainingResult {
  QNetwork network;
  QAdamState optimizer;
  std::vector<EpisodeStats> episodes;
  bool converged = false;
};

TrainingResult run_training(BackhaulEnv& env, const AgentConfig& config,
                            const StopRule& stop_rule,
                            SplitPart part = SplitPart::kTrain);

struct EvaluationResult {
  int total_reward = 0;
  std::vector<StepRecord> trace;
};

// Greedy pass over one split; no learning.
EvaluationResult evaluate(const QNetwork& net, BackhaulEnv& env,
                          SplitPart part, int episode_label = 0);

}  // namespace backhaul

#endif  // BACKHAUL_AGENT_H_
