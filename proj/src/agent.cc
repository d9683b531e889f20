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

#include "backhaul/agent.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace backhaul {

std::vector<int> AgentConfig::layer_sizes() const {
  std::vector<int> sizes = {kCriticInputSize};
  sizes.insert(sizes.end(), hidden_layers.begin(), hidden_layers.end());
  sizes.push_back(1);
  return sizes;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be > 0");
  data_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ReplayBuffer::push(Experience experience) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(experience));
  } else {
    data_[next_] = std::move(experience);
  }
  next_ = (next_ + 1) % capacity_;
}

const Experience& ReplayBuffer::at(std::size_t i) const {
  if (i >= data_.size()) throw std::out_of_range("replay index out of range");
  const std::size_t oldest = full() ? next_ : 0;
  return data_[(oldest + i) % capacity_];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(
    std::size_t count, std::mt19937_64& rng) const {
  const std::size_t n = data_.size();
  if (count > n) throw std::invalid_argument("minibatch larger than buffer");
  // Floyd's algorithm: count distinct values from [0, n).
  std::vector<std::size_t> picked;
  picked.reserve(count);
  for (std::size_t j = n - count; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> dist(0, j);
    const std::size_t candidate = dist(rng);
    if (std::find(picked.begin(), picked.end(), candidate) == picked.end()) {
      picked.push_back(candidate);
    } else {
      picked.push_back(j);
    }
  }
  return picked;
}

Eigen::VectorXd critic_input(const Observation& observation, Action action) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(kCriticInputSize);
  x.head<kObservationSize>() = observation;
  x(kObservationSize + action) = 1.0;
  return x;
}

QValues q_values(const QNetwork& net, const Observation& observation) {
  QValues q;
  for (Action a = 0; a < kNumActions; ++a) {
    q(a) = net.forward(critic_input(observation, a));
  }
  return q;
}

Action argmax_action(const QValues& q) {
  Action best = 0;
  for (Action a = 1; a < kNumActions; ++a) {
    if (q(a) > q(best)) best = a;
  }
  return best;
}

Action select_action(const QNetwork& net, const Observation& observation,
                     double epsilon, std::mt19937_64& rng) {
  if (epsilon > 0.0) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
      std::uniform_int_distribution<int> uniform(0, kNumActions - 1);
      return uniform(rng);
    }
  }
  return argmax_action(q_values(net, observation));
}

double compute_target(const Experience& e, const QNetwork& online,
                      const QNetwork& target, double discount) {
  if (e.terminal) return e.reward;
  const Action next = argmax_action(q_values(online, e.next_state));
  return e.reward + discount * target.forward(critic_input(e.next_state, next));
}

Eigen::RowVectorXd compute_targets(const ReplayBuffer& buffer,
                                   const std::vector<std::size_t>& slots,
                                   const QNetwork& online,
                                   const QNetwork& target, double discount) {
  const Eigen::Index batch = static_cast<Eigen::Index>(slots.size());
  Eigen::MatrixXd candidates =
      Eigen::MatrixXd::Zero(kCriticInputSize, batch * kNumActions);
  for (Eigen::Index i = 0; i < batch; ++i) {
    const Experience& e = buffer.slot(slots[i]);
    for (Action a = 0; a < kNumActions; ++a) {
      const Eigen::Index col = i * kNumActions + a;
      candidates.col(col).head<kObservationSize>() = e.next_state;
      candidates(kObservationSize + a, col) = 1.0;
    }
  }
  const Eigen::MatrixXd online_q = online.forward_batch(candidates);

  Eigen::MatrixXd chosen = Eigen::MatrixXd::Zero(kCriticInputSize, batch);
  for (Eigen::Index i = 0; i < batch; ++i) {
    QValues q = online_q.block<1, kNumActions>(0, i * kNumActions).transpose();
    chosen.col(i) = candidates.col(i * kNumActions + argmax_action(q));
  }
  const Eigen::MatrixXd target_q = target.forward_batch(chosen);

  Eigen::RowVectorXd y(batch);
  for (Eigen::Index i = 0; i < batch; ++i) {
    const Experience& e = buffer.slot(slots[i]);
    y(i) = e.terminal ? e.reward : e.reward + discount * target_q(0, i);
  }
  return y;
}

DdqnAgent::DdqnAgent(AgentConfig config)
    : config_(std::move(config)),
      online_(init_weights<double>(config_.layer_sizes(), config_.seed)),
      target_(clone_into_target(online_)),
      adam_(online_),
      buffer_(static_cast<std::size_t>(config_.replay_capacity)),
      // Separate stream from the weight initializer.
      rng_(config_.seed ^ 0x9e3779b97f4a7c15ULL),
      epsilon_(config_.epsilon_initial) {
  if (config_.minibatch_size <= 0 || config_.target_sync_period <= 0) {
    throw std::invalid_argument("minibatch size and sync period must be > 0");
  }
  if (config_.epsilon_initial < 0.0 || config_.epsilon_initial > 1.0) {
    throw std::invalid_argument("initial epsilon must lie in [0, 1]");
  }
}

Action DdqnAgent::act(const Observation& observation) {
  return select_action(online_, observation, epsilon_, rng_);
}

Action DdqnAgent::act_greedy(const Observation& observation) const {
  return argmax_action(q_values(online_, observation));
}

std::optional<double> DdqnAgent::train_step(Experience experience) {
  buffer_.push(std::move(experience));
  ++timestep_;

  std::optional<double> loss;
  const auto batch = static_cast<std::size_t>(config_.minibatch_size);
  if (buffer_.size() >= batch) {
    const auto slots = buffer_.sample_indices(batch, rng_);
    const Eigen::RowVectorXd y =
        compute_targets(buffer_, slots, online_, target_, config_.discount);
    Eigen::MatrixXd inputs =
        Eigen::MatrixXd::Zero(kCriticInputSize, static_cast<Eigen::Index>(batch));
    for (std::size_t i = 0; i < batch; ++i) {
      const Experience& e = buffer_.slot(slots[i]);
      inputs.col(i).head<kObservationSize>() = e.state;
      inputs(kObservationSize + e.action, i) = 1.0;
    }
    const auto grads = backward(online_, inputs, y);
    adam_update(online_, adam_, grads, config_.learning_rate);
    loss = grads.loss;
  }

  if (timestep_ % config_.target_sync_period == 0) target_ = online_;
  epsilon_ = std::max(config_.epsilon_floor,
                      epsilon_ * (1.0 - config_.epsilon_decay));
  return loss;
}

TrainingResult run_training(BackhaulEnv& env, const AgentConfig& config,
                            const StopRule& stop_rule, SplitPart part) {
  if (stop_rule.window <= 0 || stop_rule.episode_cap <= 0) {
    throw std::invalid_argument("stop rule window and cap must be positive");
  }
  DdqnAgent agent(config);
  TrainingResult result;
  const double goal = stop_rule.threshold * stop_rule.optimum;
  const int slices = env.num_slices();

  // Every pass over `part` starts from the same observation.
  const Observation day_start = env.reset(part);

  for (int episode = 1; episode <= stop_rule.episode_cap; ++episode) {
    EpisodeStats stats;
    stats.episode = episode;
    stats.failures.assign(slices, {});
    stats.action_counts.assign(slices, {});
    double loss_sum = 0.0;
    int loss_steps = 0;

    Observation obs = env.reset(part);
    while (!env.done()) {
      const int slice = env.current_slice_index();
      const Action action = agent.act(obs);
      StepOutcome out = env.step(action);
      stats.reward += out.reward;
      ++stats.length;
      ++stats.action_counts[slice][action];
      if (out.failure_cause == FailureCause::kThroughput) {
        ++stats.failures[slice].throughput;
      } else if (out.failure_cause == FailureCause::kLatency) {
        ++stats.failures[slice].latency;
      }
      Experience e{obs, action, static_cast<double>(out.reward),
                   out.next_observation, out.terminal};
      if (out.terminal && config.bootstrap_episode_end) {
        e.next_state = day_start;
        e.terminal = false;
      }
      if (auto loss = agent.train_step(std::move(e))) {
        loss_sum += *loss;
        ++loss_steps;
      }
      obs = out.next_observation;
    }

    stats.epsilon = agent.epsilon();
    stats.loss_mean = loss_steps > 0 ? loss_sum / loss_steps : 0.0;
    result.episodes.push_back(std::move(stats));

    const int n = static_cast<int>(result.episodes.size());
    const int first = std::max(0, n - stop_rule.window);
    double sum = 0.0;
    for (int i = first; i < n; ++i) sum += result.episodes[i].reward;
    result.episodes.back().moving_average = sum / (n - first);

    if (n >= stop_rule.window && result.episodes.back().moving_average >= goal) {
      result.converged = true;
      break;
    }
  }
  result.network = agent.online();
  result.optimizer = agent.optimizer();
  return result;
}

EvaluationResult evaluate(const QNetwork& net, BackhaulEnv& env,
                          SplitPart part, int episode_label) {
  EvaluationResult result;
  Observation obs = env.reset(part);
  int step = 0;
  while (!env.done()) {
    const Action action = argmax_action(q_values(net, obs));
    StepOutcome out = env.step(action);
    result.total_reward += out.reward;
    result.trace.push_back(make_step_record(episode_label, step++, out));
    obs = out.next_observation;
  }
  return result;
}

}  // namespace backhaul
