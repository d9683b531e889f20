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

#include "backhaul/harness.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

namespace backhaul {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::ofstream open_output(const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

json read_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(file.string() + ": " + e.what());
  }
}

void write_json(const fs::path& file, const json& j) {
  std::ofstream out = open_output(file);
  out << j.dump(2) << '\n';
}

std::vector<std::vector<std::string>> read_csv(const fs::path& file,
                                               const std::string& header) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw std::runtime_error(file.string() + ": unexpected header");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

template <typename T>
void maybe_get(const json& j, const char* key, T& value) {
  if (j.contains(key)) j.at(key).get_to(value);
}

void write_training_log(const fs::path& file,
                        const std::vector<EpisodeStats>& episodes) {
  std::ofstream out = open_output(file);
  out << "episode,reward,moving_avg,epsilon,loss_mean\n";
  for (const EpisodeStats& e : episodes) {
    out << e.episode << ',' << e.reward << ',' << format_double(e.moving_average)
        << ',' << format_double(e.epsilon) << ',' << format_double(e.loss_mean)
        << '\n';
  }
}

constexpr const char* kFailuresHeader =
    "episode,sid,throughput_failures,latency_failures";

void write_failures(const fs::path& file,
                    const std::vector<EpisodeStats>& episodes,
                    const std::vector<int>& sids) {
  std::ofstream out = open_output(file);
  out << kFailuresHeader << '\n';
  for (const EpisodeStats& e : episodes) {
    for (std::size_t i = 0; i < e.failures.size(); ++i) {
      out << e.episode << ',' << sids.at(i) << ',' << e.failures[i].throughput
          << ',' << e.failures[i].latency << '\n';
    }
  }
}

std::string cell_name(const std::vector<int>& hidden) {
  return "L" + std::to_string(hidden.size()) + "xN" +
         std::to_string(hidden.empty() ? 0 : hidden.front());
}

}  // namespace

RunConfig default_run_config(ScenarioKind kind) {
  RunConfig config;
  config.scenario = ToString(kind);
  config.threshold = kind == ScenarioKind::kWithSatellite4Slices ? 0.97 : 0.975;
  return config;
}

void validate(const RunConfig& config) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid config: " + what);
  };
  if (config.scenario_dir.empty()) ScenarioKindFromString(config.scenario);
  // 0 is allowed: it stops as soon as the first window is full.
  if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
    fail("threshold must lie in [0, 1]");
  }
  if (config.window < 1) fail("window must be >= 1");
  if (config.episode_cap < 1) fail("episode_cap must be >= 1");
  if (config.random_runs < 0) fail("random_runs must be >= 0");
  const AgentConfig& a = config.agent;
  if (!(a.learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (!(a.discount >= 0.0 && a.discount <= 1.0)) {
    fail("discount must lie in [0, 1]");
  }
  if (!(a.epsilon_initial >= 0.0 && a.epsilon_initial <= 1.0)) {
    fail("epsilon_initial must lie in [0, 1]");
  }
  if (!(a.epsilon_floor >= 0.0 && a.epsilon_floor <= a.epsilon_initial)) {
    fail("epsilon_floor must lie in [0, epsilon_initial]");
  }
  if (!(a.epsilon_decay >= 0.0)) fail("epsilon_decay must be >= 0");
  if (a.minibatch_size < 1) fail("minibatch_size must be >= 1");
  if (a.replay_capacity < a.minibatch_size) {
    fail("replay_capacity must be >= minibatch_size");
  }
  if (a.target_sync_period < 1) fail("target_sync_period must be >= 1");
  if (a.hidden_layers.empty()) fail("hidden_layers must not be empty");
  for (int n : a.hidden_layers) {
    if (n < 1) fail("hidden layer widths must be >= 1");
  }
}

void to_json(json& j, const RunConfig& c) {
  const AgentConfig& a = c.agent;
  j = json{{"scenario", c.scenario},
           {"scenario_dir", c.scenario_dir},
           {"scenario_seed", c.scenario_seed},
           {"threshold", c.threshold},
           {"window", c.window},
           {"episode_cap", c.episode_cap},
           {"random_runs", c.random_runs},
           {"random_seed", c.random_seed},
           {"output_dir", c.output_dir},
           {"agent",
            {{"learning_rate", a.learning_rate},
             {"discount", a.discount},
             {"epsilon_initial", a.epsilon_initial},
             {"epsilon_decay", a.epsilon_decay},
             {"epsilon_floor", a.epsilon_floor},
             {"minibatch_size", a.minibatch_size},
             {"replay_capacity", a.replay_capacity},
             {"target_sync_period", a.target_sync_period},
             {"hidden_layers", a.hidden_layers},
             {"seed", a.seed},
             {"bootstrap_episode_end", a.bootstrap_episode_end}}}};
}

void from_json(const json& j, RunConfig& c) {
  std::string scenario = j.value("scenario", c.scenario);
  c = default_run_config(ScenarioKindFromString(scenario));
  maybe_get(j, "scenario_dir", c.scenario_dir);
  maybe_get(j, "scenario_seed", c.scenario_seed);
  maybe_get(j, "threshold", c.threshold);
  maybe_get(j, "window", c.window);
  maybe_get(j, "episode_cap", c.episode_cap);
  maybe_get(j, "random_runs", c.random_runs);
  maybe_get(j, "random_seed", c.random_seed);
  maybe_get(j, "output_dir", c.output_dir);
  if (j.contains("agent")) {
    const json& a = j.at("agent");
    maybe_get(a, "learning_rate", c.agent.learning_rate);
    maybe_get(a, "discount", c.agent.discount);
    maybe_get(a, "epsilon_initial", c.agent.epsilon_initial);
    maybe_get(a, "epsilon_decay", c.agent.epsilon_decay);
    maybe_get(a, "epsilon_floor", c.agent.epsilon_floor);
    maybe_get(a, "minibatch_size", c.agent.minibatch_size);
    maybe_get(a, "replay_capacity", c.agent.replay_capacity);
    maybe_get(a, "target_sync_period", c.agent.target_sync_period);
    maybe_get(a, "hidden_layers", c.agent.hidden_layers);
    maybe_get(a, "seed", c.agent.seed);
    maybe_get(a, "bootstrap_episode_end", c.agent.bootstrap_episode_end);
  }
}

RunConfig load_run_config(const fs::path& file) {
  RunConfig config;
  try {
    config = read_json(file).get<RunConfig>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(file.string() + ": " + e.what());
  }
  validate(config);
  return config;
}

Scenario load_scenario(const RunConfig& config) {
  if (!config.scenario_dir.empty()) {
    return read_scenario_files(config.scenario_dir);
  }
  return make_scenario(ScenarioKindFromString(config.scenario),
                       config.scenario_seed);
}

void to_json(json& j, const RunReport& r) {
  j = json{{"scenario", r.scenario},
           {"hidden_layers", r.hidden_layers},
           {"parameters", r.parameters},
           {"agent_seed", r.agent_seed},
           {"scenario_seed", r.scenario_seed},
           {"threshold", r.threshold},
           {"converged", r.converged},
           {"episodes_run", r.episodes_run},
           {"episode_length", r.episode_length},
           {"last_reward", r.last_reward},
           {"average_reward", r.average_reward},
           {"validation_reward", r.validation_reward},
           {"test_reward", r.test_reward},
           {"oracle_train", r.oracle_train},
           {"oracle_validation", r.oracle_validation},
           {"oracle_test", r.oracle_test},
           {"random_train_mean", r.random_train_mean},
           {"random_test_mean", r.random_test_mean},
           {"reward_trace", r.reward_trace}};
}

void from_json(const json& j, RunReport& r) {
  j.at("scenario").get_to(r.scenario);
  j.at("hidden_layers").get_to(r.hidden_layers);
  j.at("parameters").get_to(r.parameters);
  j.at("agent_seed").get_to(r.agent_seed);
  j.at("scenario_seed").get_to(r.scenario_seed);
  j.at("threshold").get_to(r.threshold);
  j.at("converged").get_to(r.converged);
  j.at("episodes_run").get_to(r.episodes_run);
  j.at("episode_length").get_to(r.episode_length);
  j.at("last_reward").get_to(r.last_reward);
  j.at("average_reward").get_to(r.average_reward);
  j.at("validation_reward").get_to(r.validation_reward);
  j.at("test_reward").get_to(r.test_reward);
  j.at("oracle_train").get_to(r.oracle_train);
  j.at("oracle_validation").get_to(r.oracle_validation);
  j.at("oracle_test").get_to(r.oracle_test);
  j.at("random_train_mean").get_to(r.random_train_mean);
  j.at("random_test_mean").get_to(r.random_test_mean);
  j.at("reward_trace").get_to(r.reward_trace);
}

TrainArtifacts cmd_train(const RunConfig& config) {
  validate(config);
  const Scenario scenario = load_scenario(config);
  BackhaulEnv env(scenario);

  const OracleResult oracle_train =
      exhaustive_optimum(scenario, SplitPart::kTrain);
  const int oracle_validation =
      max_episode_reward(scenario, SplitPart::kValidation);
  const int oracle_test = max_episode_reward(scenario, SplitPart::kTest);

  StopRule rule;
  rule.threshold = config.threshold;
  rule.optimum = oracle_train.total;
  rule.window = config.window;
  rule.episode_cap = config.episode_cap;

  TrainArtifacts out;
  out.training = run_training(env, config.agent, rule, SplitPart::kTrain);
  const TrainingResult& training = out.training;

  const EvaluationResult validation =
      evaluate(training.network, env, SplitPart::kValidation);
  const EvaluationResult test =
      evaluate(training.network, env, SplitPart::kTest);

  RunReport& r = out.report;
  r.scenario = scenario.params.name;
  r.hidden_layers = config.agent.hidden_layers;
  r.parameters = training.network.parameter_count();
  r.agent_seed = config.agent.seed;
  r.scenario_seed = config.scenario_seed;
  r.threshold = config.threshold;
  r.converged = training.converged;
  r.episodes_run = static_cast<int>(training.episodes.size());
  r.episode_length = training.episodes.back().length;
  r.last_reward = training.episodes.back().reward;
  r.average_reward = training.episodes.back().moving_average;
  r.validation_reward = validation.total_reward;
  r.test_reward = test.total_reward;
  r.oracle_train = oracle_train.total;
  r.oracle_validation = oracle_validation;
  r.oracle_test = oracle_test;
  if (config.random_runs > 0) {
    r.random_train_mean = random_policy_reward(env, SplitPart::kTrain,
                                               config.random_runs,
                                               config.random_seed)
                              .mean;
    r.random_test_mean = random_policy_reward(env, SplitPart::kTest,
                                              config.random_runs,
                                              config.random_seed)
                             .mean;
  }
  for (const EpisodeStats& e : training.episodes) {
    r.reward_trace.push_back(e.reward);
  }

  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  write_json(dir / "config.json", json(config));
  write_json(dir / "report.json", json(r));
  write_training_log(dir / "training_log.csv", training.episodes);
  write_failures(dir / "failures.csv", training.episodes, scenario.slice_ids());
  save_checkpoint(dir / "checkpoint.json", training.network,
                  training.optimizer);
  write_step_trace(dir / "validation_trace.csv", validation.trace);
  write_step_trace(dir / "test_trace.csv", test.trace);
  return out;
}

std::optional<std::size_t> select_model(const std::vector<RunReport>& cells) {
  std::optional<std::size_t> best;
  auto key = [](const RunReport& r) {
    // Larger is better on every component.
    return std::make_tuple(r.validation_reward, r.test_reward,
                           -static_cast<long long>(r.parameters),
                           -r.episodes_run);
  };
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].converged) continue;
    if (!best || key(cells[i]) > key(cells[*best])) best = i;
  }
  return best;
}

void write_sweep_csv(const fs::path& file, const SweepResult& result) {
  std::ofstream out = open_output(file);
  for (const std::string& c : kSweepColumns) out << c << ',';
  out << "parameters,selected\n";
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const RunReport& r = result.cells[i];
    out << r.hidden_layers.size() << ',' << r.hidden_layers.front() << ',';
    if (r.converged) {
      out << r.episodes_run << ',' << r.last_reward << ','
          << format_double(r.average_reward) << ',' << r.validation_reward
          << ',' << r.test_reward;
    } else {
      out << "DNC,----,----,----,----";
    }
    out << ',' << r.parameters << ','
        << (result.selected == i ? "yes" : "no") << '\n';
  }
}

SweepResult cmd_sweep(const SweepGrid& grid, const RunConfig& base, int jobs) {
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  validate(base);
  std::vector<RunConfig> configs;
  for (int layers : grid.layer_counts) {
    for (int neurons : grid.neurons) {
      if (layers < 1 || neurons < 1) {
        throw std::invalid_argument("sweep grid entries must be >= 1");
      }
      RunConfig c = base;
      c.agent.hidden_layers.assign(layers, neurons);
      c.output_dir =
          (fs::path(base.output_dir) / "cells" / cell_name(c.agent.hidden_layers))
              .string();
      configs.push_back(std::move(c));
    }
  }

  SweepResult result;
  result.cells.resize(configs.size());
  for (std::size_t start = 0; start < configs.size(); start += jobs) {
    const std::size_t stop = std::min(configs.size(), start + jobs);
    std::vector<std::future<RunReport>> pending;
    for (std::size_t i = start; i < stop; ++i) {
      pending.push_back(std::async(std::launch::async, [&configs, i] {
        return cmd_train(configs[i]).report;
      }));
    }
    for (std::size_t i = start; i < stop; ++i) {
      result.cells[i] = pending[i - start].get();
    }
  }
  result.selected = select_model(result.cells);
  fs::create_directories(base.output_dir);
  write_sweep_csv(fs::path(base.output_dir) / "sweep.csv", result);
  return result;
}

void to_json(json& j, const BaselineReport& r) {
  j = json{{"oracle",
            {{"train", r.train},
             {"validation", r.validation},
             {"test", r.test}}},
           {"random",
            {{"train", r.random_train},
             {"validation", r.random_validation},
             {"test", r.random_test}}}};
}

void from_json(const json& j, BaselineReport& r) {
  const json& o = j.at("oracle");
  o.at("train").get_to(r.train);
  o.at("validation").get_to(r.validation);
  o.at("test").get_to(r.test);
  const json& p = j.at("random");
  p.at("train").get_to(r.random_train);
  p.at("validation").get_to(r.random_validation);
  p.at("test").get_to(r.random_test);
}

BaselineReport cmd_baseline(const RunConfig& config) {
  validate(config);
  const Scenario scenario = load_scenario(config);
  BackhaulEnv env(scenario);
  BaselineReport r;
  r.train = exhaustive_optimum(scenario, SplitPart::kTrain);
  r.validation = exhaustive_optimum(scenario, SplitPart::kValidation);
  r.test = exhaustive_optimum(scenario, SplitPart::kTest);
  if (config.random_runs > 0) {
    r.random_train = random_policy_reward(env, SplitPart::kTrain,
                                          config.random_runs,
                                          config.random_seed);
    r.random_validation = random_policy_reward(
        env, SplitPart::kValidation, config.random_runs, config.random_seed);
    r.random_test = random_policy_reward(env, SplitPart::kTest,
                                         config.random_runs,
                                         config.random_seed);
  }
  fs::create_directories(config.output_dir);
  write_json(fs::path(config.output_dir) / "baseline.json", json(r));
  return r;
}

void cmd_plotdata(const fs::path& run_dir) {
  const RunReport report = read_json(run_dir / "report.json").get<RunReport>();
  const auto log = read_csv(run_dir / "training_log.csv",
                            "episode,reward,moving_avg,epsilon,loss_mean");
  const auto failures = read_csv(run_dir / "failures.csv", kFailuresHeader);

  // episode -> (throughput, latency)
  std::map<int, std::pair<int, int>> per_episode;
  for (const auto& row : failures) {
    if (row.size() != 4) throw std::runtime_error("malformed failures.csv");
    auto& slot = per_episode[std::stoi(row[0])];
    slot.first += std::stoi(row[2]);
    slot.second += std::stoi(row[3]);
  }

  std::ofstream rewards = open_output(run_dir / "reward_vs_episode.csv");
  rewards << "episode,reward,moving_avg,oracle_optimum,random_mean\n";
  std::ofstream causes = open_output(run_dir / "failures_vs_episode.csv");
  causes << "episode,throughput_failures,latency_failures,total_failures,"
            "episode_length,reward\n";
  for (const auto& row : log) {
    if (row.size() != 5) throw std::runtime_error("malformed training_log.csv");
    const int episode = std::stoi(row[0]);
    const int reward = std::stoi(row[1]);
    rewards << episode << ',' << reward << ',' << row[2] << ','
            << report.oracle_train << ','
            << format_double(report.random_train_mean) << '\n';
    const auto [tp, lat] = per_episode[episode];
    if (tp + lat != report.episode_length - reward) {
      throw std::runtime_error("failure counts disagree with reward in episode " +
                               std::to_string(episode));
    }
    causes << episode << ',' << tp << ',' << lat << ',' << tp + lat << ','
           << report.episode_length << ',' << reward << '\n';
  }
}

Scenario cmd_gen_profiles(ScenarioKind kind, std::uint64_t seed,
                          const fs::path& out_dir) {
  Scenario scenario = make_scenario(kind, seed);
  fs::create_directories(out_dir);
  write_scenario_files(out_dir, scenario);
  return scenario;
}

}  // namespace backhaul
