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

#ifndef BACKHAUL_HARNESS_H_
#define BACKHAUL_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "backhaul/agent.h"
#include "backhaul/baselines.h"
#include "backhaul/traffic_gen.h"
#include "json.hpp"

namespace backhaul {

struct RunConfig {
  std::string scenario = "with_satellite_4slices";
  // When set, the scenario is read from scenario.json and its CSVs here
  // instead of being generated.
  std::string scenario_dir;
  std::uint64_t scenario_seed = 1;
  AgentConfig agent;
  // Fraction of the oracle training optimum the moving average must reach.
  double threshold = 0.97;
  int window = 10;
  int episode_cap = 500;
  int random_runs = 100;
  std::uint64_t random_seed = 7;
  std::string output_dir = "runs/default";
};

// Scenario defaults: 0.97 with satellite, 0.975 without.
RunConfig default_run_config(ScenarioKind kind);

// Throws std::invalid_argument describing the first problem found.
void validate(const RunConfig& config);

void to_json(nlohmann::json& j, const RunConfig& config);
// Fields absent from `j` keep the scenario defaults.
void from_json(const nlohmann::json& j, RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& file);

Scenario load_scenario(const RunConfig& config);

struct RunReport {
  std::string scenario;
  std::vector<int> hidden_layers;
  std::size_t parameters = 0;
  std::uint64_t agent_seed = 0;
  std::uint64_t scenario_seed = 0;
  double threshold = 0.0;
  bool converged = false;
  int episodes_run = 0;
  int episode_length = 0;
  int last_reward = 0;
  double average_reward = 0.0;
  int validation_reward = 0;
  int test_reward = 0;
  int oracle_train = 0;
  int oracle_validation = 0;
  int oracle_test = 0;
  double random_train_mean = 0.0;
  double random_test_mean = 0.0;
  std::vector<int> reward_trace;
};

void to_json(nlohmann::json& j, const RunReport& report);
void from_json(const nlohmann::json& j, RunReport& report);

struct TrainArtifacts {
  RunReport report;
  TrainingResult training;
};

// Trains, evaluates on validation and test, and writes report.json,
// training_log.csv, failures.csv, checkpoint.json and the two step traces
// to config.output_dir. Non-convergence is a result, not an error.
TrainArtifacts cmd_train(const RunConfig& config);

struct SweepGrid {
  std::vector<int> layer_counts = {1, 3, 5};
  std::vector<int> neurons = {8, 16, 24, 32, 40, 48, 56, 64, 80, 128, 256};
};

struct SweepResult {
  std::vector<RunReport> cells;
  std::optional<std::size_t> selected;
};

// Among converged cells: highest validation reward, then highest test
// reward, then fewest parameters, then fewest training episodes.
std::optional<std::size_t> select_model(const std::vector<RunReport>& cells);

inline const std::vector<std::string> kSweepColumns = {
    "layers", "neurons", "episodes", "last_reward",
    "avg_reward", "validation", "test"};

void write_sweep_csv(const std::filesystem::path& file,
                     const SweepResult& result);

// Trains every grid cell (up to `jobs` at a time) into
// <output_dir>/cells/L<layers>xN<neurons> and writes sweep.csv.
SweepResult cmd_sweep(const SweepGrid& grid, const RunConfig& base,
                      int jobs = 1);

struct BaselineReport {
  OracleResult train;
  OracleResult validation;
  OracleResult test;
  RandomPolicyStats random_train;
  RandomPolicyStats random_validation;
  RandomPolicyStats random_test;
};

void to_json(nlohmann::json& j, const BaselineReport& report);
void from_json(const nlohmann::json& j, BaselineReport& report);

// Writes baseline.json with oracle totals and random-policy statistics.
BaselineReport cmd_baseline(const RunConfig& config);

// Reads a finished train run and writes reward_vs_episode.csv and
// failures_vs_episode.csv next to it.
void cmd_plotdata(const std::filesystem::path& run_dir);

// Writes scenario.json, slice_profiles.csv and bs_load_profiles.csv.
Scenario cmd_gen_profiles(ScenarioKind kind, std::uint64_t seed,
                          const std::filesystem::path& out_dir);

}  // namespace backhaul

#endif  // BACKHAUL_HARNESS_H_
