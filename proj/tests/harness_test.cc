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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "backhaul/harness.h"
#include "doctest.h"

namespace backhaul {
namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("backhaul_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& file) {
  std::ifstream in(file);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

RunConfig small_config(const std::string& name) {
  RunConfig c = default_run_config(ScenarioKind::kNoSatellite3Slices);
  c.agent.hidden_layers = {8};
  c.threshold = 0.0;
  c.window = 2;
  c.episode_cap = 5;
  c.random_runs = 3;
  c.output_dir = fresh_dir(name).string();
  return c;
}

TEST_CASE("scenario defaults") {
  const RunConfig sat = default_run_config(ScenarioKind::kWithSatellite4Slices);
  CHECK(sat.scenario == "with_satellite_4slices");
  CHECK(sat.threshold == 0.97);
  const RunConfig ground = default_run_config(ScenarioKind::kNoSatellite3Slices);
  CHECK(ground.threshold == 0.975);
  CHECK(ground.agent.hidden_layers == std::vector<int>{80});
  CHECK_NOTHROW(validate(sat));
}

TEST_CASE("config validation") {
  RunConfig c = default_run_config(ScenarioKind::kWithSatellite4Slices);
  c.threshold = 1.2;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.threshold = -0.1;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.threshold = 0.0;
  CHECK_NOTHROW(validate(c));
  c = default_run_config(ScenarioKind::kWithSatellite4Slices);
  c.window = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = default_run_config(ScenarioKind::kWithSatellite4Slices);
  c.agent.hidden_layers = {};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = default_run_config(ScenarioKind::kWithSatellite4Slices);
  c.agent.learning_rate = 0.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = default_run_config(ScenarioKind::kWithSatellite4Slices);
  c.scenario = "nowhere";
  CHECK_THROWS(validate(c));
}

TEST_CASE("config json round trip and partial overrides") {
  RunConfig c = default_run_config(ScenarioKind::kNoSatellite3Slices);
  c.agent.hidden_layers = {40, 40, 40};
  c.agent.seed = 9;
  c.agent.bootstrap_episode_end = false;
  c.episode_cap = 300;
  const nlohmann::json j = c;
  const RunConfig back = j.get<RunConfig>();
  CHECK(nlohmann::json(back) == j);

  const auto partial = nlohmann::json::parse(
      R"({"scenario": "no_satellite_3slices", "episode_cap": 12})");
  const RunConfig p = partial.get<RunConfig>();
  CHECK(p.threshold == 0.975);
  CHECK(p.episode_cap == 12);
  CHECK(p.agent.minibatch_size == 64);
}

RunReport cell(int validation, int test, std::size_t parameters, int episodes,
               bool converged = true) {
  RunReport r;
  r.validation_reward = validation;
  r.test_reward = test;
  r.parameters = parameters;
  r.episodes_run = episodes;
  r.converged = converged;
  return r;
}

TEST_CASE("model selection order") {
  CHECK_FALSE(select_model({}).has_value());
  CHECK_FALSE(select_model({cell(30, 70, 10, 5, false)}).has_value());
  // A non-converged cell never wins, however good.
  CHECK(select_model({cell(35, 79, 10, 5, false), cell(20, 50, 10, 5)}) == 1);
  CHECK(select_model({cell(30, 70, 10, 5), cell(31, 60, 10, 5)}) == 1);
  CHECK(select_model({cell(30, 70, 10, 5), cell(30, 71, 10, 5)}) == 1);
  CHECK(select_model({cell(30, 70, 20, 5), cell(30, 70, 10, 5)}) == 1);
  CHECK(select_model({cell(30, 70, 10, 6), cell(30, 70, 10, 5)}) == 1);
  CHECK(select_model({cell(30, 70, 10, 5), cell(30, 70, 10, 5)}) == 0);
}

TEST_CASE("sweep csv marks non-converged cells") {
  SweepResult result;
  RunReport a = cell(27, 60, 3681, 120);
  a.hidden_layers = {80};
  a.last_reward = 200;
  a.average_reward = 196.5;
  RunReport b = cell(0, 0, 1000, 300, false);
  b.hidden_layers = {8, 8, 8};
  result.cells = {a, b};
  result.selected = 0;
  const fs::path dir = fresh_dir("sweep_csv");
  fs::create_directories(dir);
  write_sweep_csv(dir / "sweep.csv", result);
  const auto rows = lines(dir / "sweep.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        "layers,neurons,episodes,last_reward,avg_reward,validation,test,"
        "parameters,selected");
  CHECK(rows[1] == "1,80,120,200,196.5,27,60,3681,yes");
  CHECK(rows[2] == "3,8,DNC,----,----,----,----,1000,no");
}

TEST_CASE("train writes its artifacts and plot data") {
  const RunConfig config = small_config("train");
  const TrainArtifacts art = cmd_train(config);
  const RunReport& r = art.report;
  CHECK(r.converged);
  CHECK(r.episodes_run == 2);
  CHECK(r.oracle_train == 201);
  CHECK(r.oracle_validation == 27);
  CHECK(r.oracle_test == 60);
  CHECK(r.episode_length == 201);
  CHECK(r.reward_trace.size() == 2);
  CHECK(r.parameters == 44 * 8 + 8 + 8 + 1);
  const fs::path dir = config.output_dir;
  for (const char* f : {"config.json", "report.json", "training_log.csv",
                        "failures.csv", "checkpoint.json",
                        "validation_trace.csv", "test_trace.csv"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  const auto log = lines(dir / "training_log.csv");
  CHECK(log.front() == "episode,reward,moving_avg,epsilon,loss_mean");
  CHECK(log.size() == 3);
  CHECK(lines(dir / "test_trace.csv").size() == 61);

  const auto stored =
      nlohmann::json::parse(slurp(dir / "report.json")).get<RunReport>();
  CHECK(stored.test_reward == r.test_reward);
  CHECK(stored.reward_trace == r.reward_trace);

  const auto [net, adam] = load_checkpoint(dir / "checkpoint.json");
  CHECK(net == art.training.network);

  cmd_plotdata(dir);
  const auto reward = lines(dir / "reward_vs_episode.csv");
  CHECK(reward.front() == "episode,reward,moving_avg,oracle_optimum,random_mean");
  CHECK(reward.size() == 3);
  const auto fails = lines(dir / "failures_vs_episode.csv");
  CHECK(fails.front() ==
        "episode,throughput_failures,latency_failures,total_failures,"
        "episode_length,reward");
  CHECK(fails.size() == 3);
  CHECK_THROWS(cmd_plotdata(fresh_dir("missing_run")));
}

TEST_CASE("baseline matches the oracle in train reports") {
  const RunConfig config = small_config("baseline");
  const BaselineReport b = cmd_baseline(config);
  CHECK(b.train.total == 201);
  CHECK(b.validation.total == 27);
  CHECK(b.test.total == 60);
  CHECK(b.random_train.rewards.size() == 3);
  CHECK(fs::exists(fs::path(config.output_dir) / "baseline.json"));
}

TEST_CASE("generated profiles load back as the same scenario") {
  const fs::path dir = fresh_dir("profiles");
  const Scenario s = cmd_gen_profiles(ScenarioKind::kNoSatellite3Slices, 3, dir);
  RunConfig c = small_config("profiles_run");
  c.scenario_dir = dir.string();
  const Scenario loaded = load_scenario(c);
  REQUIRE(loaded.slices.size() == s.slices.size());
  for (std::size_t i = 0; i < s.slices.size(); ++i) {
    CHECK(loaded.slices[i].thdl == s.slices[i].thdl);
    CHECK(loaded.slices[i].thul == s.slices[i].thul);
  }
  CHECK(loaded.split.test == s.split.test);
}

TEST_CASE("sweep is independent of the job count") {
  RunConfig base = small_config("sweep1");
  const SweepGrid grid{{1, 3}, {4, 8}};
  const SweepResult one = cmd_sweep(grid, base, 1);
  base.output_dir = fresh_dir("sweep2").string();
  const SweepResult two = cmd_sweep(grid, base, 2);
  REQUIRE(one.cells.size() == 4);
  REQUIRE(two.cells.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(nlohmann::json(one.cells[i]) == nlohmann::json(two.cells[i]));
  }
  CHECK(one.selected == two.selected);
  CHECK(slurp(fs::path(base.output_dir) / "sweep.csv") ==
        slurp(fs::temp_directory_path() / "backhaul_test_sweep1" / "sweep.csv"));
  CHECK(fs::exists(fs::path(base.output_dir) / "cells" / "L3xN8" /
                   "report.json"));
}

}  // namespace
}  // namespace backhaul
