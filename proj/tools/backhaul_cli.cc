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

// Command-line front end: gen-profiles, train, sweep, baseline, plotdata.

#include <cstdint>
#include <exception>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "backhaul/harness.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct GlobalFlags {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> episode_cap;
  std::optional<std::string> scenario;
  std::optional<std::string> scenario_dir;
  std::optional<std::uint64_t> scenario_seed;
};

json read_config_json(const std::string& file) {
  if (file.empty()) return json::object();
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read config " + file);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(file + ": " + e.what());
  }
}

// File values first, then command-line overrides.
backhaul::RunConfig resolve_config(const GlobalFlags& g,
                                   const std::function<void(json&)>& extra) {
  json j = read_config_json(g.config_file);
  if (g.scenario) j["scenario"] = *g.scenario;
  if (g.scenario_dir) j["scenario_dir"] = *g.scenario_dir;
  if (g.scenario_seed) j["scenario_seed"] = *g.scenario_seed;
  if (g.out) j["output_dir"] = *g.out;
  if (g.episode_cap) j["episode_cap"] = *g.episode_cap;
  if (g.seed) j["agent"]["seed"] = *g.seed;
  if (extra) extra(j);
  backhaul::RunConfig config;
  try {
    config = j.get<backhaul::RunConfig>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  backhaul::validate(config);
  return config;
}

void print_report(const backhaul::RunReport& r) {
  std::cout << "scenario " << r.scenario << ", critic";
  for (int n : r.hidden_layers) std::cout << ' ' << n;
  std::cout << ", seed " << r.agent_seed << '\n';
  if (r.converged) {
    std::cout << "converged after " << r.episodes_run << " episodes\n";
  } else {
    std::cout << "DNC after " << r.episodes_run << " episodes\n";
  }
  std::cout << "train last " << r.last_reward << " avg " << r.average_reward
            << " / oracle " << r.oracle_train << " (random "
            << r.random_train_mean << ")\n"
            << "validation " << r.validation_reward << " / "
            << r.oracle_validation << "\n"
            << "test " << r.test_reward << " / " << r.oracle_test
            << " (random " << r.random_test_mean << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Backhaul selection for a congested base station"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config_file, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Agent seed (scenario seed for gen-profiles)");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--episode-cap", g.episode_cap, "Maximum training episodes")
      ->check(CLI::PositiveNumber);
  app.add_option("--scenario", g.scenario,
                 "with_satellite_4slices or no_satellite_3slices");
  app.add_option("--scenario-dir", g.scenario_dir,
                 "Read the scenario from gen-profiles output");
  app.add_option("--scenario-seed", g.scenario_seed, "Timetable and split seed");

  auto* gen = app.add_subcommand("gen-profiles", "Write scenario timetables");

  auto* train = app.add_subcommand("train", "Train one critic");
  std::vector<int> hidden;
  std::optional<double> lr;
  std::optional<double> threshold;
  train->add_option("--hidden", hidden, "Hidden layer widths, e.g. 80 or 40,40")
      ->delimiter(',');
  train->add_option("--lr", lr, "Adam learning rate");
  train->add_option("--threshold", threshold, "Stop threshold in [0, 1]");

  auto* sweep = app.add_subcommand("sweep", "Train a grid of critics");
  backhaul::SweepGrid grid;
  int jobs = 1;
  sweep->add_option("--layers", grid.layer_counts, "Hidden layer counts")
      ->delimiter(',');
  sweep->add_option("--neurons", grid.neurons, "Neurons per hidden layer")
      ->delimiter(',');
  sweep->add_option("--jobs", jobs, "Cells trained concurrently")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--lr", lr, "Adam learning rate");
  sweep->add_option("--threshold", threshold, "Stop threshold in [0, 1]");

  auto* baseline = app.add_subcommand("baseline", "Oracle and random policy");
  std::optional<int> runs;
  baseline->add_option("--runs", runs, "Random-policy episodes per split");

  auto* plot = app.add_subcommand("plotdata", "Plot CSVs for a train run");
  std::string run_dir;
  plot->add_option("--run-dir", run_dir, "Directory written by train");

  CLI11_PARSE(app, argc, argv);

  auto overrides = [&](json& j) {
    if (!hidden.empty()) j["agent"]["hidden_layers"] = hidden;
    if (lr) j["agent"]["learning_rate"] = *lr;
    if (threshold) j["threshold"] = *threshold;
    if (runs) j["random_runs"] = *runs;
  };

  try {
    if (gen->parsed()) {
      const auto kind = backhaul::ScenarioKindFromString(
          g.scenario.value_or("with_satellite_4slices"));
      const std::uint64_t seed = g.scenario_seed.value_or(g.seed.value_or(1));
      const std::string out = g.out.value_or("scenario");
      const backhaul::Scenario s = backhaul::cmd_gen_profiles(kind, seed, out);
      std::cout << "wrote " << s.slices.size() << " slice rows to " << out
                << '\n';
    } else if (train->parsed()) {
      const auto config = resolve_config(g, overrides);
      print_report(backhaul::cmd_train(config).report);
    } else if (sweep->parsed()) {
      const auto config = resolve_config(g, overrides);
      const auto result = backhaul::cmd_sweep(grid, config, jobs);
      std::cout << "wrote " << result.cells.size() << " cells to "
                << config.output_dir << "/sweep.csv\n";
      if (result.selected) {
        const auto& best = result.cells[*result.selected];
        std::cout << "selected " << best.hidden_layers.size() << "x"
                  << best.hidden_layers.front() << '\n';
      } else {
        std::cout << "no cell converged\n";
      }
    } else if (baseline->parsed()) {
      const auto config = resolve_config(g, overrides);
      const auto r = backhaul::cmd_baseline(config);
      std::cout << "oracle train " << r.train.total << " validation "
                << r.validation.total << " test " << r.test.total << '\n'
                << "random train " << r.random_train.mean << " test "
                << r.random_test.mean << '\n';
    } else if (plot->parsed()) {
      const std::string dir = run_dir.empty() ? g.out.value_or("") : run_dir;
      if (dir.empty()) throw std::invalid_argument("plotdata needs --run-dir");
      backhaul::cmd_plotdata(dir);
      std::cout << "wrote plot data to " << dir << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
