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

#ifndef BACKHAUL_TRAFFIC_GEN_H_
#define BACKHAUL_TRAFFIC_GEN_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "backhaul/net_model.h"
#include "json.hpp"

namespace backhaul {

// 24 h at 15-minute granularity; interval k starts at k * 15 min after 00:00.
inline constexpr int kIntervalsPerDay = 96;
inline constexpr int kTrainIntervals = 67;
inline constexpr int kValidationIntervals = 9;
inline constexpr int kTestIntervals = 20;

// Interval index of a wall-clock time, e.g. interval_at(13, 45) == 55.
constexpr int interval_at(int hour, int minute) {
  return (hour * 60 + minute) / 15;
}

// True when k lies in [first, last) taken modulo a day, so windows may wrap
// midnight.
bool in_window(int k, int first, int last);

enum class ScenarioKind { kWithSatellite4Slices, kNoSatellite3Slices };

std::string ToString(ScenarioKind kind);
ScenarioKind ScenarioKindFromString(const std::string& name);

struct SliceProfileEntry {
  int t = 0;
  NodeId bs = kCongestedStation;
  int sid = 0;
  Mbps thdl = 0.0;
  Mbps thul = 0.0;
  Millis ddl = 0.0;
  Millis dul = 0.0;
};

struct BsLoadEntry {
  int t = 0;
  Mbps thdl = 0.0;
  Mbps thul = 0.0;
};

// Trapezoidal bump: ramps up over [rise_start, plateau_start], holds until
// plateau_end, ramps down until fall_end. Indices wrap modulo a day.
struct Pulse {
  double height = 0.0;
  int rise_start = 0;
  int plateau_start = 0;
  int plateau_end = 0;
  int fall_end = 0;
};

// base + sum of pulses, then a seeded multiplicative jitter in
// [1 - jitter, 1 + jitter].
struct CurveParams {
  double base = 0.0;
  std::vector<Pulse> pulses;
  double jitter = 0.0;
};

double pulse_shape(const Pulse& pulse, int k);
double curve_value(const CurveParams& curve, int k);

struct SliceParams {
  int sid = 0;
  std::string name;
  Millis ddl_ms = 0.0;
  Millis dul_ms = 0.0;
  CurveParams dl;
  CurveParams ul;
};

struct LoadProfileParams {
  int profile = 0;
  std::string description;
  CurveParams dl;
  CurveParams ul;
};

struct ScenarioParams {
  std::string name;
  bool with_satellite = true;
  double packet_size_bits = kDefaultPacketBits;
  std::vector<SliceParams> slices;
  std::vector<LoadProfileParams> load_profiles;
};

ScenarioParams default_scenario_params(ScenarioKind kind);

// Neighbor load profile for base station b (2..7): ((b - 1) mod 3) + 1.
int assign_profile(int bs_index);

std::vector<SliceProfileEntry> generate_slice_profiles(
    const ScenarioParams& params, std::uint64_t seed);
std::vector<SliceProfileEntry> generate_slice_profiles(ScenarioKind kind,
                                                       std::uint64_t seed);

// One 96-entry timetable per load profile, in profile order.
std::vector<std::vector<BsLoadEntry>> generate_bs_load_profiles(
    const ScenarioParams& params, std::uint64_t seed);
std::vector<std::vector<BsLoadEntry>> generate_bs_load_profiles(
    std::uint64_t seed);

struct DatasetSplit {
  std::vector<int> train;
  std::vector<int> validation;
  std::vector<int> test;
};

enum class SplitPart { kTrain, kValidation, kTest };
std::string ToString(SplitPart part);

const std::vector<int>& intervals_of(const DatasetSplit& split, SplitPart part);

// Seeded 67/9/20 partition of 0..95; each part sorted chronologically.
DatasetSplit split_dataset(std::uint64_t seed);

// Everything an environment needs: topology, timetables and the split.
struct Scenario {
  ScenarioParams params;
  Topology topology;
  std::vector<SliceProfileEntry> slices;
  std::vector<std::vector<BsLoadEntry>> load_profiles;
  DatasetSplit split;

  int num_slices() const;
  // Entry of slice `sid_index` (0-based, ascending sid) at interval t.
  const SliceProfileEntry& slice_at(int t, int sid_index) const;
  // Access load of neighbor `bs` at interval t via assign_profile.
  const BsLoadEntry& load_at(NodeId bs, int t) const;
  std::vector<int> slice_ids() const;
};

Scenario make_scenario(const ScenarioParams& params, std::uint64_t seed);
Scenario make_scenario(ScenarioKind kind, std::uint64_t seed);

void write_slice_csv(const std::filesystem::path& file,
                     const std::vector<SliceProfileEntry>& entries);
std::vector<SliceProfileEntry> read_slice_csv(const std::filesystem::path& file);
void write_load_csv(const std::filesystem::path& file,
                    const std::vector<std::vector<BsLoadEntry>>& profiles);
std::vector<std::vector<BsLoadEntry>> read_load_csv(
    const std::filesystem::path& file);

void to_json(nlohmann::json& j, const Pulse& p);
void from_json(const nlohmann::json& j, Pulse& p);
void to_json(nlohmann::json& j, const CurveParams& c);
void from_json(const nlohmann::json& j, CurveParams& c);
void to_json(nlohmann::json& j, const ScenarioParams& params);
void from_json(const nlohmann::json& j, ScenarioParams& params);
void to_json(nlohmann::json& j, const DatasetSplit& split);
void from_json(const nlohmann::json& j, DatasetSplit& split);

// Scenario JSON carries the generator parameters, topology and split;
// timetables live in the two CSV files next to it.
void write_scenario_files(const std::filesystem::path& dir,
                          const Scenario& scenario);
Scenario read_scenario_files(const std::filesystem::path& dir);

}  // namespace backhaul

#endif  // BACKHAUL_TRAFFIC_GEN_H_
