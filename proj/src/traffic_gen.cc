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

#include "backhaul/traffic_gen.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace backhaul {
namespace {

// Stream tags keep the slice, load and split generators independent for a
// shared seed.
constexpr std::uint64_t kSliceStream = 0x51;
constexpr std::uint64_t kLoadStream = 0x10ad;
constexpr std::uint64_t kSplitStream = 0x5b1;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

std::vector<double> sample_curve(const CurveParams& curve,
                                 std::mt19937_64& rng, double upper) {
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  std::vector<double> values(kIntervalsPerDay);
  for (int k = 0; k < kIntervalsPerDay; ++k) {
    double v = curve_value(curve, k);
    if (curve.jitter > 0.0) v *= 1.0 + curve.jitter * noise(rng);
    values[k] = std::clamp(v, 0.0, upper);
  }
  return values;
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("bad number in CSV: '" + s + "'");
  }
  return v;
}

std::vector<std::vector<std::string>> read_csv_rows(
    const std::filesystem::path& file, const std::string& header) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  std::getline(in, line);
  if (line != header) {
    throw std::runtime_error(file.string() + ": expected header '" + header +
                             "'");
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

Pulse pulse(double height, int rise_start, int plateau_start, int plateau_end,
            int fall_end) {
  return {height, rise_start, plateau_start, plateau_end, fall_end};
}

std::vector<LoadProfileParams> default_load_profiles() {
  constexpr double kJitter = 0.03;
  return {
      {1, "heavily loaded for short periods",
       {150.0,
        {pulse(700.0, 28, 30, 34, 36), pulse(700.0, 68, 70, 74, 76)},
        kJitter},
       {120.0,
        {pulse(650.0, 28, 30, 34, 36), pulse(650.0, 68, 70, 74, 76)},
        kJitter}},
      {2, "lightly loaded",
       {130.0, {pulse(240.0, 28, 40, 76, 88)}, kJitter},
       {110.0, {pulse(220.0, 28, 40, 76, 88)}, kJitter}},
      {3, "heavily loaded around noon",
       {100.0, {pulse(820.0, 32, 42, 58, 66)}, kJitter},
       {80.0, {pulse(800.0, 32, 42, 58, 66)}, kJitter}},
  };
}

void validate(const Scenario& s) {
  const int n = s.num_slices();
  if (n == 0) throw std::invalid_argument("scenario has no slices");
  if (static_cast<int>(s.slices.size()) != n * kIntervalsPerDay) {
    throw std::invalid_argument("slice timetable must have 96 rows per slice");
  }
  for (std::size_t i = 0; i < s.slices.size(); ++i) {
    const SliceProfileEntry& e = s.slices[i];
    if (e.t != static_cast<int>(i) / n || e.thdl < 0.0 || e.thul < 0.0 ||
        !(e.ddl > 0.0) || !(e.dul > 0.0)) {
      throw std::invalid_argument("malformed slice timetable row " +
                                  std::to_string(i));
    }
  }
  for (const auto& profile : s.load_profiles) {
    if (profile.size() != kIntervalsPerDay) {
      throw std::invalid_argument("load timetable must have 96 rows");
    }
  }
}

}  // namespace

bool in_window(int k, int first, int last) {
  const int span = ((last - first) % kIntervalsPerDay + kIntervalsPerDay) %
                   kIntervalsPerDay;
  const int offset = ((k - first) % kIntervalsPerDay + kIntervalsPerDay) %
                     kIntervalsPerDay;
  return offset < span;
}

std::string ToString(ScenarioKind kind) {
  return kind == ScenarioKind::kWithSatellite4Slices ? "with_satellite_4slices"
                                                     : "no_satellite_3slices";
}

ScenarioKind ScenarioKindFromString(const std::string& name) {
  if (name == "with_satellite_4slices") return ScenarioKind::kWithSatellite4Slices;
  if (name == "no_satellite_3slices") return ScenarioKind::kNoSatellite3Slices;
  throw std::invalid_argument("unknown scenario: " + name);
}

std::string ToString(SplitPart part) {
  switch (part) {
    case SplitPart::kTrain:
      return "train";
    case SplitPart::kValidation:
      return "validation";
    case SplitPart::kTest:
      return "test";
  }
  return "unknown";
}

double pulse_shape(const Pulse& p, int k) {
  auto wrap = [](int v) {
    return ((v % kIntervalsPerDay) + kIntervalsPerDay) % kIntervalsPerDay;
  };
  const int d = wrap(k - p.rise_start);
  const int up = wrap(p.plateau_start - p.rise_start);
  const int hold = wrap(p.plateau_end - p.rise_start);
  const int end = wrap(p.fall_end - p.rise_start);
  if (d > end) return 0.0;
  if (d < up) return static_cast<double>(d) / up;
  if (d <= hold) return 1.0;
  return static_cast<double>(end - d) / (end - hold);
}

double curve_value(const CurveParams& curve, int k) {
  double v = curve.base;
  for (const Pulse& p : curve.pulses) v += p.height * pulse_shape(p, k);
  return v;
}

ScenarioParams default_scenario_params(ScenarioKind kind) {
  constexpr double kJitter = 0.03;
  ScenarioParams params;
  params.name = ToString(kind);
  params.load_profiles = default_load_profiles();
  if (kind == ScenarioKind::kWithSatellite4Slices) {
    params.with_satellite = true;
    // Aggregate UL exceeds 1 Gbps over 04:30-14:30 and aggregate DL over
    // 13:45-01:00. The eMBB evening bump (18:30-20:00) cannot share the wired
    // link with uRLLC and fits nowhere else.
    params.slices = {
        {1, "eMBB", 100.0, 100.0,
         {250.0,
          {pulse(430.0, 54, 55, 3, 4), pulse(320.0, 73, 74, 79, 80)},
          kJitter},
         {220.0, {pulse(430.0, 17, 18, 57, 58)}, kJitter}},
        {2, "eMTC", 10000.0, 10000.0,
         {80.0, {pulse(280.0, 53, 55, 3, 4)}, kJitter},
         {100.0, {pulse(700.0, 14, 19, 52, 58)}, kJitter}},
        {3, "uRLLC", 1.0, 1.0, {40.0, {}, 0.0}, {40.0, {}, 0.0}},
        {4, "IoT", 300.0, 300.0,
         {60.0, {pulse(120.0, 56, 58, 2, 4)}, kJitter},
         {70.0, {pulse(330.0, 20, 24, 62, 66)}, kJitter}},
    };
  } else {
    params.with_satellite = false;
    params.slices = {
        {1, "eMBB", 100.0, 100.0,
         {200.0, {pulse(460.0, 50, 55, 92, 95)}, kJitter},
         {180.0, {pulse(370.0, 14, 18, 58, 62)}, kJitter}},
        {2, "eMTC", 10000.0, 10000.0,
         {80.0, {pulse(400.0, 51, 56, 90, 94)}, kJitter},
         {90.0, {pulse(500.0, 14, 19, 52, 58)}, kJitter}},
        {3, "uRLLC", 1.0, 1.0, {40.0, {}, 0.0}, {40.0, {}, 0.0}},
    };
  }
  return params;
}

int assign_profile(int bs_index) {
  if (bs_index < 2 || bs_index > 7) {
    throw std::invalid_argument("base station index must be in 2..7");
  }
  return ((bs_index - 1) % 3) + 1;
}

std::vector<SliceProfileEntry> generate_slice_profiles(
    const ScenarioParams& params, std::uint64_t seed) {
  auto rng = make_rng(seed, kSliceStream);
  std::vector<SliceParams> slices = params.slices;
  std::sort(slices.begin(), slices.end(),
            [](const SliceParams& a, const SliceParams& b) { return a.sid < b.sid; });
  std::vector<std::vector<double>> dl, ul;
  const double unbounded = std::numeric_limits<double>::max();
  for (const SliceParams& s : slices) {
    dl.push_back(sample_curve(s.dl, rng, unbounded));
    ul.push_back(sample_curve(s.ul, rng, unbounded));
  }
  std::vector<SliceProfileEntry> entries;
  entries.reserve(slices.size() * kIntervalsPerDay);
  for (int t = 0; t < kIntervalsPerDay; ++t) {
    for (std::size_t i = 0; i < slices.size(); ++i) {
      entries.push_back({t, kCongestedStation, slices[i].sid, dl[i][t],
                         ul[i][t], slices[i].ddl_ms, slices[i].dul_ms});
    }
  }
  return entries;
}

std::vector<SliceProfileEntry> generate_slice_profiles(ScenarioKind kind,
                                                       std::uint64_t seed) {
  return generate_slice_profiles(default_scenario_params(kind), seed);
}

std::vector<std::vector<BsLoadEntry>> generate_bs_load_profiles(
    const ScenarioParams& params, std::uint64_t seed) {
  constexpr double kWirelessCapacity = 1000.0;
  auto rng = make_rng(seed, kLoadStream);
  std::vector<std::vector<BsLoadEntry>> out;
  for (const LoadProfileParams& p : params.load_profiles) {
    auto dl = sample_curve(p.dl, rng, kWirelessCapacity);
    auto ul = sample_curve(p.ul, rng, kWirelessCapacity);
    std::vector<BsLoadEntry> table;
    for (int t = 0; t < kIntervalsPerDay; ++t) table.push_back({t, dl[t], ul[t]});
    out.push_back(std::move(table));
  }
  return out;
}

std::vector<std::vector<BsLoadEntry>> generate_bs_load_profiles(
    std::uint64_t seed) {
  return generate_bs_load_profiles(
      default_scenario_params(ScenarioKind::kWithSatellite4Slices), seed);
}

const std::vector<int>& intervals_of(const DatasetSplit& split,
                                     SplitPart part) {
  switch (part) {
    case SplitPart::kTrain:
      return split.train;
    case SplitPart::kValidation:
      return split.validation;
    case SplitPart::kTest:
      return split.test;
  }
  throw std::invalid_argument("unknown split part");
}

DatasetSplit split_dataset(std::uint64_t seed) {
  std::vector<int> order(kIntervalsPerDay);
  std::iota(order.begin(), order.end(), 0);
  auto rng = make_rng(seed, kSplitStream);
  std::shuffle(order.begin(), order.end(), rng);
  DatasetSplit split;
  auto first = order.begin();
  split.train.assign(first, first + kTrainIntervals);
  first += kTrainIntervals;
  split.validation.assign(first, first + kValidationIntervals);
  first += kValidationIntervals;
  split.test.assign(first, order.end());
  for (auto* part : {&split.train, &split.validation, &split.test}) {
    std::sort(part->begin(), part->end());
  }
  return split;
}

int Scenario::num_slices() const {
  return static_cast<int>(slices.size()) / kIntervalsPerDay;
}

const SliceProfileEntry& Scenario::slice_at(int t, int sid_index) const {
  return slices.at(static_cast<std::size_t>(t * num_slices() + sid_index));
}

const BsLoadEntry& Scenario::load_at(NodeId bs, int t) const {
  const int profile = assign_profile(bs.value);
  return load_profiles.at(profile - 1).at(t);
}

std::vector<int> Scenario::slice_ids() const {
  std::vector<int> ids;
  for (int i = 0; i < num_slices(); ++i) ids.push_back(slices[i].sid);
  return ids;
}

Scenario make_scenario(const ScenarioParams& params, std::uint64_t seed) {
  Scenario s;
  s.params = params;
  s.topology = build_default_topology(params.with_satellite);
  s.slices = generate_slice_profiles(params, seed);
  s.load_profiles = generate_bs_load_profiles(params, seed);
  s.split = split_dataset(seed);
  validate(s);
  return s;
}

Scenario make_scenario(ScenarioKind kind, std::uint64_t seed) {
  return make_scenario(default_scenario_params(kind), seed);
}

void write_slice_csv(const std::filesystem::path& file,
                     const std::vector<SliceProfileEntry>& entries) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "t,bs,sid,thdl_mbps,thul_mbps,ddl_ms,dul_ms\n";
  for (const auto& e : entries) {
    out << e.t << ',' << e.bs.value << ',' << e.sid << ','
        << format_double(e.thdl) << ',' << format_double(e.thul) << ','
        << format_double(e.ddl) << ',' << format_double(e.dul) << '\n';
  }
}

std::vector<SliceProfileEntry> read_slice_csv(
    const std::filesystem::path& file) {
  std::vector<SliceProfileEntry> entries;
  for (const auto& row :
       read_csv_rows(file, "t,bs,sid,thdl_mbps,thul_mbps,ddl_ms,dul_ms")) {
    if (row.size() != 7) throw std::runtime_error("slice CSV needs 7 columns");
    entries.push_back({std::stoi(row[0]), NodeId{std::stoi(row[1])},
                       std::stoi(row[2]), parse_double(row[3]),
                       parse_double(row[4]), parse_double(row[5]),
                       parse_double(row[6])});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SliceProfileEntry& a, const SliceProfileEntry& b) {
                     return a.t != b.t ? a.t < b.t : a.sid < b.sid;
                   });
  return entries;
}

void write_load_csv(const std::filesystem::path& file,
                    const std::vector<std::vector<BsLoadEntry>>& profiles) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "t,profile,thdl_mbps,thul_mbps\n";
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    for (const auto& e : profiles[p]) {
      out << e.t << ',' << p + 1 << ',' << format_double(e.thdl) << ','
          << format_double(e.thul) << '\n';
    }
  }
}

std::vector<std::vector<BsLoadEntry>> read_load_csv(
    const std::filesystem::path& file) {
  std::vector<std::vector<BsLoadEntry>> profiles;
  for (const auto& row : read_csv_rows(file, "t,profile,thdl_mbps,thul_mbps")) {
    if (row.size() != 4) throw std::runtime_error("load CSV needs 4 columns");
    const int profile = std::stoi(row[1]);
    if (profile < 1) throw std::runtime_error("load profile ids start at 1");
    if (static_cast<int>(profiles.size()) < profile) profiles.resize(profile);
    profiles[profile - 1].push_back(
        {std::stoi(row[0]), parse_double(row[2]), parse_double(row[3])});
  }
  for (auto& table : profiles) {
    std::stable_sort(table.begin(), table.end(),
                     [](const BsLoadEntry& a, const BsLoadEntry& b) {
                       return a.t < b.t;
                     });
  }
  return profiles;
}

void to_json(nlohmann::json& j, const Pulse& p) {
  j = {{"height", p.height},
       {"rise_start", p.rise_start},
       {"plateau_start", p.plateau_start},
       {"plateau_end", p.plateau_end},
       {"fall_end", p.fall_end}};
}

void from_json(const nlohmann::json& j, Pulse& p) {
  p.height = j.at("height").get<double>();
  p.rise_start = j.at("rise_start").get<int>();
  p.plateau_start = j.at("plateau_start").get<int>();
  p.plateau_end = j.at("plateau_end").get<int>();
  p.fall_end = j.at("fall_end").get<int>();
}

void to_json(nlohmann::json& j, const CurveParams& c) {
  j = {{"base", c.base}, {"pulses", c.pulses}, {"jitter", c.jitter}};
}

void from_json(const nlohmann::json& j, CurveParams& c) {
  c.base = j.at("base").get<double>();
  c.pulses = j.value("pulses", std::vector<Pulse>{});
  c.jitter = j.value("jitter", 0.0);
}

void to_json(nlohmann::json& j, const ScenarioParams& params) {
  j = nlohmann::json::object();
  j["name"] = params.name;
  j["with_satellite"] = params.with_satellite;
  j["packet_size_bits"] = params.packet_size_bits;
  auto& slices = j["slices"] = nlohmann::json::array();
  for (const SliceParams& s : params.slices) {
    slices.push_back({{"sid", s.sid},
                      {"name", s.name},
                      {"ddl_ms", s.ddl_ms},
                      {"dul_ms", s.dul_ms},
                      {"dl", s.dl},
                      {"ul", s.ul}});
  }
  auto& loads = j["load_profiles"] = nlohmann::json::array();
  for (const LoadProfileParams& p : params.load_profiles) {
    loads.push_back({{"profile", p.profile},
                     {"description", p.description},
                     {"dl", p.dl},
                     {"ul", p.ul}});
  }
}

void from_json(const nlohmann::json& j, ScenarioParams& params) {
  params.name = j.at("name").get<std::string>();
  params.with_satellite = j.value("with_satellite", true);
  params.packet_size_bits = j.value("packet_size_bits", kDefaultPacketBits);
  params.slices.clear();
  for (const auto& s : j.at("slices")) {
    params.slices.push_back({s.at("sid").get<int>(),
                             s.value("name", std::string{}),
                             s.at("ddl_ms").get<double>(),
                             s.at("dul_ms").get<double>(),
                             s.at("dl").get<CurveParams>(),
                             s.at("ul").get<CurveParams>()});
  }
  params.load_profiles.clear();
  for (const auto& p : j.at("load_profiles")) {
    params.load_profiles.push_back({p.at("profile").get<int>(),
                                    p.value("description", std::string{}),
                                    p.at("dl").get<CurveParams>(),
                                    p.at("ul").get<CurveParams>()});
  }
}

void to_json(nlohmann::json& j, const DatasetSplit& split) {
  j = {{"train", split.train},
       {"validation", split.validation},
       {"test", split.test}};
}

void from_json(const nlohmann::json& j, DatasetSplit& split) {
  split.train = j.at("train").get<std::vector<int>>();
  split.validation = j.at("validation").get<std::vector<int>>();
  split.test = j.at("test").get<std::vector<int>>();
}

void write_scenario_files(const std::filesystem::path& dir,
                          const Scenario& scenario) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["scenario"] = scenario.params;
  j["topology"] = scenario.topology;
  j["split"] = scenario.split;
  j["slice_profiles"] = "slice_profiles.csv";
  j["bs_load_profiles"] = "bs_load_profiles.csv";
  std::ofstream out(dir / "scenario.json");
  if (!out) throw std::runtime_error("cannot write scenario.json");
  out << j.dump(2) << '\n';
  write_slice_csv(dir / "slice_profiles.csv", scenario.slices);
  write_load_csv(dir / "bs_load_profiles.csv", scenario.load_profiles);
}

Scenario read_scenario_files(const std::filesystem::path& dir) {
  std::ifstream in(dir / "scenario.json");
  if (!in) throw std::runtime_error("cannot open " + (dir / "scenario.json").string());
  const nlohmann::json j = nlohmann::json::parse(in);
  Scenario s;
  s.params = j.at("scenario").get<ScenarioParams>();
  s.topology = j.at("topology").get<Topology>();
  s.split = j.at("split").get<DatasetSplit>();
  s.slices = read_slice_csv(
      dir / j.value("slice_profiles", std::string("slice_profiles.csv")));
  s.load_profiles = read_load_csv(
      dir / j.value("bs_load_profiles", std::string("bs_load_profiles.csv")));
  validate(s);
  return s;
}

}  // namespace backhaul
