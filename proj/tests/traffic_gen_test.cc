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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "backhaul/traffic_gen.h"
#include "doctest.h"

namespace backhaul {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("backhaul_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

bool same_entry(const SliceProfileEntry& a, const SliceProfileEntry& b) {
  return a.t == b.t && a.bs == b.bs && a.sid == b.sid && a.thdl == b.thdl &&
         a.thul == b.thul && a.ddl == b.ddl && a.dul == b.dul;
}

TEST_CASE("wall clock to interval") {
  CHECK(interval_at(0, 0) == 0);
  CHECK(interval_at(4, 30) == 18);
  CHECK(interval_at(13, 45) == 55);
  CHECK(interval_at(14, 30) == 58);
  CHECK(interval_at(1, 0) == 4);
  CHECK(interval_at(23, 45) == 95);
}

TEST_CASE("windows may wrap midnight") {
  CHECK(in_window(18, 18, 58));
  CHECK(in_window(57, 18, 58));
  CHECK_FALSE(in_window(58, 18, 58));
  CHECK(in_window(95, 55, 4));
  CHECK(in_window(0, 55, 4));
  CHECK(in_window(3, 55, 4));
  CHECK_FALSE(in_window(4, 55, 4));
  CHECK_FALSE(in_window(54, 55, 4));
}

TEST_CASE("neighbor profile assignment") {
  CHECK(assign_profile(2) == 2);
  CHECK(assign_profile(3) == 3);
  CHECK(assign_profile(4) == 1);
  CHECK(assign_profile(5) == 2);
  CHECK(assign_profile(6) == 3);
  CHECK(assign_profile(7) == 1);
  CHECK_THROWS_AS(assign_profile(1), std::invalid_argument);
  CHECK_THROWS_AS(assign_profile(8), std::invalid_argument);
}

TEST_CASE("trapezoid pulse") {
  const Pulse p{10.0, 10, 14, 20, 22};
  CHECK(pulse_shape(p, 9) == 0.0);
  CHECK(pulse_shape(p, 10) == 0.0);
  CHECK(pulse_shape(p, 12) == doctest::Approx(0.5));
  CHECK(pulse_shape(p, 14) == 1.0);
  CHECK(pulse_shape(p, 20) == 1.0);
  CHECK(pulse_shape(p, 21) == doctest::Approx(0.5));
  CHECK(pulse_shape(p, 22) == 0.0);
  CHECK(pulse_shape(p, 50) == 0.0);

  const Pulse wrap{1.0, 90, 94, 2, 6};
  CHECK(pulse_shape(wrap, 95) == 1.0);
  CHECK(pulse_shape(wrap, 0) == 1.0);
  CHECK(pulse_shape(wrap, 4) == doctest::Approx(0.5));
  CHECK(pulse_shape(wrap, 40) == 0.0);

  CurveParams c{5.0, {p}, 0.0};
  CHECK(curve_value(c, 16) == 15.0);
  CHECK(curve_value(c, 40) == 5.0);
}

TEST_CASE("slice timetables are deterministic per seed") {
  const auto a = generate_slice_profiles(ScenarioKind::kWithSatellite4Slices, 3);
  const auto b = generate_slice_profiles(ScenarioKind::kWithSatellite4Slices, 3);
  const auto c = generate_slice_profiles(ScenarioKind::kWithSatellite4Slices, 4);
  REQUIRE(a.size() == 4 * 96);
  bool identical = true;
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    identical = identical && same_entry(a[i], b[i]);
    differs = differs || !same_entry(a[i], c[i]);
  }
  CHECK(identical);
  CHECK(differs);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].t == static_cast<int>(i / 4));
    CHECK(a[i].sid == static_cast<int>(i % 4) + 1);
    CHECK(a[i].bs == kCongestedStation);
  }
}

TEST_CASE("slice latency bounds") {
  const auto entries =
      generate_slice_profiles(ScenarioKind::kWithSatellite4Slices, 1);
  const double bounds[] = {100.0, 10000.0, 1.0, 300.0};
  for (const auto& e : entries) {
    CHECK(e.ddl == bounds[e.sid - 1]);
    CHECK(e.dul == bounds[e.sid - 1]);
  }
  const auto ground =
      generate_slice_profiles(ScenarioKind::kNoSatellite3Slices, 1);
  CHECK(ground.size() == 3 * 96);
}

TEST_CASE("uRLLC demand is flat") {
  const auto entries =
      generate_slice_profiles(ScenarioKind::kWithSatellite4Slices, 9);
  for (const auto& e : entries) {
    if (e.sid == 3) {
      CHECK(e.thdl == 40.0);
      CHECK(e.thul == 40.0);
    }
  }
}

TEST_CASE("aggregate demand exceeds the wired link in the congestion windows") {
  // UL over 04:30-14:30, DL over 13:45-01:00, and nowhere else.
  const int ul_first = interval_at(4, 30), ul_last = interval_at(14, 30);
  const int dl_first = interval_at(13, 45), dl_last = interval_at(1, 0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario s = make_scenario(ScenarioKind::kWithSatellite4Slices, seed);
    for (int t = 0; t < kIntervalsPerDay; ++t) {
      double dl = 0.0, ul = 0.0;
      for (int i = 0; i < s.num_slices(); ++i) {
        dl += s.slice_at(t, i).thdl;
        ul += s.slice_at(t, i).thul;
      }
      CHECK_MESSAGE((ul > 1000.0) == in_window(t, ul_first, ul_last),
                    "seed " << seed << " t " << t << " UL " << ul);
      CHECK_MESSAGE((dl > 1000.0) == in_window(t, dl_first, dl_last),
                    "seed " << seed << " t " << t << " DL " << dl);
    }
  }
}

TEST_CASE("neighbor loads stay within the wireless capacity") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto loads = generate_bs_load_profiles(seed);
    REQUIRE(loads.size() == 3);
    for (const auto& profile : loads) {
      REQUIRE(profile.size() == 96);
      for (int t = 0; t < 96; ++t) {
        CHECK(profile[t].t == t);
        CHECK(profile[t].thdl >= 0.0);
        CHECK(profile[t].thdl <= 1000.0);
        CHECK(profile[t].thul >= 0.0);
        CHECK(profile[t].thul <= 1000.0);
      }
    }
  }
}

TEST_CASE("load profiles have their intended shapes") {
  const auto loads = generate_bs_load_profiles(1);
  auto mean = [](const std::vector<BsLoadEntry>& p, int first, int last) {
    double sum = 0.0;
    for (int t = first; t < last; ++t) sum += p[t].thdl;
    return sum / (last - first);
  };
  // Profile 2 never gets heavy; profile 3 peaks around noon.
  auto peak = [&](int p) {
    double m = 0.0;
    for (const auto& e : loads[p]) m = std::max(m, e.thdl);
    return m;
  };
  CHECK(peak(1) < 500.0);
  CHECK(peak(0) > 800.0);
  CHECK(peak(2) > 800.0);
  CHECK(mean(loads[2], 44, 56) > 800.0);
  CHECK(mean(loads[2], 0, 20) < 150.0);
  CHECK(mean(loads[0], 30, 34) > 800.0);
  CHECK(mean(loads[0], 40, 60) < 200.0);
}

TEST_CASE("dataset split") {
  const DatasetSplit a = split_dataset(1);
  CHECK(a.train.size() == 67);
  CHECK(a.validation.size() == 9);
  CHECK(a.test.size() == 20);
  std::vector<int> all;
  for (const auto* part : {&a.train, &a.validation, &a.test}) {
    CHECK(std::is_sorted(part->begin(), part->end()));
    all.insert(all.end(), part->begin(), part->end());
  }
  std::sort(all.begin(), all.end());
  std::vector<int> expected(96);
  std::iota(expected.begin(), expected.end(), 0);
  CHECK(all == expected);

  CHECK(split_dataset(1).train == a.train);
  CHECK(split_dataset(2).train != a.train);
  CHECK(&intervals_of(a, SplitPart::kTest) == &a.test);
  CHECK(ToString(SplitPart::kValidation) == "validation");
}

TEST_CASE("scenario lookups") {
  const Scenario s = make_scenario(ScenarioKind::kWithSatellite4Slices, 1);
  CHECK(s.num_slices() == 4);
  CHECK(s.slice_ids() == std::vector<int>{1, 2, 3, 4});
  CHECK(s.slice_at(10, 2).t == 10);
  CHECK(s.slice_at(10, 2).sid == 3);
  CHECK(&s.load_at(NodeId{4}, 7) == &s.load_profiles[0][7]);
  CHECK(&s.load_at(NodeId{6}, 7) == &s.load_profiles[2][7]);
  CHECK(s.topology.num_links() == 30);
  CHECK(make_scenario(ScenarioKind::kNoSatellite3Slices, 1).topology.num_links() ==
        26);
  CHECK(ScenarioKindFromString(ToString(ScenarioKind::kNoSatellite3Slices)) ==
        ScenarioKind::kNoSatellite3Slices);
  CHECK_THROWS_AS(ScenarioKindFromString("nope"), std::invalid_argument);
}

TEST_CASE("CSV timetables round trip bit for bit") {
  const fs::path dir = scratch_dir("csv");
  const Scenario s = make_scenario(ScenarioKind::kWithSatellite4Slices, 5);
  write_slice_csv(dir / "slices.csv", s.slices);
  write_load_csv(dir / "loads.csv", s.load_profiles);
  const auto slices = read_slice_csv(dir / "slices.csv");
  const auto loads = read_load_csv(dir / "loads.csv");
  REQUIRE(slices.size() == s.slices.size());
  for (std::size_t i = 0; i < slices.size(); ++i) {
    CHECK(same_entry(slices[i], s.slices[i]));
  }
  REQUIRE(loads.size() == s.load_profiles.size());
  for (std::size_t p = 0; p < loads.size(); ++p) {
    for (int t = 0; t < 96; ++t) {
      CHECK(loads[p][t].thdl == s.load_profiles[p][t].thdl);
      CHECK(loads[p][t].thul == s.load_profiles[p][t].thul);
    }
  }
  std::ifstream in(dir / "slices.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,bs,sid,thdl_mbps,thul_mbps,ddl_ms,dul_ms");
}

TEST_CASE("malformed CSV is rejected") {
  const fs::path dir = scratch_dir("badcsv");
  {
    std::ofstream out(dir / "a.csv");
    out << "t,sid\n1,2\n";
  }
  CHECK_THROWS(read_slice_csv(dir / "a.csv"));
  {
    std::ofstream out(dir / "b.csv");
    out << "t,bs,sid,thdl_mbps,thul_mbps,ddl_ms,dul_ms\n0,1,1,abc,1,1,1\n";
  }
  CHECK_THROWS(read_slice_csv(dir / "b.csv"));
  CHECK_THROWS(read_slice_csv(dir / "missing.csv"));
}

TEST_CASE("scenario files round trip") {
  const fs::path dir = scratch_dir("scenario");
  const Scenario s = make_scenario(ScenarioKind::kNoSatellite3Slices, 11);
  write_scenario_files(dir, s);
  CHECK(fs::exists(dir / "scenario.json"));
  CHECK(fs::exists(dir / "slice_profiles.csv"));
  CHECK(fs::exists(dir / "bs_load_profiles.csv"));
  const Scenario back = read_scenario_files(dir);
  CHECK(back.params.name == s.params.name);
  CHECK(back.params.with_satellite == s.params.with_satellite);
  CHECK(back.split.train == s.split.train);
  CHECK(back.split.test == s.split.test);
  CHECK(back.topology.num_links() == s.topology.num_links());
  REQUIRE(back.slices.size() == s.slices.size());
  for (std::size_t i = 0; i < s.slices.size(); ++i) {
    CHECK(same_entry(back.slices[i], s.slices[i]));
  }
}

TEST_CASE("scenario parameters JSON round trip") {
  const ScenarioParams p =
      default_scenario_params(ScenarioKind::kWithSatellite4Slices);
  const nlohmann::json j = p;
  const ScenarioParams back = j.get<ScenarioParams>();
  CHECK(nlohmann::json(back) == j);
  // Same parameters and seed give the same timetable.
  const auto a = generate_slice_profiles(p, 2);
  const auto b = generate_slice_profiles(back, 2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_entry(a[i], b[i]));
}

}  // namespace
}  // namespace backhaul
