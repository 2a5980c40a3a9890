// Copyright 2026 The natdis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "natdis/engine/config.hpp"

using namespace natdis;
using namespace natdis::engine;

TEST(Config, DefaultsMatchFullScaleSettings) {
  const ScenarioConfig c;
  EXPECT_EQ(c.duration, 7 * 86400.0);
  EXPECT_EQ(c.step_dt, 1.0);
  EXPECT_EQ(c.nodes, 500);
  EXPECT_EQ(c.speeds.walking.min, 0.5);
  EXPECT_EQ(c.speeds.walking.max, 1.5);
  EXPECT_EQ(c.protocol, "epidemic");
  EXPECT_EQ(c.buffer_size, 20'000'000);
  EXPECT_EQ(c.traffic.interval_min, 8.0);
  EXPECT_EQ(c.traffic.interval_max, 12.0);
  EXPECT_EQ(c.traffic.ttl, 6 * 3600.0);
  EXPECT_EQ(c.traffic.size_min, 50'000);
  EXPECT_EQ(c.traffic.size_max, 100'000);
  EXPECT_EQ(c.phy_rate, 2'000'000.0);
  EXPECT_EQ(c.radio_range, 10.0);
  EXPECT_EQ(c.density_cell, 10.0);
  EXPECT_EQ(c.inactive_policy, InactivePolicy::kParkedVisible);
  int sum = 0;
  for (int n : c.role_counts) sum += n;
  EXPECT_EQ(sum, c.nodes);
}

TEST(Config, ParsesSectionsCommentsAndBlankLines) {
  const auto c = parse_config(R"(
# desk run
[scenario]
name = demo
duration = 3600
nodes = 3
healthy_local = 1
injured_local = 1
drt = 1
usrt = 0
scientist = 0
un_official = 0
gov_official = 0
seeds = 4,5

; radio settings
[radio]
range = 25
rate = inf

[mobility]
model = rwp
)");
  EXPECT_EQ(c.name, "demo");
  EXPECT_EQ(c.duration, 3600.0);
  EXPECT_EQ(c.nodes, 3);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{4, 5}));
  EXPECT_EQ(c.radio_range, 25.0);
  EXPECT_TRUE(std::isinf(c.phy_rate));
  EXPECT_EQ(c.model, MobilityModel::kRwp);
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, UnknownSectionOrKeyIsAnErrorWithLine) {
  try {
    parse_config("[scenario]\nduration = 60\n[weather]\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_config("[radio]\nrange = 10\nrnage = 10\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("radio.rnage"), std::string::npos);
  }
  EXPECT_THROW(parse_config("duration = 60\n"), ParseError);        // outside a section
  EXPECT_THROW(parse_config("[radio]\nrange 10\n"), ParseError);     // no '='
  EXPECT_THROW(parse_config("[radio]\nrange = ten\n"), ParseError);  // bad value
  EXPECT_THROW(parse_config("[radio\n"), ParseError);
}

TEST(Config, OverridesApplyAfterParsing) {
  auto c = parse_config("[radio]\nrange = 10\n");
  apply_override(c, "radio.range=42");
  apply_override(c, " traffic.ttl = 100 ");
  apply_override(c, "nd.schedule.healthy_local.day1=sleep 0-7, neighborhood 7-24");
  EXPECT_EQ(c.radio_range, 42.0);
  EXPECT_EQ(c.traffic.ttl, 100.0);
  EXPECT_EQ(c.nd.schedules.table(mobility::Role::kHealthyLocal, 1).size(), 2u);
  EXPECT_THROW(apply_override(c, "radio.range"), ConfigError);
  EXPECT_THROW(apply_override(c, "radio.power=3"), ConfigError);
  EXPECT_THROW(apply_override(c, "routing.protocol=spray_and_wait"), ConfigError);
}

// Every key survives a dump and re-parse unchanged.
TEST(Config, ResolvedDumpRoundTrips) {
  ScenarioConfig c;
  apply_override(c, "scenario.duration=7200");
  apply_override(c, "mobility.model=map");
  apply_override(c, "routing.drop_policy=reject_new");
  apply_override(c, "reports.buffer_statistic=median");
  apply_override(c, "scenario.inactive_policy=hidden");
  apply_override(c, "nd.schedule.drt.day1=sleep 0-8, city_roaming+food 8-20, neighborhood 20-24");
  const auto text = resolved_config(c);
  const auto again = parse_config(text, c.base_dir);
  EXPECT_EQ(resolved_config(again), text);
  for (const auto& k : config_keys()) EXPECT_NE(text.find(std::string(k.key()) + " = "), std::string::npos) << k.name;
}

TEST(Config, RelativePathsResolveAgainstConfigDirectory) {
  const auto c = parse_config("[scenario]\nmap = streets.wkt\n", "/data/run");
  EXPECT_EQ(c.resolve(c.map_path), std::filesystem::path("/data/run/streets.wkt"));
  const auto abs = parse_config("[scenario]\nmap = /maps/a.wkt\n", "/data/run");
  EXPECT_EQ(abs.resolve(abs.map_path), std::filesystem::path("/maps/a.wkt"));
}

TEST(Config, ValidateRejectsInconsistentSettings) {
  auto rwp = [] {
    ScenarioConfig c;
    c.model = MobilityModel::kRwp;
    return c;
  };
  EXPECT_NO_THROW(validate(rwp()));

  auto c = rwp();
  c.step_dt = 0.0;
  EXPECT_THROW(validate(c), ConfigError);

  c = rwp();
  c.duration = 10.5;
  EXPECT_THROW(validate(c), ConfigError);  // not a multiple of step_dt

  c = rwp();
  c.nodes = 499;
  EXPECT_THROW(validate(c), ConfigError);  // role counts sum to 500

  c = rwp();
  c.traffic.interval_min = 20.0;
  EXPECT_THROW(validate(c), ConfigError);

  c = rwp();
  c.nd.volunteer_fraction = 1.5;
  EXPECT_THROW(validate(c), ConfigError);

  ScenarioConfig nd;  // nd model without map or POIs
  EXPECT_THROW(validate(nd), ConfigError);

  c = rwp();
  c.duration = 0.0;
  EXPECT_NO_THROW(validate(c));
}
