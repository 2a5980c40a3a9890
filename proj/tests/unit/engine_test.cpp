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

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "natdis/engine/run.hpp"
#include "support/nd_fixture.hpp"

using namespace natdis;
using namespace natdis::engine;
using mobility::Presence;
using mobility::Role;

namespace {

mobility::RoleCounts counts(int healthy, int injured, int drt, int usrt, int scientist, int un, int gov) {
  return {healthy, injured, drt, usrt, scientist, un, gov};
}

/// In-memory scenario on the 5x5 test grid.
Scenario grid_scenario(MobilityModel model, mobility::RoleCounts roles, double duration) {
  Scenario s;
  auto& c = s.config;
  c.model = model;
  c.duration = duration;
  c.role_counts = roles;
  c.nodes = 0;
  for (int n : roles) c.nodes += n;
  c.width = 400.0;
  c.height = 400.0;
  c.map_path = "grid.wkt";  // satisfies validation; the graph is set directly
  c.poi_path = "grid.txt";
  validate(c);
  s.graph = natdis::testing::grid(5, 100.0);
  s.pois = natdis::testing::grid_pois(*s.graph);
  s.bounds = {0, 0, 400, 400};
  return s;
}

std::map<std::string, double> summary_of(const reports::ReportSet& r) {
  std::map<std::string, double> m;
  for (const auto& row : r.summary.rows) m[row[0]] = std::stod(row[1]);
  return m;
}

}  // namespace

TEST(World, ZeroNodesOnlyAdvancesClock) {
  auto sc = grid_scenario(MobilityModel::kRwp, counts(0, 0, 0, 0, 0, 0, 0), 10.0);
  World w(sc, 1);
  w.step();
  EXPECT_EQ(w.clock(), 1.0);
  EXPECT_EQ(w.steps_done(), 1u);
  EXPECT_TRUE(w.nodes().empty());
  EXPECT_TRUE(w.network().links().empty());
  EXPECT_TRUE(w.network().messages().empty());
  w.run();
  EXPECT_EQ(w.clock(), 10.0);
  const auto r = w.finish();
  EXPECT_TRUE(r.encounters.rows.empty());
  EXPECT_TRUE(r.delay_cdf.rows.empty());
}

TEST(World, ZeroDurationGivesHeaderOnlySeries) {
  auto sc = grid_scenario(MobilityModel::kNd, counts(3, 1, 1, 0, 0, 1, 1), 0.0);
  World w(sc, 1);
  w.run();
  EXPECT_EQ(w.steps_done(), 0u);
  const auto r = w.finish();
  EXPECT_EQ(r.density.header, (std::vector<std::string>{"x_cell", "y_cell", "avg_count"}));
  EXPECT_TRUE(r.density.rows.empty());
  EXPECT_TRUE(r.delay_cdf.rows.empty());
  EXPECT_TRUE(r.buffer.rows.empty());
  EXPECT_EQ(r.encounters.rows.size(), 7u);
  EXPECT_EQ(r.delivery_matrix.rows.size(), 49u);
  for (const auto& [k, v] : summary_of(r)) {
    if (k == "nodes") {
      EXPECT_EQ(v, 7.0);
    } else {
      EXPECT_EQ(v, 0.0) << k;
    }
  }
}

// UN officials arrive at 05:00 exactly, which is a step boundary.
TEST(World, NodeArrivingAtClockActivatesThatStep) {
  auto sc = grid_scenario(MobilityModel::kNd, counts(0, 0, 0, 0, 0, 1, 0), 6 * 3600.0);
  sc.config.traffic_enabled = false;
  World w(sc, 3);
  ASSERT_EQ(w.plans()[0].arrival_time, 5 * 3600.0);
  const auto airport = sc.graph->point_at(sc.pois.require(geo::PoiKind::kAirportRdc).location);
  while (w.clock() < 5 * 3600.0) {
    w.step();
    ASSERT_EQ(w.nodes()[0].presence, Presence::kNotArrived) << "t=" << w.clock();
  }
  w.step();  // starts at t0 = 05:00
  EXPECT_EQ(w.nodes()[0].presence, Presence::kActive);
  EXPECT_EQ(w.nodes()[0].position.x, airport.x);
  EXPECT_EQ(w.nodes()[0].position.y, airport.y);
}

// Pure kinematics: two steps of dt equal one step of 2 dt while no leg ends.
TEST(World, TwoHalfStepsMatchOneFullStep) {
  for (auto model : {MobilityModel::kRwp, MobilityModel::kMap}) {
    auto fine = grid_scenario(model, counts(20, 0, 0, 0, 0, 0, 0), 2.0);
    fine.config.traffic_enabled = false;
    auto coarse = fine;
    coarse.config.step_dt = 2.0;
    World a(fine, 11), b(coarse, 11);
    a.step();
    a.step();
    b.step();
    std::size_t compared = 0;
    for (std::size_t i = 0; i < a.nodes().size(); ++i) {
      if (!a.nodes()[i].leg || !b.nodes()[i].leg) continue;  // a waypoint was reached
      EXPECT_NEAR(a.nodes()[i].position.x, b.nodes()[i].position.x, 1e-9);
      EXPECT_NEAR(a.nodes()[i].position.y, b.nodes()[i].position.y, 1e-9);
      ++compared;
    }
    EXPECT_GT(compared, 15u);
  }
}

TEST(World, SameSeedSameReportsDifferentSeedDifferentEncounters) {
  auto sc = grid_scenario(MobilityModel::kNd, counts(12, 3, 3, 2, 1, 1, 1), 4 * 3600.0);
  auto csv = [&](std::uint64_t seed) {
    const auto r = run(sc, seed);
    std::string all;
    for (std::size_t i = 0; i < reports::ReportSet::kFileNames.size(); ++i) all += reports::to_csv(r.table(i));
    return std::make_pair(all, summary_of(r)["total_encounters"]);
  };
  const auto a = csv(5), b = csv(5), c = csv(6);
  EXPECT_EQ(a.first, b.first);
  EXPECT_NE(a.second, c.second);
}

// Movement draws from its own stream, so switching traffic off leaves every
// trajectory unchanged.
TEST(World, TrafficDoesNotPerturbMovement) {
  auto on = grid_scenario(MobilityModel::kNd, counts(10, 2, 2, 1, 1, 1, 1), 3 * 3600.0);
  auto off = on;
  off.config.traffic_enabled = false;
  World a(on, 9), b(off, 9);
  a.run();
  b.run();
  EXPECT_GT(a.network().messages().size(), 0u);
  for (std::size_t i = 0; i < a.nodes().size(); ++i) {
    EXPECT_EQ(a.nodes()[i].position.x, b.nodes()[i].position.x);
    EXPECT_EQ(a.nodes()[i].position.y, b.nodes()[i].position.y);
  }
}

// Every node is always exactly one of active, departed or not yet arrived;
// parked nodes sit at the airport and hold no link.
TEST(World, ActivationAccountingAndParkedRadioOff) {
  auto sc = grid_scenario(MobilityModel::kNd, counts(4, 2, 4, 4, 3, 1, 1), 2 * 86400.0);
  sc.config.step_dt = 5.0;
  sc.config.nd.arrival_first_day = 0;
  sc.config.nd.arrival_last_day = 0;
  sc.config.nd.usrt_departure_day = 0;  // USRTs leave during day 0
  sc.config.nd.volunteer_day = 1;
  sc.config.nd.volunteer_fraction = 0.0;
  World w(sc, 21);
  const auto airport = sc.graph->point_at(sc.pois.require(geo::PoiKind::kAirportRdc).location);
  std::set<Presence> seen;
  while (!w.done()) {
    w.step();
    const auto active = w.count(Presence::kActive), departed = w.count(Presence::kDeparted),
               waiting = w.count(Presence::kNotArrived);
    ASSERT_EQ(active + departed + waiting, w.nodes().size());
    for (const auto& s : w.nodes()) {
      seen.insert(s.presence);
      if (s.presence == Presence::kActive) continue;
      ASSERT_EQ(s.position.x, airport.x);
      ASSERT_EQ(s.position.y, airport.y);
    }
    for (const auto& [pair, link] : w.network().links()) {
      ASSERT_EQ(w.nodes()[pair.first].presence, Presence::kActive);
      ASSERT_EQ(w.nodes()[pair.second].presence, Presence::kActive);
    }
  }
  EXPECT_EQ(seen.size(), 3u);
  EXPECT_EQ(w.count(Presence::kDeparted), 4u + 3u);  // USRTs and scientists
}

// Traffic made in a step is never transferred in that step.
TEST(World, NoDeliveryAtCreationTime) {
  auto sc = grid_scenario(MobilityModel::kNd, counts(10, 2, 4, 2, 1, 1, 2), 86400.0);
  World w(sc, 4);
  w.run();
  ASSERT_GT(w.network().deliveries().size(), 0u);
  for (const auto& d : w.network().deliveries()) {
    const auto& m = w.network().message(d.message);
    EXPECT_GT(d.time, m.created_at);
    EXPECT_LE(d.time - m.created_at, m.ttl);
    EXPECT_GE(d.hops, 1);
  }
}

TEST(World, DensityAccountingFollowsInactivePolicy) {
  for (auto policy : {InactivePolicy::kParkedVisible, InactivePolicy::kHidden}) {
    auto sc = grid_scenario(MobilityModel::kNd, counts(3, 1, 3, 2, 1, 1, 1), 86400.0 + 7200.0);
    sc.config.inactive_policy = policy;
    sc.config.density_interval = 600.0;
    sc.config.traffic_enabled = false;
    World w(sc, 8);
    std::uint64_t expected = 0;
    while (!w.done()) {
      w.step();
      if (std::fmod(w.clock(), 600.0) != 0.0) continue;
      expected += policy == InactivePolicy::kHidden ? w.count(Presence::kActive) : w.nodes().size();
    }
    ASSERT_TRUE(w.density());
    EXPECT_EQ(w.density()->samples(), static_cast<std::uint64_t>((86400 + 7200) / 600));
    EXPECT_EQ(w.density()->observations(), expected);
    if (policy == InactivePolicy::kHidden) EXPECT_LT(expected, w.nodes().size() * w.density()->samples());
  }
}

// Cross-report consistency on one run.
TEST(Reports, CrossReportConsistency) {
  auto sc = grid_scenario(MobilityModel::kNd, counts(12, 3, 3, 2, 1, 1, 2), 86400.0);
  World w(sc, 12);
  w.run();
  const auto r = w.finish();
  const auto s = summary_of(r);

  double created = 0, delivered = 0;
  for (const auto& row : r.delivery_matrix.rows) {
    const double c = std::stod(row[2]), d = std::stod(row[3]);
    EXPECT_LE(d, c);
    EXPECT_NEAR(std::stod(row[4]), c > 0 ? d / c : 0.0, 1e-12);
    created += c;
    delivered += d;
  }
  EXPECT_EQ(created, s.at("messages_created"));
  EXPECT_EQ(delivered, s.at("messages_delivered"));
  ASSERT_FALSE(r.delay_cdf.rows.empty());
  EXPECT_NEAR(std::stod(r.delay_cdf.rows.back()[1]), delivered / created, 1e-12);

  double prev = 0;
  for (const auto& row : r.delay_cdf.rows) {
    const double v = std::stod(row[1]);
    EXPECT_GE(v, prev);
    prev = v;
  }

  std::uint64_t total = 0;
  for (const auto& row : r.encounters.rows) {
    const auto t = std::stoull(row[2]), u = std::stoull(row[3]);
    EXPECT_LE(u, t);
    total += t;
  }
  EXPECT_EQ(total % 2, 0u);
  // Summed over nodes, so each link-up counts twice.
  EXPECT_EQ(static_cast<double>(total), s.at("total_encounters"));
  EXPECT_DOUBLE_EQ(static_cast<double>(total) / s.at("nodes"), s.at("mean_encounters_per_node"));

  for (const auto& row : r.buffer.rows) {
    const double f = std::stod(row[1]);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
}

TEST(Batch, SingleSeedAggregateEqualsRunWithZeroStd) {
  auto sc = grid_scenario(MobilityModel::kNd, counts(6, 2, 2, 1, 1, 1, 1), 3 * 3600.0);
  const auto b = run_batch(sc, {4});
  ASSERT_EQ(b.runs.size(), 1u);
  const auto& run = b.runs[0].summary;
  const auto& agg = b.aggregate.summary;
  EXPECT_EQ(agg.header, (std::vector<std::string>{"metric", "value_mean", "value_std"}));
  ASSERT_EQ(agg.rows.size(), run.rows.size());
  for (std::size_t i = 0; i < run.rows.size(); ++i) {
    EXPECT_EQ(agg.rows[i][0], run.rows[i][0]);
    EXPECT_DOUBLE_EQ(std::stod(agg.rows[i][1]), std::stod(run.rows[i][1]));
    EXPECT_EQ(std::stod(agg.rows[i][2]), 0.0);
  }
}

// Aggregate means and sample deviations recomputed from the per-seed CSVs.
TEST(Batch, AggregateMatchesRecomputation) {
  auto sc = grid_scenario(MobilityModel::kNd, counts(6, 2, 2, 1, 1, 1, 1), 3 * 3600.0);
  const auto b = run_batch(sc, {1, 2, 3});
  for (std::size_t f = 0; f < reports::ReportSet::kFileNames.size(); ++f) {
    const auto keys = reports::ReportSet::key_columns(f);
    std::map<std::vector<std::string>, std::vector<std::vector<double>>> per_key;  // key -> per seed values
    for (std::size_t s = 0; s < b.runs.size(); ++s) {
      const auto t = reports::parse_csv(reports::to_csv(b.runs[s].table(f)));
      for (const auto& row : t.rows) {
        const std::vector<std::string> key(row.begin(), row.begin() + static_cast<long>(keys));
        auto& v = per_key[key];
        v.resize(b.runs.size(), std::vector<double>(row.size() - keys, 0.0));
        for (std::size_t c = keys; c < row.size(); ++c) v[s][c - keys] = std::stod(row[c]);
      }
    }
    const auto& agg = b.aggregate.table(f);
    ASSERT_EQ(agg.rows.size(), per_key.size()) << reports::ReportSet::kFileNames[f];
    for (const auto& row : agg.rows) {
      const std::vector<std::string> key(row.begin(), row.begin() + static_cast<long>(keys));
      ASSERT_TRUE(per_key.contains(key));
      const auto& seeds = per_key[key];
      for (std::size_t c = 0; c < seeds[0].size(); ++c) {
        double mean = 0;
        for (const auto& v : seeds) mean += v[c];
        mean /= static_cast<double>(seeds.size());
        double ss = 0;
        for (const auto& v : seeds) ss += (v[c] - mean) * (v[c] - mean);
        const double sd = std::sqrt(ss / static_cast<double>(seeds.size() - 1));
        const double got_mean = std::stod(row[keys + 2 * c]), got_sd = std::stod(row[keys + 2 * c + 1]);
        EXPECT_NEAR(got_mean, mean, 1e-9 * std::max(1.0, std::abs(mean)));
        EXPECT_NEAR(got_sd, sd, 1e-9 * std::max(1.0, sd));
      }
    }
  }
}

TEST(Batch, FailingSeedIsNamed) {
  auto sc = grid_scenario(MobilityModel::kNd, counts(2, 0, 0, 0, 0, 0, 0), 60.0);
  sc.pois = geo::PoiSet{};  // ND model without POIs fails at spawn
  try {
    run_batch(sc, {7, 8});
    FAIL() << "expected failure";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("seed 7"), std::string::npos) << e.what();
  }
  EXPECT_THROW(run_batch(sc, {}), ConfigError);
}
