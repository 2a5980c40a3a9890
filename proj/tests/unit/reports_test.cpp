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

#include <string>
#include <vector>

#include "natdis/core/random.hpp"
#include "natdis/reports/metrics.hpp"

using namespace natdis;
using namespace natdis::reports;

TEST(Density, StaticNodeAveragesToOne) {
  DensityGrid g({0, 0, 100, 100}, 10.0);
  for (int i = 0; i < 100; ++i) {
    g.observe({35.0, 72.0});
    g.end_sample();
  }
  EXPECT_EQ(g.samples(), 100u);
  EXPECT_EQ(g.average(3, 7), 1.0);
  const auto t = g.table();
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0], (std::vector<std::string>{"3", "7", "1"}));
}

TEST(Density, BoundaryGoesToHigherCellAndDimensionsRoundUp) {
  DensityGrid g({0, 0, 95, 41}, 10.0);
  EXPECT_EQ(g.nx(), 10u);
  EXPECT_EQ(g.ny(), 5u);
  EXPECT_EQ(g.cell_of({10.0, 20.0}), std::make_pair(std::size_t{1}, std::size_t{2}));
  EXPECT_EQ(g.cell_of({95.0, 41.0}), std::make_pair(std::size_t{9}, std::size_t{4}));  // far edge stays inside
  g.observe({-3.0, 50.0});
  EXPECT_EQ(g.out_of_bounds(), 1u);
  EXPECT_EQ(g.count(0, 4), 1u);
}

TEST(DelayCdf, TwoCreatedOneDeliveredAtHundredSeconds) {
  const std::vector<double> delays = {100.0};
  const auto t = delay_cdf_table(2, delays, 600.0, 60.0);
  ASSERT_EQ(t.rows.size(), 11u);
  EXPECT_EQ(t.rows[1], (std::vector<std::string>{"60", "0"}));
  EXPECT_EQ(t.rows[2], (std::vector<std::string>{"120", "0.5"}));
  EXPECT_EQ(t.rows.back(), (std::vector<std::string>{"600", "0.5"}));
}

TEST(DelayCdf, NothingCreatedIsEmpty) {
  EXPECT_TRUE(delay_cdf_table(0, {}, 600.0, 60.0).rows.empty());
}

// Random delays: monotone, the last bucket sits at the TTL and equals the
// delivered share.
TEST(DelayCdf, MonotoneAndEndsAtDeliveredShare) {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t created = 1 + rng.below(200);
    std::vector<double> delays;
    for (std::uint64_t i = 0; i < created; ++i)
      if (rng.uniform(0.0, 1.0) < 0.6) delays.push_back(rng.uniform(0.0, 21600.0));
    const auto t = delay_cdf_table(created, delays, 21600.0, 60.0);
    double prev = 0.0;
    for (const auto& row : t.rows) {
      const double v = std::stod(row[1]);
      ASSERT_GE(v, prev);
      prev = v;
    }
    EXPECT_EQ(t.rows.back()[0], "21600");
    EXPECT_NEAR(prev, static_cast<double>(delays.size()) / static_cast<double>(created), 1e-12);
  }
}

TEST(DeliveryMatrix, FixedShapeAndRates) {
  using mobility::Role;
  std::vector<MessageOutcome> o = {{Role::kDrt, Role::kUsrt, true},
                                   {Role::kDrt, Role::kUsrt, false},
                                   {Role::kDrt, Role::kUsrt, true},
                                   {Role::kUnOfficial, Role::kHealthyLocal, false}};
  const auto t = delivery_matrix_table(o);
  ASSERT_EQ(t.rows.size(), 49u);
  int nonzero = 0;
  for (const auto& row : t.rows) {
    const double c = std::stod(row[2]), d = std::stod(row[3]);
    EXPECT_NEAR(std::stod(row[4]), c > 0 ? d / c : 0.0, 1e-12);
    nonzero += c > 0;
    if (row[0] == mobility::to_string(Role::kDrt) && row[1] == mobility::to_string(Role::kUsrt)) {
      EXPECT_EQ(c, 3.0);
      EXPECT_EQ(d, 2.0);
    }
  }
  EXPECT_EQ(nonzero, 2);
}

TEST(Encounters, SumIsEvenAndUniqueBounded) {
  Rng rng(8);
  dtn::EncounterLog log(12);
  for (int i = 0; i < 500; ++i) {
    const auto a = static_cast<dtn::NodeId>(rng.below(12));
    auto b = static_cast<dtn::NodeId>(rng.below(11));
    if (b >= a) ++b;
    log.record({std::min(a, b), std::max(a, b)});
  }
  EXPECT_EQ(log.sum(), 1000u);
  for (dtn::NodeId n = 0; n < 12; ++n) {
    EXPECT_LE(log.unique(n), log.total(n));
    EXPECT_LE(log.unique(n), 11u);
  }
}

TEST(Encounters, OscillatingPairCountsEachLinkUp) {
  dtn::EncounterLog log(2);
  for (int i = 0; i < 3; ++i) log.record({0, 1});
  EXPECT_EQ(log.total(0), 3u);
  EXPECT_EQ(log.unique(0), 1u);
  EXPECT_EQ(log.total(1), 3u);
}

TEST(Buffer, StatisticsStayInUnitInterval) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> f(1 + rng.below(30));
    for (auto& v : f) v = rng.uniform(0.0, 1.0);
    const double mean = mean_of(f), median = median_of(f);
    EXPECT_GE(mean, 0.0);
    EXPECT_LE(mean, 1.0);
    EXPECT_GE(median, 0.0);
    EXPECT_LE(median, 1.0);
  }
  EXPECT_EQ(mean_of({}), 0.0);
  EXPECT_EQ(median_of({1.0, 0.0, 0.5, 0.25}), 0.375);
}

TEST(Csv, RoundTripsRandomTables) {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    Table t{{"key", "a", "b"}, {}};
    const auto rows = rng.below(40);
    for (std::uint64_t r = 0; r < rows; ++r)
      t.rows.push_back({std::to_string(r), format_number(rng.uniform(-1e6, 1e6)), format_number(rng.uniform(0.0, 1e-6))});
    const auto back = parse_csv(to_csv(t));
    ASSERT_EQ(back, t);
    for (std::size_t r = 0; r < t.rows.size(); ++r) EXPECT_EQ(format_number(std::stod(back.rows[r][1])), t.rows[r][1]);
  }
  EXPECT_THROW(parse_csv("a,b\n1\n"), ParseError);
}

TEST(Aggregate, MissingKeyCountsAsZero) {
  const Table a{{"x", "y", "v"}, {{"0", "0", "2"}, {"1", "0", "4"}}};
  const Table b{{"x", "y", "v"}, {{"0", "0", "4"}}};
  const auto out = aggregate({a, b}, 2);
  EXPECT_EQ(out.header, (std::vector<std::string>{"x", "y", "v_mean", "v_std"}));
  ASSERT_EQ(out.rows.size(), 2u);
  EXPECT_EQ(out.rows[0][2], "3");
  EXPECT_NEAR(std::stod(out.rows[0][3]), std::sqrt(2.0), 1e-12);
  EXPECT_EQ(out.rows[1][2], "2");
  EXPECT_NEAR(std::stod(out.rows[1][3]), std::sqrt(8.0), 1e-12);
}

TEST(Aggregate, RejectsMismatchedHeadersAndText) {
  const Table a{{"k", "v"}, {{"x", "1"}}};
  const Table b{{"k", "w"}, {{"x", "1"}}};
  EXPECT_THROW(aggregate({a, b}, 1), ValidationError);
  const Table c{{"k", "v"}, {{"x", "one"}}};
  EXPECT_THROW(aggregate({a, c}, 1), ValidationError);
}
