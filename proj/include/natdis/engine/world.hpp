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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "natdis/core/random.hpp"
#include "natdis/dtn/contacts.hpp"
#include "natdis/dtn/network.hpp"
#include "natdis/dtn/traffic.hpp"
#include "natdis/engine/scenario.hpp"
#include "natdis/mobility/natural_disaster.hpp"
#include "natdis/mobility/random_waypoint.hpp"
#include "natdis/reports/metrics.hpp"

namespace natdis::engine {

/// Delay below which a delivery counts as "within three hours" in summary.csv.
inline constexpr double kThreeHours = 3.0 * 3600.0;

/// State of one seeded run. Each step runs, in order: node activation,
/// mobility, contact detection, link-up exchange and transfers, traffic,
/// TTL expiry, report sampling.
class World {
 public:
  World(const Scenario& scenario, std::uint64_t seed)
      : sc_(scenario),
        cfg_(scenario.config),
        mobility_rng_(seed, Stream::kMobility),
        traffic_rng_(seed, Stream::kTraffic),
        misc_rng_(seed, Stream::kMisc),
        net_(static_cast<std::size_t>(cfg_.nodes), {cfg_.buffer_size, cfg_.phy_rate, cfg_.drop_policy}),
        contacts_(cfg_.radio_range),
        encounters_(static_cast<std::size_t>(cfg_.nodes)) {
    if (cfg_.model != MobilityModel::kRwp && !sc_.graph) throw ConfigError("map model needs a street map");
    spawn();
    if (cfg_.traffic_enabled) traffic_.emplace(cfg_.traffic, traffic_rng_);
    if (cfg_.density_enabled) density_ = reports::DensityGrid(sc_.bounds, cfg_.density_cell);
    next_density_ = cfg_.density_interval;
    next_buffer_ = cfg_.buffer_interval;
    total_steps_ = static_cast<std::uint64_t>(std::llround(cfg_.duration / cfg_.step_dt));
  }

  World(const World&) = delete;
  World& operator=(const World&) = delete;

  double clock() const { return clock_; }
  std::uint64_t steps_done() const { return steps_; }
  std::uint64_t total_steps() const { return total_steps_; }
  bool done() const { return steps_ >= total_steps_; }

  const std::vector<mobility::MobilityState>& nodes() const { return nodes_; }
  const std::vector<mobility::ArrivalPlan>& plans() const { return plans_; }
  const std::vector<mobility::Role>& roles() const { return roles_; }
  const dtn::DtnNetwork& network() const { return net_; }
  const dtn::EncounterLog& encounters() const { return encounters_; }
  const std::optional<reports::DensityGrid>& density() const { return density_; }
  const std::vector<reports::BufferSample>& buffer_samples() const { return buffer_samples_; }
  const mobility::NdModel* nd_model() const { return nd_ ? &*nd_ : nullptr; }
  mobility::NdModel* nd_model() { return nd_ ? &*nd_ : nullptr; }

  std::size_t count(mobility::Presence p) const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [p](const auto& s) { return s.presence == p; }));
  }

  void step() {
    const double dt = cfg_.step_dt;
    const double t0 = clock_;
    const double t1 = static_cast<double>(steps_ + 1) * dt;
    activate(t0);
    move(t0, dt);
    detect(t1);
    net_.step(dt, t1);
    generate(t1);
    net_.expire(t1);
    sample(t1);
    clock_ = t1;
    ++steps_;
  }

  void run() {
    while (!done()) step();
  }

  reports::ReportSet finish() const {
    reports::ReportSet r;
    r.density = density_ ? density_->table() : reports::Table{{"x_cell", "y_cell", "avg_count"}, {}};
    r.encounters = reports::encounter_table(encounters_, roles_);
    std::vector<double> delays;
    for (const auto& d : net_.deliveries()) delays.push_back(d.time - net_.message(d.message).created_at);
    const auto created = net_.counters().created;
    r.delay_cdf = reports::delay_cdf_table(created, delays, cfg_.traffic.ttl, cfg_.cdf_bucket);
    r.buffer = reports::buffer_table(buffer_samples_);
    std::vector<reports::MessageOutcome> outcomes;
    for (const auto& m : net_.messages())
      outcomes.push_back({roles_[m.source], roles_[m.destination], net_.delivered_at(m.id).has_value()});
    r.delivery_matrix = reports::delivery_matrix_table(outcomes);

    const double delivered = static_cast<double>(net_.counters().delivered);
    double hops = 0.0;
    std::size_t quick = 0;
    for (const auto& d : net_.deliveries()) hops += d.hops;
    for (double d : delays) quick += d <= kThreeHours;
    std::vector<double> fractions;
    for (const auto& s : buffer_samples_) fractions.push_back(s.fraction);
    const double n = static_cast<double>(cfg_.nodes);
    const std::vector<std::pair<std::string, double>> metrics = {
        {"duration_s", clock_},
        {"nodes", n},
        {"messages_created", static_cast<double>(created)},
        {"messages_delivered", delivered},
        {"delivery_rate", created ? delivered / static_cast<double>(created) : 0.0},
        {"mean_delay_s", reports::mean_of(delays)},
        {"median_delay_s", reports::median_of(delays)},
        {"delivered_within_3h", delays.empty() ? 0.0 : static_cast<double>(quick) / delivered},
        {"mean_hops", delays.empty() ? 0.0 : hops / delivered},
        {"total_encounters", static_cast<double>(encounters_.sum())},
        {"mean_encounters_per_node", n > 0 ? static_cast<double>(encounters_.sum()) / n : 0.0},
        {"mean_buffer_fraction", reports::mean_of(fractions)},
        {"relayed_copies", static_cast<double>(net_.counters().relayed)},
        {"aborted_transfers", static_cast<double>(net_.counters().aborted)},
        {"evicted_copies", static_cast<double>(net_.counters().evicted)},
        {"expired_copies", static_cast<double>(net_.counters().expired)},
        {"rejected_copies", static_cast<double>(net_.counters().rejected)},
        {"density_samples", density_ ? static_cast<double>(density_->samples()) : 0.0},
        {"density_out_of_bounds", density_ ? static_cast<double>(density_->out_of_bounds()) : 0.0},
    };
    r.summary = reports::summary_table(metrics);
    return r;
  }

 private:
  const geo::MapGraph* graph() const { return sc_.graph ? &*sc_.graph : nullptr; }

  /// Initial placement and arrival plans draw from the misc stream, so
  /// movement draws stay independent of how nodes were set up.
  void spawn() {
    if (cfg_.model == MobilityModel::kNd) {
      nd_.emplace(*sc_.graph, sc_.pois, cfg_.nd, cfg_.speeds);
      auto spawned = mobility::spawn_roles(cfg_.role_counts, cfg_.nd, *sc_.graph, sc_.pois, misc_rng_);
      const auto parking = nd_->airport().location;
      for (auto& s : spawned) {
        // Everyone waits parked until the first step activates them.
        s.state.graph_position = parking;
        s.state.position = sc_.graph->point_at(parking);
        roles_.push_back(s.state.role);
        plans_.push_back(s.plan);
        nodes_.push_back(std::move(s.state));
      }
      return;
    }
    for (mobility::Role r : mobility::kAllRoles) {
      for (int k = 0; k < cfg_.role_counts[mobility::index(r)]; ++k) {
        mobility::MobilityState s;
        s.id = static_cast<mobility::NodeId>(nodes_.size());
        s.role = r;
        if (cfg_.model == MobilityModel::kRwp) {
          const double x = misc_rng_.uniform(sc_.bounds.min_x, sc_.bounds.max_x);
          const double y = misc_rng_.uniform(sc_.bounds.min_y, sc_.bounds.max_y);
          s.position = {x, y};
        } else {
          s.graph_position = sc_.graph->sample_uniform(misc_rng_);
          s.position = sc_.graph->point_at(*s.graph_position);
        }
        roles_.push_back(r);
        plans_.push_back({s.id, 0.0, std::nullopt});
        nodes_.push_back(std::move(s));
      }
    }
  }

  void activate(double t0) {
    if (!nd_) return;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      auto& s = nodes_[i];
      const auto& p = plans_[i];
      if (s.presence == mobility::Presence::kNotArrived && p.arrival_time <= t0) nd_->activate(s, t0);
      if (s.presence == mobility::Presence::kActive && p.departure_time && *p.departure_time <= t0)
        nd_->deactivate(s, t0);
    }
  }

  void move(double t0, double dt) {
    for (auto& s : nodes_) {
      if (s.presence != mobility::Presence::kActive) continue;
      switch (cfg_.model) {
        case MobilityModel::kNd:
          nd_->update(s, t0, mobility_rng_);
          break;
        case MobilityModel::kRwp:
        case MobilityModel::kMap:
          plan_waypoint(s, t0);
          break;
      }
      mobility::advance(s, dt, t0, graph());
    }
  }

  void plan_waypoint(mobility::MobilityState& s, double t0) {
    if (s.leg || s.pause_until > t0) return;
    if (s.arrived) {
      s.arrived = false;
      s.pause_until = t0 + s.pause_after_leg;
      if (s.pause_until > t0) return;
    }
    const auto speed = cfg_.speeds.baseline(s.role);
    if (cfg_.model == MobilityModel::kRwp) {
      const auto leg = mobility::rwp_next_leg(mobility_rng_, sc_.bounds, speed, cfg_.pause);
      s.leg = mobility::Leg::straight(s.position, leg.waypoint, leg.speed);
      s.pause_after_leg = leg.pause;
      return;
    }
    auto leg = mobility::maprwp_next_leg(mobility_rng_, *sc_.graph, *s.graph_position, speed, cfg_.pause);
    s.pause_after_leg = leg.pause;
    if (leg.path.points.size() < 2) {
      s.arrived = true;
      return;
    }
    s.leg = mobility::Leg::along_path(leg.path, leg.speed);
  }

  void detect(double t1) {
    positions_.clear();
    for (const auto& s : nodes_)
      if (s.presence == mobility::Presence::kActive) positions_.push_back({s.id, s.position});
    const auto changes = contacts_.update(positions_);
    for (const auto& p : changes.down) net_.link_down(p.first, p.second);
    for (const auto& p : changes.up) {
      encounters_.record(p);
      net_.link_up(p.first, p.second, t1);
    }
  }

  void generate(double t1) {
    if (!traffic_) return;
    active_.clear();
    for (const auto& s : nodes_)
      if (s.presence == mobility::Presence::kActive) active_.push_back(s.id);
    for (const auto& m : traffic_->due(t1, active_, traffic_rng_))
      net_.create(m.source, m.destination, m.size, t1, cfg_.traffic.ttl);
  }

  void sample(double t1) {
    constexpr double kEps = 1e-9;
    if (density_ && t1 + kEps >= next_density_) {
      for (const auto& s : nodes_) {
        const bool visible = s.presence == mobility::Presence::kActive ||
                             cfg_.inactive_policy == InactivePolicy::kParkedVisible;
        if (visible) density_->observe(s.position);
      }
      density_->end_sample();
      while (next_density_ <= t1 + kEps) next_density_ += cfg_.density_interval;
    }
    if (cfg_.buffer_enabled && t1 + kEps >= next_buffer_) {
      std::vector<double> f;
      for (const auto& s : nodes_)
        if (s.presence == mobility::Presence::kActive) f.push_back(net_.buffer(s.id).fill_fraction());
      const double v = cfg_.buffer_statistic == BufferStatistic::kMean ? reports::mean_of(f) : reports::median_of(f);
      buffer_samples_.push_back({t1, v});
      while (next_buffer_ <= t1 + kEps) next_buffer_ += cfg_.buffer_interval;
    }
  }

  const Scenario& sc_;
  const ScenarioConfig& cfg_;
  Rng mobility_rng_;
  Rng traffic_rng_;
  Rng misc_rng_;
  std::optional<mobility::NdModel> nd_;
  std::vector<mobility::MobilityState> nodes_;
  std::vector<mobility::ArrivalPlan> plans_;
  std::vector<mobility::Role> roles_;
  dtn::DtnNetwork net_;
  dtn::ContactDetector contacts_;
  dtn::EncounterLog encounters_;
  std::optional<dtn::TrafficGenerator> traffic_;
  std::optional<reports::DensityGrid> density_;
  std::vector<reports::BufferSample> buffer_samples_;
  std::vector<dtn::NodePosition> positions_;
  std::vector<dtn::NodeId> active_;
  double next_density_ = 0.0;
  double next_buffer_ = 0.0;
  double clock_ = 0.0;
  std::uint64_t steps_ = 0;
  std::uint64_t total_steps_ = 0;
};

}  // namespace natdis::engine
