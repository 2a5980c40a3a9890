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
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "natdis/core/error.hpp"
#include "natdis/core/random.hpp"
#include "natdis/geo/poi.hpp"
#include "natdis/geo/shortest_path.hpp"
#include "natdis/mobility/random_waypoint.hpp"
#include "natdis/mobility/schedule.hpp"
#include "natdis/mobility/state.hpp"

namespace natdis::mobility {

inline constexpr double kDay = 86400.0;
inline constexpr double kHour = 3600.0;

using RoleCounts = std::array<int, kRoleCount>;

struct RoleSpeeds {
  SpeedRange walking{0.5, 1.5};
  SpeedRange injured{0.3, 0.8};
  SpeedRange usrt_search{0.3, 0.8};

  /// Speed for ordinary travel in the ND model.
  SpeedRange travel(Role r) const { return r == Role::kInjuredLocal ? injured : walking; }

  /// Speed used by the RWP and Map baselines, where slow roles stay slow.
  SpeedRange baseline(Role r) const {
    if (r == Role::kInjuredLocal) return injured;
    if (r == Role::kUsrt) return usrt_search;
    return walking;
  }

  double max_for(Role r) const {
    const SpeedRange s = travel(r);
    return r == Role::kUsrt ? std::max(s.max, usrt_search.max) : s.max;
  }
};

struct NdParams {
  double neighborhood_radius = 200.0;
  double immobile_injured_fraction = 0.2;
  double volunteer_fraction = 0.5;
  int volunteer_day = 3;
  double jitter_hours = 2.0;
  double prepositioned_fraction = 0.2;
  double prepositioned_hour = 4.0;
  int arrival_first_day = 1;
  int arrival_last_day = 3;
  double daylight_start_hour = 6.0;
  double daylight_end_hour = 18.0;
  double un_arrival_hour = 5.0;
  int usrt_departure_day = 6;
  double rdc_dwell = 3600.0;
  double osocc_briefing = 3600.0;
  double food_visit_hours = 1.0;
  PauseRange roam_pause{0.0, 120.0};
  PauseRange recon_pause{600.0, 1800.0};
  double hospital_retry = 600.0;
  ScheduleBook schedules = ScheduleBook::defaults();
};

struct HospitalChoice {
  std::size_t hospital = 0;  // index into the hospital list
  bool keep_seeking = false;
};

/// Nearest-by-path hospital with a free bed. When all are full, the nearest
/// one is returned with `keep_seeking` set. Hospitals without a capacity
/// never fill up. Ties go to the lower index.
inline HospitalChoice injured_hospital_target(const geo::MapGraph& g, geo::GraphPosition from,
                                              std::span<const geo::Poi> hospitals, std::span<const int> occupancy) {
  if (hospitals.empty()) throw ValidationError("no hospital POIs");
  std::vector<geo::GraphPosition> targets;
  for (const auto& h : hospitals) targets.push_back(h.location);
  const auto dist = geo::path_distances(g, from, targets);
  std::optional<std::size_t> best_free;
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < hospitals.size(); ++i) {
    if (dist[i] < dist[nearest]) nearest = i;
    const bool has_room = !hospitals[i].capacity || occupancy[i] < *hospitals[i].capacity;
    if (has_room && (!best_free || dist[i] < dist[*best_free])) best_free = i;
  }
  if (best_free) return {*best_free, false};
  return {nearest, true};
}

/// Destination and follow-up behavior for an activity.
struct Destination {
  geo::GraphPosition target;
  Behavior behavior = Behavior::kDwell;
  std::optional<std::size_t> poi;  // index into the POI set
};

/// Read-only scenario inputs plus the shared hospital occupancy of one run.
class NdModel {
 public:
  NdModel(const geo::MapGraph& graph, const geo::PoiSet& pois, const NdParams& params, const RoleSpeeds& speeds)
      : graph_(graph), pois_(pois), params_(params), speeds_(speeds) {
    for (std::size_t i : pois.of(geo::PoiKind::kHospital)) hospitals_.push_back(pois[i]);
    occupancy_.assign(hospitals_.size(), 0);
    for (geo::PoiKind k : geo::kRequiredNdKinds) pois.require(k);
  }

  const geo::MapGraph& graph() const { return graph_; }
  const geo::PoiSet& pois() const { return pois_; }
  const NdParams& params() const { return params_; }
  std::span<const geo::Poi> hospitals() const { return hospitals_; }
  std::span<const int> occupancy() const { return occupancy_; }
  void set_occupancy(std::size_t hospital, int value) { occupancy_.at(hospital) = value; }
  void set_record_visits(bool on) { record_visits_ = on; }

  /// Street sweep shared by all USRT nodes of the run.
  SearchCursor& search_cursor() { return search_cursor_; }
  const SearchCursor& search_cursor() const { return search_cursor_; }

  const geo::Poi& airport() const { return pois_.require(geo::PoiKind::kAirportRdc); }

  /// Where responders and officials sleep.
  geo::GraphPosition camp() const { return pois_.require(geo::PoiKind::kBaseCamp).location; }

  /// Maps an activity to where the node should go next.
  Destination next_destination(MobilityState& s, Activity activity, Rng& rng) {
    const geo::GraphPosition here = s.graph_position.value_or(s.home_anchor);
    auto at_poi = [&](geo::PoiKind k) {
      const auto& idx = pois_.of(k);
      if (idx.empty()) throw ValidationError("missing POI kind '" + std::string(geo::to_string(k)) + "'");
      return Destination{pois_[idx.front()].location, Behavior::kDwell, idx.front()};
    };
    switch (activity) {
      case Activity::kSleep:
        return {s.home_anchor, Behavior::kDwell, std::nullopt};
      case Activity::kNeighborhood: {
        if (s.neighborhood.empty())
          s.neighborhood = geo::within_radius(graph_, s.home_anchor, params_.neighborhood_radius);
        return {geo::sample_intervals(s.neighborhood, rng, s.home_anchor), Behavior::kRoam, std::nullopt};
      }
      case Activity::kFoodDistribution: {
        const auto& idx = pois_.of(geo::PoiKind::kFoodWater);
        if (idx.empty()) throw ValidationError("missing POI kind 'food_water'");
        std::vector<geo::GraphPosition> targets;
        for (std::size_t i : idx) targets.push_back(pois_[i].location);
        const auto dist = geo::path_distances(graph_, here, targets);
        const auto best = static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
        return {targets[best], Behavior::kDwell, idx[best]};
      }
      case Activity::kHospital: {
        const auto choice = injured_hospital_target(graph_, here, hospitals_, occupancy_);
        s.hospital_target = choice.hospital;
        s.keep_seeking = choice.keep_seeking;
        return {hospitals_[choice.hospital].location, Behavior::kSeekHospital,
                pois_.of(geo::PoiKind::kHospital)[choice.hospital]};
      }
      case Activity::kAirportRdc:
        return at_poi(geo::PoiKind::kAirportRdc);
      case Activity::kOsoccMeeting:
        return at_poi(geo::PoiKind::kOsocc);
      case Activity::kTownHall:
        return at_poi(geo::PoiKind::kTownHall);
      case Activity::kBaseCamp:
        return at_poi(geo::PoiKind::kBaseCamp);
      case Activity::kCityRoaming:
        return {graph_.sample_uniform(rng), Behavior::kRoam, std::nullopt};
      case Activity::kReconnaissance:
        return {graph_.sample_uniform(rng), Behavior::kReconnoiter, std::nullopt};
      case Activity::kStreetSearch: {
        const auto edge = search_cursor_.next(graph_, rng);
        if (!edge) {
          auto d = at_poi(geo::PoiKind::kBaseCamp);
          d.behavior = Behavior::kIdle;
          return d;
        }
        s.search_edge = edge;
        s.search_walking_edge = false;
        const auto& e = graph_.edge(*edge);
        const std::array<geo::GraphPosition, 2> ends = {geo::GraphPosition{*edge, 0.0},
                                                        geo::GraphPosition{*edge, e.length}};
        const auto dist = geo::path_distances(graph_, here, ends);
        return {dist[1] < dist[0] ? ends[1] : ends[0], Behavior::kSearchEdge, std::nullopt};
      }
      case Activity::kParked:
        return {here, Behavior::kDwell, std::nullopt};
    }
    return {here, Behavior::kIdle, std::nullopt};
  }

  /// Puts a node into the area: responders at the airport reception centre,
  /// everyone else at home.
  void activate(MobilityState& s, double now) {
    s.presence = Presence::kActive;
    s.leg.reset();
    s.arrived = false;
    s.activity.reset();
    s.plan_day = -1;
    if (arrives_by_air(s.role)) {
      const auto& rdc = airport();
      place(s, rdc.location);
      s.stage = ArrivalStage::kAtRdc;
      s.pause_until = now + params_.rdc_dwell;
      record(s, now, geo::PoiKind::kAirportRdc);
    } else {
      place(s, s.home_anchor);
      s.stage = ArrivalStage::kSettled;
      s.pause_until = now;
    }
  }

  /// Removes a node from the area; it is parked at the airport.
  void deactivate(MobilityState& s, double) {
    release_bed(s);
    s.presence = Presence::kDeparted;
    s.leg.reset();
    s.arrived = false;
    s.activity = Activity::kParked;
    place(s, airport().location);
  }

  /// Plans movement for one step; call before `advance`.
  void update(MobilityState& s, double now, Rng& rng) {
    if (s.presence != Presence::kActive || s.immobile) return;
    const int day = static_cast<int>(std::floor(now / kDay));
    if (s.plan_day != day) {
      s.plan = build_day_plan(table_for(s, day), rng, params_.jitter_hours, params_.food_visit_hours);
      s.plan_day = day;
    }
    const Activity scheduled = activity_at(s.plan, (now - day * kDay) / kHour);

    if (s.stage != ArrivalStage::kSettled) {
      if (s.arrived) {
        s.arrived = false;
        pipeline_arrival(s, now);
      }
      pipeline(s, now, scheduled, rng);
      return;
    }
    if (s.arrived) {
      s.arrived = false;
      on_arrival(s, now, rng);
    }
    if (!s.activity || *s.activity != scheduled) {
      start_activity(s, scheduled, now, rng);
      return;
    }
    if (!s.leg && s.pause_until <= now) resume(s, now, rng);
  }

  /// Table governing a node on a given day. Volunteering scientists switch to
  /// the relief-team routine.
  const DayTable& table_for(const MobilityState& s, int day) const {
    if (s.volunteer && day >= params_.volunteer_day) return params_.schedules.table(Role::kDrt, day);
    return params_.schedules.table(s.role, day);
  }

 private:
  void place(MobilityState& s, geo::GraphPosition p) {
    s.graph_position = p;
    s.position = graph_.point_at(p);
  }

  void record(MobilityState& s, double now, geo::PoiKind k) {
    if (record_visits_) s.visits.push_back({now, k, std::nullopt});
  }

  void record(MobilityState& s, double now, Activity a) {
    if (record_visits_) s.visits.push_back({now, std::nullopt, a});
  }

  void release_bed(MobilityState& s) {
    if (s.admitted_hospital) {
      --occupancy_[*s.admitted_hospital];
      s.admitted_hospital.reset();
    }
  }

  void go_to(MobilityState& s, geo::GraphPosition target, SpeedRange speed, double now, Rng& rng) {
    const geo::GraphPosition here = s.graph_position.value_or(s.home_anchor);
    const double v = rng.uniform(speed.min, speed.max);
    auto path = geo::shortest_path(graph_, here, target);
    s.pause_until = now;
    if (path.points.size() < 2) {
      s.leg.reset();
      s.arrived = true;
      return;
    }
    s.leg = Leg::along_path(path, v);
    s.arrived = false;
  }

  void go_to(MobilityState& s, const Destination& d, double now, Rng& rng) {
    s.behavior = d.behavior;
    s.destination_poi = d.poi;
    go_to(s, d.target, speeds_.travel(s.role), now, rng);
  }

  void start_activity(MobilityState& s, Activity a, double now, Rng& rng) {
    if (a != Activity::kHospital) release_bed(s);
    s.activity = a;
    s.keep_seeking = false;
    s.search_edge.reset();
    s.search_walking_edge = false;
    record(s, now, a);
    if (a == Activity::kHospital && s.admitted_hospital) {
      // Still holding a bed from earlier in the day.
      s.behavior = Behavior::kDwell;
      go_to(s, hospitals_[*s.admitted_hospital].location, speeds_.travel(s.role), now, rng);
      return;
    }
    go_to(s, next_destination(s, a, rng), now, rng);
  }

  void on_arrival(MobilityState& s, double now, Rng& rng) {
    if (s.destination_poi && s.behavior != Behavior::kSearchEdge) record(s, now, pois_[*s.destination_poi].kind);
    switch (s.behavior) {
      case Behavior::kRoam:
        s.pause_until = now + rng.uniform(params_.roam_pause.min, params_.roam_pause.max);
        break;
      case Behavior::kReconnoiter:
        s.pause_until = now + rng.uniform(params_.recon_pause.min, params_.recon_pause.max);
        break;
      case Behavior::kSearchEdge:
        if (!s.search_walking_edge && s.search_edge) {
          const auto& e = graph_.edge(*s.search_edge);
          const geo::GraphPosition here = *s.graph_position;
          const geo::GraphPosition far{*s.search_edge, here.offset < e.length / 2 ? e.length : 0.0};
          s.search_walking_edge = true;
          go_to(s, far, speeds_.usrt_search, now, rng);
        } else {
          s.search_walking_edge = false;
        }
        break;
      case Behavior::kSeekHospital:
        check_in(s, now, rng);
        break;
      case Behavior::kDwell:
      case Behavior::kIdle:
        break;
    }
  }

  void check_in(MobilityState& s, double now, Rng& rng) {
    const std::size_t h = *s.hospital_target;
    const auto& cap = hospitals_[h].capacity;
    if (!cap || occupancy_[h] < *cap) {
      ++occupancy_[h];
      s.admitted_hospital = h;
      s.keep_seeking = false;
      s.behavior = Behavior::kDwell;
      return;
    }
    const auto choice = injured_hospital_target(graph_, *s.graph_position, hospitals_, occupancy_);
    if (!choice.keep_seeking && choice.hospital != h) {
      s.hospital_target = choice.hospital;
      s.keep_seeking = false;
      go_to(s, hospitals_[choice.hospital].location, speeds_.travel(s.role), now, rng);
      s.behavior = Behavior::kSeekHospital;
      s.destination_poi = pois_.of(geo::PoiKind::kHospital)[choice.hospital];
      return;
    }
    s.keep_seeking = true;
    s.pause_until = now + params_.hospital_retry;
  }

  void resume(MobilityState& s, double now, Rng& rng) {
    switch (s.behavior) {
      case Behavior::kRoam:
      case Behavior::kReconnoiter:
        go_to(s, next_destination(s, *s.activity, rng), now, rng);
        break;
      case Behavior::kSearchEdge:
        if (!s.search_walking_edge) go_to(s, next_destination(s, Activity::kStreetSearch, rng), now, rng);
        break;
      case Behavior::kSeekHospital:
        if (s.keep_seeking) check_in(s, now, rng);
        break;
      case Behavior::kDwell:
      case Behavior::kIdle:
        break;
    }
  }

  void pipeline(MobilityState& s, double now, Activity scheduled, Rng& rng) {
    if (s.leg || s.pause_until > now) return;
    switch (s.stage) {
      case ArrivalStage::kAtRdc:
        if (scheduled == Activity::kAirportRdc) return;
        s.stage = ArrivalStage::kToOsocc;
        s.behavior = Behavior::kDwell;
        s.destination_poi = pois_.of(geo::PoiKind::kOsocc).front();
        go_to(s, pois_[*s.destination_poi].location, speeds_.travel(s.role), now, rng);
        break;
      case ArrivalStage::kAtOsocc:
        if (scheduled == Activity::kOsoccMeeting) return;
        s.stage = ArrivalStage::kToCamp;
        s.destination_poi.reset();
        go_to(s, s.home_anchor, speeds_.travel(s.role), now, rng);
        break;
      default:
        break;
    }
  }

  void pipeline_arrival(MobilityState& s, double now) {
    if (s.stage == ArrivalStage::kToOsocc) {
      record(s, now, geo::PoiKind::kOsocc);
      s.stage = ArrivalStage::kAtOsocc;
      s.pause_until = now + params_.osocc_briefing;
    } else if (s.stage == ArrivalStage::kToCamp) {
      record(s, now, geo::PoiKind::kBaseCamp);
      s.stage = ArrivalStage::kSettled;
      s.activity.reset();
    }
  }

  const geo::MapGraph& graph_;
  const geo::PoiSet& pois_;
  const NdParams& params_;
  RoleSpeeds speeds_;
  std::vector<geo::Poi> hospitals_;
  std::vector<int> occupancy_;
  SearchCursor search_cursor_;
  bool record_visits_ = false;
};

/// A spawned node and when it enters and leaves the area.
struct SpawnedNode {
  MobilityState state;
  ArrivalPlan plan;
};

namespace detail {
/// Random subset of size round(fraction * n) of [0, n), as a membership mask.
inline std::vector<bool> pick_fraction(std::size_t n, double fraction, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
  const auto k = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
  std::vector<bool> mask(n, false);
  for (std::size_t i = 0; i < std::min(k, n); ++i) mask[idx[i]] = true;
  return mask;
}
}  // namespace detail

/// Creates all ND nodes, role by role in enum order, with home anchors and
/// arrival plans.
inline std::vector<SpawnedNode> spawn_roles(const RoleCounts& counts, const NdParams& p, const geo::MapGraph& g,
                                            const geo::PoiSet& pois, Rng& rng) {
  std::vector<SpawnedNode> out;
  const auto& shelters = pois.of(geo::PoiKind::kHomeAnchor);
  auto random_home = [&] {
    if (!shelters.empty()) return pois[shelters[rng.below(shelters.size())]].location;
    return g.sample_uniform(rng);
  };
  const geo::GraphPosition camp = pois.require(geo::PoiKind::kBaseCamp).location;

  for (Role role : kAllRoles) {
    const auto n = static_cast<std::size_t>(std::max(0, counts[index(role)]));
    std::vector<bool> flagged;
    if (role == Role::kInjuredLocal) flagged = detail::pick_fraction(n, p.immobile_injured_fraction, rng);
    if (role == Role::kScientist) flagged = detail::pick_fraction(n, p.volunteer_fraction, rng);
    if (role == Role::kDrt || role == Role::kUsrt) flagged = detail::pick_fraction(n, p.prepositioned_fraction, rng);

    for (std::size_t i = 0; i < n; ++i) {
      SpawnedNode node;
      auto& s = node.state;
      s.id = static_cast<NodeId>(out.size());
      s.role = role;
      node.plan.node = s.id;
      switch (role) {
        case Role::kHealthyLocal:
          s.home_anchor = random_home();
          break;
        case Role::kInjuredLocal:
          s.home_anchor = random_home();
          s.immobile = flagged[i];
          break;
        case Role::kScientist:
          s.home_anchor = random_home();
          s.volunteer = flagged[i];
          if (!s.volunteer) node.plan.departure_time = p.volunteer_day * kDay;
          break;
        case Role::kGovOfficial:
          s.home_anchor = camp;
          break;
        case Role::kUnOfficial:
          s.home_anchor = camp;
          node.plan.arrival_time = p.un_arrival_hour * kHour;
          break;
        case Role::kDrt:
        case Role::kUsrt:
          s.home_anchor = camp;
          if (flagged[i]) {
            node.plan.arrival_time = p.prepositioned_hour * kHour;
          } else {
            const auto day = rng.uniform_int(p.arrival_first_day, p.arrival_last_day);
            node.plan.arrival_time =
                static_cast<double>(day) * kDay + rng.uniform(p.daylight_start_hour, p.daylight_end_hour) * kHour;
          }
          if (role == Role::kUsrt)
            node.plan.departure_time = rng.uniform(p.usrt_departure_day * kDay, (p.usrt_departure_day + 1) * kDay);
          break;
      }
      s.presence = Presence::kNotArrived;
      s.graph_position = s.home_anchor;
      s.position = g.point_at(s.home_anchor);
      out.push_back(std::move(node));
    }
  }
  return out;
}

}  // namespace natdis::mobility
