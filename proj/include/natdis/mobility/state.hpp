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
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "natdis/geo/map_graph.hpp"
#include "natdis/geo/poi.hpp"
#include "natdis/geo/shortest_path.hpp"
#include "natdis/mobility/role.hpp"
#include "natdis/mobility/schedule.hpp"

namespace natdis::mobility {

using NodeId = std::uint32_t;

struct SpeedRange {
  double min = 0.5;
  double max = 1.5;

  friend bool operator==(const SpeedRange&, const SpeedRange&) = default;
};

/// Polyline being walked. `edges` is empty for off-graph (RWP) legs.
struct Leg {
  std::vector<geo::Point2D> points;
  std::vector<geo::EdgeId> edges;
  std::size_t segment = 0;  // index of the segment being walked
  double along = 0.0;       // meters walked on that segment
  double speed = 1.0;

  static Leg along_path(const geo::Path& p, double speed) { return {p.points, p.segment_edges, 0, 0.0, speed}; }
  static Leg straight(geo::Point2D from, geo::Point2D to, double speed) { return {{from, to}, {}, 0, 0.0, speed}; }

  bool done() const { return segment + 1 >= points.size(); }
};

/// Street-sweep bookkeeping: breadth-first over edges from the last
/// searched edge, restarting at a random unvisited edge when exhausted.
class SearchCursor {
 public:
  SearchCursor() = default;
  explicit SearchCursor(std::size_t edge_count) : visited_(edge_count, false), queued_(edge_count, false) {}

  /// Next edge to search, or nullopt when every edge has been searched.
  std::optional<geo::EdgeId> next(const geo::MapGraph& g, Rng& rng) {
    if (visited_.size() != g.edge_count()) *this = SearchCursor(g.edge_count());
    while (!frontier_.empty()) {
      const geo::EdgeId e = frontier_.front();
      frontier_.pop_front();
      if (!visited_[e]) return mark(g, e);
    }
    const std::size_t remaining = visited_.size() - searched_;
    if (remaining == 0) return std::nullopt;
    std::uint64_t k = rng.below(remaining);
    for (geo::EdgeId e = 0; e < visited_.size(); ++e) {
      if (visited_[e]) continue;
      if (k-- == 0) return mark(g, e);
    }
    return std::nullopt;
  }

  /// Starts the sweep at a chosen edge instead of a random one.
  geo::EdgeId begin_at(const geo::MapGraph& g, geo::EdgeId e) {
    if (visited_.size() != g.edge_count()) *this = SearchCursor(g.edge_count());
    return mark(g, e);
  }

  std::size_t searched() const { return searched_; }
  bool exhausted() const { return !visited_.empty() && searched_ == visited_.size(); }
  const std::vector<geo::EdgeId>& history() const { return history_; }

 private:
  geo::EdgeId mark(const geo::MapGraph& g, geo::EdgeId e) {
    visited_[e] = true;
    ++searched_;
    history_.push_back(e);
    const auto& edge = g.edge(e);
    for (geo::VertexId v : {edge.a, edge.b}) {
      for (const auto& adj : g.neighbors(v)) {
        if (!visited_[adj.edge] && !queued_[adj.edge]) {
          queued_[adj.edge] = true;
          frontier_.push_back(adj.edge);
        }
      }
    }
    return e;
  }

  std::vector<bool> visited_;
  std::vector<bool> queued_;
  std::deque<geo::EdgeId> frontier_;
  std::vector<geo::EdgeId> history_;
  std::size_t searched_ = 0;
};

enum class Presence { kNotArrived, kActive, kDeparted };

struct ArrivalPlan {
  NodeId node = 0;
  double arrival_time = 0.0;
  std::optional<double> departure_time;
};

/// What the node does between legs for its current activity.
enum class Behavior {
  kDwell,          // stay at the destination until the activity ends
  kRoam,           // pick another point after a short pause
  kReconnoiter,    // like kRoam with a longer pause at each point
  kSearchEdge,     // walk to and then along the next USRT search edge
  kSeekHospital,   // injured: admission check on arrival
  kIdle,           // nothing left to do (e.g. all streets searched)
};

/// Steps of the reception pipeline for nodes arriving by air.
enum class ArrivalStage { kAtRdc, kToOsocc, kAtOsocc, kToCamp, kSettled };

struct VisitRecord {
  double time = 0.0;
  std::optional<geo::PoiKind> poi;  // set for POI arrivals
  std::optional<Activity> started;  // set for activity starts
};

/// One simulated person's movement state.
struct MobilityState {
  NodeId id = 0;
  Role role = Role::kHealthyLocal;
  Presence presence = Presence::kActive;

  geo::Point2D position;
  std::optional<geo::GraphPosition> graph_position;  // Map and ND only
  std::optional<Leg> leg;
  bool arrived = false;  // leg finished, arrival not yet handled
  double pause_until = 0.0;
  double pause_after_leg = 0.0;  // RWP and Map: pause drawn with the leg

  // Natural Disaster model.
  geo::GraphPosition home_anchor;
  bool immobile = false;
  bool volunteer = false;
  ArrivalStage stage = ArrivalStage::kSettled;
  int plan_day = -1;
  DayTable plan;
  std::optional<Activity> activity;
  Behavior behavior = Behavior::kIdle;
  std::optional<std::size_t> destination_poi;
  std::optional<std::size_t> hospital_target;    // index into the hospital list
  std::optional<std::size_t> admitted_hospital;  // index into the hospital list
  bool keep_seeking = false;
  std::optional<geo::EdgeId> search_edge;
  bool search_walking_edge = false;
  std::vector<geo::EdgeInterval> neighborhood;  // cached around home_anchor
  std::vector<VisitRecord> visits;              // filled when recording is on
};

struct AdvanceResult {
  bool leg_complete = false;
  double moved = 0.0;
};

/// Walks `speed * dt` meters along the current leg. Waypoints are consumed
/// exactly; a pausing node (pause_until > now) does not move.
inline AdvanceResult advance(MobilityState& s, double dt, double now, const geo::MapGraph* graph) {
  AdvanceResult r;
  if (!s.leg || s.pause_until > now) return r;
  Leg& leg = *s.leg;
  double remaining = leg.speed * dt;
  while (remaining > 0.0 && !leg.done()) {
    const geo::Point2D a = leg.points[leg.segment];
    const geo::Point2D b = leg.points[leg.segment + 1];
    const double seg_len = geo::distance(a, b);
    const double left = seg_len - leg.along;
    if (remaining >= left || left - remaining < 1e-9) {
      r.moved += std::max(0.0, left);
      remaining -= left;
      ++leg.segment;
      leg.along = 0.0;
      s.position = b;
    } else {
      leg.along += remaining;
      r.moved += remaining;
      remaining = 0.0;
      s.position = geo::lerp_by_length(a, b, leg.along, seg_len);
    }
  }
  if (graph && !leg.edges.empty()) {
    const std::size_t seg = std::min(leg.segment, leg.edges.size() - 1);
    const geo::EdgeId e = leg.edges[seg];
    const auto& edge = graph->edge(e);
    const double off = std::clamp(geo::distance(graph->vertex(edge.a), s.position), 0.0, edge.length);
    s.graph_position = geo::GraphPosition{e, off};
  }
  if (leg.done()) {
    r.leg_complete = true;
    s.leg.reset();
    s.arrived = true;
  }
  return r;
}

}  // namespace natdis::mobility
