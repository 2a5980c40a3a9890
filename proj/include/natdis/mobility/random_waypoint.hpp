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

#include "natdis/core/random.hpp"
#include "natdis/geo/shortest_path.hpp"
#include "natdis/mobility/state.hpp"

namespace natdis::mobility {

struct PauseRange {
  double min = 0.0;
  double max = 120.0;

  friend bool operator==(const PauseRange&, const PauseRange&) = default;
};

struct RwpLeg {
  geo::Point2D waypoint;
  double speed = 0.0;
  double pause = 0.0;
};

/// Free-space Random Waypoint: waypoint uniform over `bounds`.
inline RwpLeg rwp_next_leg(Rng& rng, const geo::Box& bounds, SpeedRange speed, PauseRange pause) {
  RwpLeg leg;
  leg.waypoint = {rng.uniform(bounds.min_x, bounds.max_x), rng.uniform(bounds.min_y, bounds.max_y)};
  leg.speed = rng.uniform(speed.min, speed.max);
  leg.pause = rng.uniform(pause.min, pause.max);
  return leg;
}

struct MapLeg {
  geo::GraphPosition destination;
  geo::Path path;
  double speed = 0.0;
  double pause = 0.0;
};

/// Map-constrained Random Waypoint: destination uniform over street length,
/// reached along the shortest path.
inline MapLeg maprwp_next_leg(Rng& rng, const geo::MapGraph& graph, geo::GraphPosition from, SpeedRange speed,
                              PauseRange pause) {
  MapLeg leg;
  leg.destination = graph.sample_uniform(rng);
  leg.speed = rng.uniform(speed.min, speed.max);
  leg.pause = rng.uniform(pause.min, pause.max);
  leg.path = geo::shortest_path(graph, from, leg.destination);
  return leg;
}

}  // namespace natdis::mobility
