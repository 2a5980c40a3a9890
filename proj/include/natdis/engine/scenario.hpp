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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "natdis/engine/config.hpp"
#include "natdis/geo/map_graph.hpp"
#include "natdis/geo/poi.hpp"
#include "natdis/geo/wkt.hpp"
#include "natdis/reports/table.hpp"

namespace natdis::engine {

/// Inputs shared read-only by every run of a batch.
struct Scenario {
  ScenarioConfig config;
  std::optional<geo::MapGraph> graph;
  geo::PoiSet pois;
  geo::Box bounds;
  std::size_t pruned_vertices = 0;
  std::size_t pruned_edges = 0;
  std::vector<std::string> warnings;
};

inline geo::MapGraph load_map(const std::filesystem::path& path, double snap_tolerance) {
  const auto text = reports::read_text(path);
  try {
    const auto geoms = geo::parse_wkt(text);
    return geo::build_graph(geoms, snap_tolerance);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e.line(), e.what());
  }
}

/// Validates the config and loads map and POIs.
inline Scenario load_scenario(ScenarioConfig config) {
  validate(config);
  Scenario s;
  s.config = std::move(config);
  const auto& c = s.config;
  s.bounds = {0.0, 0.0, c.width, c.height};
  if (!c.map_path.empty()) {
    auto g = load_map(c.resolve(c.map_path), c.snap_tolerance);
    if (c.prune_components && geo::component_count(g) > 1) {
      auto kept = geo::largest_component(g);
      s.pruned_vertices = g.vertex_count() - kept.vertex_count();
      s.pruned_edges = g.edge_count() - kept.edge_count();
      s.warnings.push_back("pruned " + std::to_string(s.pruned_vertices) + " vertices and " +
                           std::to_string(s.pruned_edges) + " edges outside the largest street component");
      g = std::move(kept);
    }
    const auto& b = g.bounds();
    if (b.min_x < 0.0 || b.min_y < 0.0 || b.max_x > c.width || b.max_y > c.height)
      s.warnings.push_back("street map extends beyond scenario.width x scenario.height");
    s.graph = std::move(g);
  }
  if (!c.poi_path.empty()) {
    if (!s.graph) throw ConfigError("scenario.pois needs scenario.map");
    const auto path = c.resolve(c.poi_path);
    const auto text = reports::read_text(path);
    try {
      s.pois = geo::PoiSet(geo::load_pois(text, *s.graph, c.model == MobilityModel::kNd));
    } catch (const ParseError& e) {
      throw ParseError(path.string(), e.line(), e.what());
    }
  }
  return s;
}

}  // namespace natdis::engine
