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

// Brute-force reference computations for the street-graph tests. These are
// deliberately naive and share no code with the library's algorithms.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "natdis/core/random.hpp"
#include "natdis/geo/map_graph.hpp"

namespace natdis::testing {

/// Exhaustive simple-path enumeration between two vertices.
inline double enumerate_shortest(const geo::MapGraph& g, geo::VertexId from, geo::VertexId to) {
  if (from == to) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> on_path(g.vertex_count(), false);
  auto dfs = [&](auto&& self, geo::VertexId u, double len) -> void {
    if (u == to) {
      best = std::min(best, len);
      return;
    }
    on_path[u] = true;
    for (const auto& e : g.edges()) {
      geo::VertexId v;
      if (e.a == u) {
        v = e.b;
      } else if (e.b == u) {
        v = e.a;
      } else {
        continue;
      }
      if (!on_path[v]) self(self, v, len + std::hypot(g.vertex(e.a).x - g.vertex(e.b).x, g.vertex(e.a).y - g.vertex(e.b).y));
    }
    on_path[u] = false;
  };
  dfs(dfs, from, 0.0);
  return best;
}

/// Component sizes by repeated flood fill over the raw edge list.
inline std::vector<std::vector<geo::VertexId>> flood_components(const geo::MapGraph& g) {
  std::vector<int> comp(g.vertex_count(), -1);
  std::vector<std::vector<geo::VertexId>> out;
  for (geo::VertexId s = 0; s < g.vertex_count(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<geo::VertexId> members{s};
    comp[s] = static_cast<int>(out.size());
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& e : g.edges()) {
        if (comp[e.a] >= 0 && comp[e.b] < 0) {
          comp[e.b] = comp[e.a];
          members.push_back(e.b);
          grew = true;
        } else if (comp[e.b] >= 0 && comp[e.a] < 0) {
          comp[e.a] = comp[e.b];
          members.push_back(e.a);
          grew = true;
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.push_back(members);
  }
  return out;
}

/// Random connected-or-not graph with up to `max_vertices` vertices.
inline geo::MapGraph random_small_graph(Rng& rng, std::size_t max_vertices, double edge_probability) {
  const std::size_t n = 2 + rng.below(max_vertices - 1);
  std::vector<geo::Point2D> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
  std::vector<std::pair<geo::VertexId, geo::VertexId>> edges;
  for (geo::VertexId a = 0; a < n; ++a)
    for (geo::VertexId b = a + 1; b < n; ++b)
      if (rng.bernoulli(edge_probability)) edges.emplace_back(a, b);
  if (edges.empty()) edges.emplace_back(0, 1);
  return geo::MapGraph(std::move(pts), edges);
}

/// Densely samples every edge at `step` meters to find the nearest position.
inline geo::GraphPosition dense_snap(const geo::MapGraph& g, geo::Point2D p, double step) {
  geo::GraphPosition best{};
  double best_d = std::numeric_limits<double>::infinity();
  for (geo::EdgeId id = 0; id < g.edge_count(); ++id) {
    const auto& e = g.edge(id);
    const auto n = static_cast<std::size_t>(std::ceil(e.length / step));
    for (std::size_t k = 0; k <= n; ++k) {
      const double off = std::min(e.length, k * step);
      const double t = off / e.length;
      const double x = g.vertex(e.a).x + (g.vertex(e.b).x - g.vertex(e.a).x) * t;
      const double y = g.vertex(e.a).y + (g.vertex(e.b).y - g.vertex(e.a).y) * t;
      const double d = std::hypot(p.x - x, p.y - y);
      if (d < best_d) {
        best_d = d;
        best = {id, off};
      }
    }
  }
  return best;
}

}  // namespace natdis::testing
