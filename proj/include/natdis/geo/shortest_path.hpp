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
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "natdis/core/error.hpp"
#include "natdis/geo/map_graph.hpp"

namespace natdis::geo {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A route along the street graph. `segment_edges[i]` is the edge carrying
/// the segment points[i] -> points[i + 1].
struct Path {
  std::vector<Point2D> points;
  std::vector<EdgeId> segment_edges;
  double length = 0.0;
};

struct Seed {
  VertexId vertex;
  double distance;
};

/// Multi-source Dijkstra with a binary heap.
inline std::vector<double> dijkstra(const MapGraph& g, std::span<const Seed> seeds) {
  std::vector<double> dist(g.vertex_count(), kInfinity);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (const auto& s : seeds) {
    if (s.distance < dist[s.vertex]) {
      dist[s.vertex] = s.distance;
      heap.emplace(s.distance, s.vertex);
    }
  }
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& adj : g.neighbors(u)) {
      const double nd = d + g.edge(adj.edge).length;
      if (nd < dist[adj.vertex]) {
        dist[adj.vertex] = nd;
        heap.emplace(nd, adj.vertex);
      }
    }
  }
  return dist;
}

namespace detail {

inline std::array<Seed, 2> endpoint_seeds(const MapGraph& g, GraphPosition p) {
  const Edge& e = g.edge(p.edge);
  return {Seed{e.a, p.offset}, Seed{e.b, e.length - p.offset}};
}

/// Cost from vertex v to position p along p's own edge, or infinity if v is
/// not an endpoint of that edge.
inline double cost_to_position(const MapGraph& g, VertexId v, GraphPosition p) {
  const Edge& e = g.edge(p.edge);
  if (v == e.a) return p.offset;
  if (v == e.b) return e.length - p.offset;
  return kInfinity;
}

inline void push_point(Path& path, Point2D p, EdgeId via) {
  if (!path.points.empty()) {
    if (path.points.back() == p) return;
    path.segment_edges.push_back(via);
  }
  path.points.push_back(p);
}

inline double tolerance_for(double d) { return 1e-9 * std::max(1.0, d); }

}  // namespace detail

/// Minimum-length route between two graph positions. Mid-edge positions split
/// their edge virtually. Among equal-length routes the lexicographically
/// smallest sequence of vertex ids wins (a direct same-edge route has the
/// empty sequence and therefore wins ties).
inline Path shortest_path(const MapGraph& g, GraphPosition from, GraphPosition to) {
  if (!g.valid(from) || !g.valid(to)) throw GraphError("shortest_path: invalid graph position");
  Path path;
  const Point2D start = g.point_at(from);
  const Point2D goal = g.point_at(to);
  if (from.edge == to.edge && from.offset == to.offset) {
    path.points.push_back(start);
    return path;
  }

  const auto from_seeds = detail::endpoint_seeds(g, from);
  const auto to_seeds = detail::endpoint_seeds(g, to);
  const auto to_goal = dijkstra(g, to_seeds);

  double best = kInfinity;
  for (const auto& s : from_seeds) best = std::min(best, s.distance + to_goal[s.vertex]);
  const double direct = from.edge == to.edge ? std::abs(from.offset - to.offset) : kInfinity;
  if (from.edge == to.edge && direct <= best + detail::tolerance_for(direct)) {
    path.points = {start, goal};
    path.segment_edges = {from.edge};
    path.length = direct;
    return path;
  }
  if (best == kInfinity) throw UnreachableError("shortest_path: target unreachable");

  const double tol = detail::tolerance_for(best);
  // Greedy forward walk over vertices that stay on some optimal route.
  std::array<Seed, 2> first = from_seeds;
  if (first[1].vertex < first[0].vertex) std::swap(first[0], first[1]);
  VertexId u = 0;
  double travelled = -1.0;
  for (const auto& s : first) {
    if (s.distance + to_goal[s.vertex] <= best + tol) {
      u = s.vertex;
      travelled = s.distance;
      break;
    }
  }
  detail::push_point(path, start, from.edge);
  detail::push_point(path, g.vertex(u), from.edge);
  for (std::size_t guard = 0;; ++guard) {
    if (guard > g.vertex_count()) throw std::logic_error("shortest_path: tie-breaking walk did not terminate");
    const double finish = detail::cost_to_position(g, u, to);
    if (travelled + finish <= best + tol) break;
    bool moved = false;
    for (const auto& adj : g.neighbors(u)) {
      const double w = g.edge(adj.edge).length;
      if (travelled + w + to_goal[adj.vertex] <= best + tol) {
        travelled += w;
        u = adj.vertex;
        detail::push_point(path, g.vertex(u), adj.edge);
        moved = true;
        break;
      }
    }
    if (!moved) throw std::logic_error("shortest_path: no optimal continuation");
  }
  detail::push_point(path, goal, to.edge);
  path.length = 0.0;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) path.length += distance(path.points[i], path.points[i + 1]);
  return path;
}

/// Shortest-path distance from `from` to each target (infinity when
/// unreachable), from one Dijkstra run.
inline std::vector<double> path_distances(const MapGraph& g, GraphPosition from, std::span<const GraphPosition> targets) {
  const auto seeds = detail::endpoint_seeds(g, from);
  const auto dist = dijkstra(g, seeds);
  std::vector<double> out;
  out.reserve(targets.size());
  for (const auto& t : targets) {
    const Edge& e = g.edge(t.edge);
    double d = std::min(dist[e.a] + t.offset, dist[e.b] + (e.length - t.offset));
    if (t.edge == from.edge) d = std::min(d, std::abs(t.offset - from.offset));
    out.push_back(d);
  }
  return out;
}

/// A sub-interval [lo, hi] of one edge, in offsets from the edge's `a` end.
struct EdgeInterval {
  EdgeId edge;
  double lo;
  double hi;
};

/// All street within path distance `radius` of `center`, as disjoint
/// per-edge intervals.
inline std::vector<EdgeInterval> within_radius(const MapGraph& g, GraphPosition center, double radius) {
  const auto dist = dijkstra(g, detail::endpoint_seeds(g, center));
  std::vector<EdgeInterval> out;
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    std::vector<std::pair<double, double>> parts;
    if (dist[e.a] < radius) parts.emplace_back(0.0, std::min(e.length, radius - dist[e.a]));
    if (dist[e.b] < radius) parts.emplace_back(std::max(0.0, e.length - (radius - dist[e.b])), e.length);
    if (id == center.edge) {
      parts.emplace_back(std::max(0.0, center.offset - radius), std::min(e.length, center.offset + radius));
    }
    if (parts.empty()) continue;
    std::sort(parts.begin(), parts.end());
    double lo = parts[0].first;
    double hi = parts[0].second;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i].first <= hi) {
        hi = std::max(hi, parts[i].second);
      } else {
        out.push_back({id, lo, hi});
        lo = parts[i].first;
        hi = parts[i].second;
      }
    }
    out.push_back({id, lo, hi});
  }
  return out;
}

/// Uniform-by-length draw over a set of intervals. Falls back to `fallback`
/// when the intervals have zero total length.
inline GraphPosition sample_intervals(std::span<const EdgeInterval> intervals, Rng& rng, GraphPosition fallback) {
  double total = 0.0;
  for (const auto& iv : intervals) total += iv.hi - iv.lo;
  if (!(total > 0.0)) return fallback;
  double s = rng.uniform() * total;
  for (const auto& iv : intervals) {
    const double len = iv.hi - iv.lo;
    if (s < len) return {iv.edge, iv.lo + s};
    s -= len;
  }
  const auto& last = intervals.back();
  return {last.edge, last.hi};
}

}  // namespace natdis::geo
