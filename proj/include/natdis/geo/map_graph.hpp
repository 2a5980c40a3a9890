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
#include <limits>
#include <numeric>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "natdis/core/error.hpp"
#include "natdis/core/random.hpp"
#include "natdis/geo/point.hpp"
#include "natdis/geo/wkt.hpp"

namespace natdis::geo {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  double length = 0.0;
};

struct Adjacent {
  VertexId vertex = 0;
  EdgeId edge = 0;
};

/// A point on the street graph: `offset` meters from the edge's `a` endpoint.
struct GraphPosition {
  EdgeId edge = 0;
  double offset = 0.0;

  friend bool operator==(const GraphPosition&, const GraphPosition&) = default;
};

/// Undirected street graph with straight edges. Immutable after construction.
/// Adjacency lists are sorted by neighbor id, then edge id.
class MapGraph {
 public:
  MapGraph() = default;

  MapGraph(std::vector<Point2D> vertices, const std::vector<std::pair<VertexId, VertexId>>& edges)
      : vertices_(std::move(vertices)), adjacency_(vertices_.size()) {
    edges_.reserve(edges.size());
    cumulative_.reserve(edges.size() + 1);
    for (auto [a, b] : edges) {
      if (a >= vertices_.size() || b >= vertices_.size()) throw GraphError("edge references unknown vertex");
      if (a == b) throw GraphError("self-loop edge");
      const double len = distance(vertices_[a], vertices_[b]);
      if (!(len > 0.0)) throw GraphError("zero-length edge");
      const auto id = static_cast<EdgeId>(edges_.size());
      edges_.push_back({a, b, len});
      adjacency_[a].push_back({b, id});
      adjacency_[b].push_back({a, id});
      cumulative_.push_back(cumulative_.back() + len);
    }
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end(), [](const Adjacent& l, const Adjacent& r) {
        return l.vertex != r.vertex ? l.vertex < r.vertex : l.edge < r.edge;
      });
    }
    if (!vertices_.empty()) {
      bounds_ = {vertices_[0].x, vertices_[0].y, vertices_[0].x, vertices_[0].y};
      for (const auto& v : vertices_) {
        bounds_.min_x = std::min(bounds_.min_x, v.x);
        bounds_.min_y = std::min(bounds_.min_y, v.y);
        bounds_.max_x = std::max(bounds_.max_x, v.x);
        bounds_.max_y = std::max(bounds_.max_y, v.y);
      }
    }
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  std::span<const Point2D> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  const Point2D& vertex(VertexId v) const { return vertices_[v]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Adjacent> neighbors(VertexId v) const { return adjacency_[v]; }

  double total_length() const { return cumulative_.back(); }
  const Box& bounds() const { return bounds_; }

  bool valid(GraphPosition p) const {
    return p.edge < edges_.size() && p.offset >= 0.0 && p.offset <= edges_[p.edge].length;
  }

  Point2D point_at(GraphPosition p) const {
    const Edge& e = edges_[p.edge];
    return lerp_by_length(vertices_[e.a], vertices_[e.b], p.offset, e.length);
  }

  /// Position at arc length `s` when all edges are laid end to end in id order.
  GraphPosition position_at_length(double s) const {
    s = std::clamp(s, 0.0, total_length());
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    auto id = static_cast<EdgeId>(std::distance(cumulative_.begin(), it) - 1);
    if (id >= edges_.size()) id = static_cast<EdgeId>(edges_.size() - 1);
    const double offset = std::clamp(s - cumulative_[id], 0.0, edges_[id].length);
    return {id, offset};
  }

  /// Uniform over total street length.
  GraphPosition sample_uniform(Rng& rng) const { return position_at_length(rng.uniform() * total_length()); }

 private:
  std::vector<Point2D> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Adjacent>> adjacency_;
  std::vector<double> cumulative_{0.0};
  Box bounds_;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Keeps the smaller index as root.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline std::uint64_t cell_key(std::int64_t cx, std::int64_t cy) {
  return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint64_t>(cy & 0xffffffff);
}

}  // namespace detail

/// Builds the street graph from WKT geometries. Polyline points closer than
/// `snap_tolerance` (transitively) become one vertex placed at the first such
/// point; consecutive points become edges. Zero-length and duplicate edges
/// are dropped. POINT geometries are ignored.
inline MapGraph build_graph(std::span<const Geometry> geometries, double snap_tolerance) {
  if (!(snap_tolerance >= 0.0)) throw GraphError("snap tolerance must be >= 0");

  std::vector<const Polyline*> lines;
  for (const auto& g : geometries) {
    if (const auto* l = std::get_if<Polyline>(&g)) {
      lines.push_back(l);
    } else if (const auto* m = std::get_if<MultiPolyline>(&g)) {
      for (const auto& part : m->parts) lines.push_back(&part);
    }
  }
  if (lines.empty()) throw GraphError("map contains no linestrings");

  std::vector<Point2D> raw;
  for (const auto* l : lines) raw.insert(raw.end(), l->points.begin(), l->points.end());

  // Merge points within tolerance with a spatial hash of cell size >= tolerance.
  const double cell = snap_tolerance > 0.0 ? snap_tolerance : 1.0;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
  grid.reserve(raw.size());
  detail::UnionFind uf(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto cx = static_cast<std::int64_t>(std::floor(raw[i].x / cell));
    const auto cy = static_cast<std::int64_t>(std::floor(raw[i].y / cell));
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(detail::cell_key(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        for (std::size_t j : it->second) {
          if (distance(raw[i], raw[j]) <= snap_tolerance) uf.unite(i, j);
        }
      }
    }
    grid[detail::cell_key(cx, cy)].push_back(i);
  }

  std::vector<VertexId> vertex_of_root(raw.size(), std::numeric_limits<VertexId>::max());
  std::vector<VertexId> vertex_of_point(raw.size());
  std::vector<Point2D> vertices;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::size_t root = uf.find(i);
    if (vertex_of_root[root] == std::numeric_limits<VertexId>::max()) {
      vertex_of_root[root] = static_cast<VertexId>(vertices.size());
      vertices.push_back(raw[root]);
    }
    vertex_of_point[i] = vertex_of_root[root];
  }

  std::vector<std::pair<VertexId, VertexId>> edges;
  std::unordered_map<std::uint64_t, bool> seen;
  std::size_t k = 0;
  for (const auto* l : lines) {
    for (std::size_t i = 0; i + 1 < l->points.size(); ++i) {
      const VertexId a = vertex_of_point[k + i];
      const VertexId b = vertex_of_point[k + i + 1];
      if (a == b) continue;
      const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
      if (!seen.emplace(key, true).second) continue;
      if (distance(vertices[a], vertices[b]) == 0.0) continue;
      edges.emplace_back(a, b);
    }
    k += l->points.size();
  }
  if (edges.empty()) throw GraphError("map has no edges after snapping");

  // Drop vertices no edge touches (all of their segments collapsed).
  std::vector<bool> used(vertices.size(), false);
  for (auto [a, b] : edges) used[a] = used[b] = true;
  std::vector<VertexId> final_id(vertices.size());
  std::vector<Point2D> final_vertices;
  for (VertexId v = 0; v < vertices.size(); ++v) {
    if (!used[v]) continue;
    final_id[v] = static_cast<VertexId>(final_vertices.size());
    final_vertices.push_back(vertices[v]);
  }
  for (auto& [a, b] : edges) {
    a = final_id[a];
    b = final_id[b];
  }
  return MapGraph(std::move(final_vertices), edges);
}

/// Connected-component label per vertex, labels numbered by smallest member.
inline std::vector<std::size_t> component_labels(const MapGraph& g) {
  detail::UnionFind uf(g.vertex_count());
  for (const auto& e : g.edges()) uf.unite(e.a, e.b);
  std::vector<std::size_t> out(g.vertex_count());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = uf.find(v);
  return out;
}

inline std::size_t component_count(const MapGraph& g) {
  const auto labels = component_labels(g);
  std::size_t n = 0;
  for (std::size_t v = 0; v < labels.size(); ++v) n += labels[v] == v;
  return n;
}

/// The component with the most vertices; ties go to the component holding the
/// smallest vertex id. Vertex and edge ids are renumbered preserving order.
inline MapGraph largest_component(const MapGraph& g) {
  if (g.vertex_count() == 0) throw GraphError("graph is empty");
  const auto labels = component_labels(g);
  std::vector<std::size_t> size(labels.size(), 0);
  for (auto l : labels) ++size[l];
  std::size_t best = labels[0];
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] == v && size[v] > size[best]) best = v;
  }
  std::vector<VertexId> remap(g.vertex_count(), std::numeric_limits<VertexId>::max());
  std::vector<Point2D> vertices;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] != best) continue;
    remap[v] = static_cast<VertexId>(vertices.size());
    vertices.push_back(g.vertex(static_cast<VertexId>(v)));
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& e : g.edges()) {
    if (labels[e.a] == best) edges.emplace_back(remap[e.a], remap[e.b]);
  }
  return MapGraph(std::move(vertices), edges);
}

/// Nearest graph position to `p`. Ties go to the lowest edge id.
inline GraphPosition snap_point(const MapGraph& g, Point2D p) {
  if (g.empty()) throw GraphError("cannot snap onto an empty graph");
  GraphPosition best{};
  double best_d = std::numeric_limits<double>::infinity();
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    const double t = project_onto_segment(p, g.vertex(e.a), g.vertex(e.b));
    const double d = distance(p, g.vertex(e.a) + (g.vertex(e.b) - g.vertex(e.a)) * t);
    if (d < best_d - 1e-12) {
      best_d = d;
      best = {id, std::clamp(t * e.length, 0.0, e.length)};
    }
  }
  return best;
}

/// Euclidean distance from `p` to the nearest edge segment.
inline double distance_to_graph(const MapGraph& g, Point2D p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges()) best = std::min(best, distance_to_segment(p, g.vertex(e.a), g.vertex(e.b)));
  return best;
}

}  // namespace natdis::geo
