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
#include <set>
#include <span>
#include <vector>

#include "natdis/dtn/network.hpp"
#include "natdis/geo/point.hpp"

namespace natdis::dtn {

struct NodePosition {
  NodeId node = 0;
  geo::Point2D position;
};

struct ContactChanges {
  std::vector<NodePair> up;
  std::vector<NodePair> down;
};

/// Pairs within `range` (closed), sorted. Sweep over x.
inline std::vector<NodePair> pairs_in_range(std::span<const NodePosition> nodes, double range) {
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (nodes[i].position.x != nodes[j].position.x) return nodes[i].position.x < nodes[j].position.x;
    return nodes[i].node < nodes[j].node;
  });
  const double r2 = range * range;
  std::vector<NodePair> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& p = nodes[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& q = nodes[order[j]];
      if (q.position.x - p.position.x > range) break;
      const double dx = q.position.x - p.position.x, dy = q.position.y - p.position.y;
      if (dx * dx + dy * dy <= r2) out.push_back(ordered(p.node, q.node));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Remembers which pairs were in range last step and reports transitions.
class ContactDetector {
 public:
  explicit ContactDetector(double range) : range_(range) {
    if (!(range > 0.0)) throw ValidationError("radio range must be positive");
  }

  double range() const { return range_; }
  const std::vector<NodePair>& current() const { return current_; }

  ContactChanges update(std::span<const NodePosition> nodes) {
    auto now = sweep(nodes);
    ContactChanges c;
    std::set_difference(now.begin(), now.end(), current_.begin(), current_.end(), std::back_inserter(c.up));
    std::set_difference(current_.begin(), current_.end(), now.begin(), now.end(), std::back_inserter(c.down));
    current_ = std::move(now);
    return c;
  }

 private:
  /// Same result as pairs_in_range. Keeps last step's x order, which
  /// insertion sort repairs in near-linear time when nodes move a little.
  std::vector<NodePair> sweep(std::span<const NodePosition> nodes) {
    order_.resize(nodes.size());
    if (order_size_ != nodes.size()) {
      for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
      order_size_ = nodes.size();
    }
    auto less = [&](std::size_t i, std::size_t j) {
      if (nodes[i].position.x != nodes[j].position.x) return nodes[i].position.x < nodes[j].position.x;
      return nodes[i].node < nodes[j].node;
    };
    for (std::size_t i = 1; i < order_.size(); ++i) {
      const std::size_t v = order_[i];
      std::size_t j = i;
      for (; j > 0 && less(v, order_[j - 1]); --j) order_[j] = order_[j - 1];
      order_[j] = v;
    }
    const double r2 = range_ * range_;
    std::vector<NodePair> out;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      const auto& p = nodes[order_[i]];
      for (std::size_t j = i + 1; j < order_.size(); ++j) {
        const auto& q = nodes[order_[j]];
        if (q.position.x - p.position.x > range_) break;
        const double dx = q.position.x - p.position.x, dy = q.position.y - p.position.y;
        if (dx * dx + dy * dy <= r2) out.push_back(ordered(p.node, q.node));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  double range_;
  std::vector<NodePair> current_;
  std::vector<std::size_t> order_;  // indices into the last span, by x
  std::size_t order_size_ = 0;
};

/// Per-node encounter counts. Every link-up counts once for both ends.
class EncounterLog {
 public:
  explicit EncounterLog(std::size_t nodes) : totals_(nodes, 0), peers_(nodes) {}

  void record(NodePair p) {
    ++totals_.at(p.first);
    ++totals_.at(p.second);
    peers_[p.first].insert(p.second);
    peers_[p.second].insert(p.first);
  }

  std::size_t node_count() const { return totals_.size(); }
  std::uint64_t total(NodeId n) const { return totals_.at(n); }
  std::size_t unique(NodeId n) const { return peers_.at(n).size(); }
  std::uint64_t sum() const {
    std::uint64_t s = 0;
    for (auto t : totals_) s += t;
    return s;
  }

 private:
  std::vector<std::uint64_t> totals_;
  std::vector<std::set<NodeId>> peers_;
};

}  // namespace natdis::dtn
