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

#include <cstdint>
#include <span>
#include <vector>

#include "natdis/core/random.hpp"
#include "natdis/dtn/message.hpp"

namespace natdis::dtn {

struct TrafficParams {
  double interval_min = 8.0;
  double interval_max = 12.0;
  std::int64_t size_min = 50'000;
  std::int64_t size_max = 100'000;
  double ttl = 21600.0;
};

struct MessageRequest {
  NodeId source = 0;
  NodeId destination = 0;
  std::int64_t size = 0;
};

/// One message network-wide per interval, between two distinct active nodes.
class TrafficGenerator {
 public:
  TrafficGenerator(TrafficParams params, Rng& rng) : params_(params) { next_ = draw_interval(rng); }

  const TrafficParams& params() const { return params_; }
  double next_time() const { return next_; }

  /// All messages due by `now`. A tick with fewer than two active nodes is
  /// skipped.
  std::vector<MessageRequest> due(double now, std::span<const NodeId> active, Rng& rng) {
    std::vector<MessageRequest> out;
    while (next_ <= now) {
      if (active.size() >= 2) {
        MessageRequest m;
        const auto s = rng.below(active.size());
        auto d = rng.below(active.size() - 1);
        if (d >= s) ++d;
        m.source = active[s];
        m.destination = active[d];
        m.size = rng.uniform_int(params_.size_min, params_.size_max);
        out.push_back(m);
      }
      next_ += draw_interval(rng);
    }
    return out;
  }

 private:
  double draw_interval(Rng& rng) const { return rng.uniform(params_.interval_min, params_.interval_max); }

  TrafficParams params_;
  double next_ = 0.0;
};

}  // namespace natdis::dtn
