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
#include <set>
#include <span>
#include <vector>

#include "natdis/core/random.hpp"
#include "natdis/dtn/trace.hpp"

namespace natdis::testing {

/// Indices of messages that can reach their destination through a
/// time-respecting chain of live contacts. Each message is flooded on its own
/// over the live-link graph after every event.
inline std::set<std::size_t> reachable_messages(std::span<const dtn::ContactEvent> events,
                                                std::span<const dtn::ScriptedMessage> messages, std::size_t nodes) {
  std::set<std::size_t> out;
  for (std::size_t k = 0; k < messages.size(); ++k) {
    const auto& m = messages[k];
    std::vector<bool> has(nodes, false);
    std::set<std::pair<dtn::NodeId, dtn::NodeId>> live;
    bool created = false;
    auto flood = [&] {
      if (!created) return;
      bool grew = true;
      while (grew) {
        grew = false;
        for (const auto& [a, b] : live) {
          if (has[a] != has[b]) {
            has[a] = has[b] = true;
            grew = true;
          }
        }
      }
      if (has[m.destination]) out.insert(k);
    };
    for (const auto& e : events) {
      if (!created && m.time <= e.time) {
        created = true;
        has[m.source] = true;
        flood();
      }
      const auto key = std::minmax(e.a, e.b);
      if (e.up) {
        live.insert(key);
      } else {
        live.erase(key);
      }
      flood();
    }
  }
  return out;
}

struct RandomTrace {
  std::size_t nodes = 0;
  std::vector<dtn::ContactEvent> events;
  std::vector<dtn::ScriptedMessage> messages;
};

/// Up to `max_nodes` nodes and `max_contacts` contacts on integer times in
/// [0, 100], plus a handful of messages.
inline RandomTrace random_trace(Rng& rng, std::size_t max_nodes, std::size_t max_contacts) {
  RandomTrace t;
  t.nodes = static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(max_nodes)));
  const auto contacts = rng.uniform_int(1, static_cast<std::int64_t>(max_contacts));
  auto pick_pair = [&](dtn::NodeId& a, dtn::NodeId& b) {
    a = static_cast<dtn::NodeId>(rng.below(t.nodes));
    b = static_cast<dtn::NodeId>(rng.below(t.nodes - 1));
    if (b >= a) ++b;
  };
  for (std::int64_t i = 0; i < contacts; ++i) {
    dtn::ContactEvent up, down;
    pick_pair(up.a, up.b);
    up.time = static_cast<double>(rng.uniform_int(0, 90));
    down = up;
    down.up = false;
    down.time = up.time + static_cast<double>(rng.uniform_int(0, 10));
    t.events.push_back(up);
    t.events.push_back(down);
  }
  std::stable_sort(t.events.begin(), t.events.end(),
                   [](const dtn::ContactEvent& x, const dtn::ContactEvent& y) { return x.time < y.time; });
  const auto n_msgs = rng.uniform_int(1, 8);
  for (std::int64_t i = 0; i < n_msgs; ++i) {
    dtn::ScriptedMessage m;
    pick_pair(m.source, m.destination);
    m.time = static_cast<double>(rng.uniform_int(0, 100));
    t.messages.push_back(m);
  }
  std::stable_sort(t.messages.begin(), t.messages.end(),
                   [](const dtn::ScriptedMessage& x, const dtn::ScriptedMessage& y) { return x.time < y.time; });
  return t;
}

/// Message indices delivered when replaying through an unconstrained network.
inline std::set<std::size_t> replay_unconstrained(const RandomTrace& t) {
  dtn::DtnNetwork net(t.nodes, {std::int64_t{1} << 50, std::numeric_limits<double>::infinity(),
                                dtn::DropPolicy::kOldestReceived});
  dtn::replay_trace(net, t.events, t.messages, std::numeric_limits<double>::infinity());
  std::set<std::size_t> out;
  for (const auto& d : net.deliveries()) out.insert(static_cast<std::size_t>(d.message));
  return out;
}

}  // namespace natdis::testing
