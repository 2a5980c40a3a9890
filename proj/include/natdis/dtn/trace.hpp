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
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "natdis/core/error.hpp"
#include "natdis/core/format.hpp"
#include "natdis/dtn/network.hpp"

namespace natdis::dtn {

struct ContactEvent {
  double time = 0.0;
  bool up = true;
  NodeId a = 0;
  NodeId b = 0;
};

/// Parses `<time> UP|DOWN <a> <b>` lines. Blank lines and `#` comments are
/// skipped.
inline std::vector<ContactEvent> parse_trace(std::string_view text) {
  std::vector<ContactEvent> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream in{std::string(line)};
    std::string t, kind, a, b, extra;
    in >> t >> kind >> a >> b;
    ContactEvent e;
    if (b.empty() || (in >> extra) || !parse_double(t, e.time) || !parse_int(a, e.a) || !parse_int(b, e.b))
      throw ParseError("trace", line_no, "expected '<time> UP|DOWN <a> <b>'");
    if (kind == "UP") {
      e.up = true;
    } else if (kind == "DOWN") {
      e.up = false;
    } else {
      throw ParseError("trace", line_no, "unknown event '" + kind + "'");
    }
    if (e.a == e.b) throw ParseError("trace", line_no, "node linked to itself");
    if (!out.empty() && e.time < out.back().time) throw ParseError("trace", line_no, "events out of time order");
    out.push_back(e);
  }
  return out;
}

inline std::string format_trace(std::span<const ContactEvent> events) {
  std::string out;
  for (const auto& e : events)
    out += format_number(e.time) + (e.up ? " UP " : " DOWN ") + std::to_string(e.a) + ' ' + std::to_string(e.b) + '\n';
  return out;
}

struct ScriptedMessage {
  double time = 0.0;
  NodeId source = 0;
  NodeId destination = 0;
  std::int64_t size = 1;
};

/// Replays a contact trace through `net`. Messages due at an event's time are
/// created before that event. With a finite rate, links transfer for the time
/// between events; with an infinite one, queues flush after every event.
inline void replay_trace(DtnNetwork& net, std::span<const ContactEvent> events, std::span<const ScriptedMessage> messages,
                         double ttl) {
  std::vector<ScriptedMessage> pending(messages.begin(), messages.end());
  std::stable_sort(pending.begin(), pending.end(),
                   [](const ScriptedMessage& x, const ScriptedMessage& y) { return x.time < y.time; });
  const bool instant = std::isinf(net.params().rate_bps);
  std::size_t next_msg = 0;
  double clock = 0.0;
  auto advance_to = [&](double t) {
    if (!instant && t > clock) net.step(t - clock, t);
    clock = std::max(clock, t);
  };
  auto create_until = [&](double t) {
    while (next_msg < pending.size() && pending[next_msg].time <= t) {
      const auto& m = pending[next_msg++];
      advance_to(m.time);
      net.create(m.source, m.destination, m.size, m.time, ttl);
      if (instant) net.flush(m.time);
    }
  };
  for (const auto& e : events) {
    create_until(e.time);
    advance_to(e.time);
    if (e.up) {
      net.link_up(e.a, e.b, e.time);
    } else {
      net.link_down(e.a, e.b);
    }
    if (instant) net.flush(e.time);
  }
  create_until(std::numeric_limits<double>::infinity());
}

}  // namespace natdis::dtn
