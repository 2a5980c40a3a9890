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
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "natdis/core/error.hpp"
#include "natdis/dtn/buffer.hpp"

namespace natdis::dtn {

struct NetworkParams {
  std::int64_t buffer_capacity = 20'000'000;
  double rate_bps = 2'000'000.0;  // infinity moves any queue instantly
  DropPolicy drop_policy = DropPolicy::kOldestReceived;
};

struct Delivery {
  MessageId message = 0;
  double time = 0.0;
  int hops = 0;
};

struct NetworkCounters {
  std::uint64_t created = 0;      // generated messages, admitted or not
  std::uint64_t relayed = 0;      // completed copies, deliveries included
  std::uint64_t delivered = 0;
  std::uint64_t aborted = 0;      // in-flight transfers cut by link-down
  std::uint64_t evicted = 0;
  std::uint64_t expired = 0;
  std::uint64_t rejected = 0;     // copies refused by a full receiver
};

using NodePair = std::pair<NodeId, NodeId>;

inline NodePair ordered(NodeId a, NodeId b) { return a < b ? NodePair{a, b} : NodePair{b, a}; }

/// A live contact. Both directions share one half-duplex channel and take
/// turns message by message.
struct ContactLink {
  NodeId a = 0;
  NodeId b = 0;
  double established_at = 0.0;
  std::deque<MessageId> to_b;  // queued a -> b
  std::deque<MessageId> to_a;  // queued b -> a

  struct InFlight {
    MessageId message = 0;
    bool a_to_b = true;
    double bytes_remaining = 0.0;
  };
  std::optional<InFlight> current;
  bool a_turn = true;  // which side sends the next message

  std::deque<MessageId>& queue_from(NodeId sender) { return sender == a ? to_b : to_a; }
  const std::deque<MessageId>& queue_from(NodeId sender) const { return sender == a ? to_b : to_a; }
  NodeId peer_of(NodeId n) const { return n == a ? b : a; }
};

/// Epidemic routing over live contacts: on link-up each side offers every
/// message the other side has not seen; messages acquired while a link is up
/// are offered on it too.
class DtnNetwork {
 public:
  DtnNetwork(std::size_t node_count, NetworkParams params) : params_(params), links_of_(node_count) {
    buffers_.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i)
      buffers_.emplace_back(static_cast<NodeId>(i), params.buffer_capacity, params.drop_policy);
  }

  std::size_t node_count() const { return buffers_.size(); }
  const NetworkParams& params() const { return params_; }
  const Buffer& buffer(NodeId n) const { return buffers_.at(n); }
  const std::vector<Message>& messages() const { return messages_; }
  const Message& message(MessageId id) const { return messages_.at(id); }
  const std::vector<Delivery>& deliveries() const { return deliveries_; }
  const NetworkCounters& counters() const { return counters_; }
  std::optional<double> delivered_at(MessageId id) const { return delivered_at_.at(id); }
  const std::map<NodePair, ContactLink>& links() const { return links_; }
  bool linked(NodeId a, NodeId b) const { return links_.contains(ordered(a, b)); }

  /// Creates a message at its source. Returns its id whether or not the
  /// source had room for it.
  MessageId create(NodeId source, NodeId destination, std::int64_t size, double now, double ttl) {
    if (source == destination) throw ValidationError("message source equals destination");
    const MessageId id = messages_.size();
    messages_.push_back({id, source, destination, size, now, ttl});
    delivered_at_.push_back(std::nullopt);
    ++counters_.created;
    const auto r = buffers_.at(source).admit(messages_.back(), now);
    account(r);
    if (r.admitted()) offer_everywhere(source, id);
    return id;
  }

  /// Places a copy of an existing message at `node`, as if received now.
  bool inject(NodeId node, MessageId id, double now) {
    const auto r = buffers_.at(node).admit(messages_.at(id), now);
    account(r);
    if (r.admitted()) offer_everywhere(node, id);
    return r.admitted();
  }

  void link_up(NodeId a, NodeId b, double now) {
    const NodePair key = ordered(a, b);
    if (key.first == key.second) throw ValidationError("link endpoints must differ");
    if (links_.contains(key)) return;
    ContactLink& link = links_[key];
    link.a = key.first;
    link.b = key.second;
    link.established_at = now;
    links_of_.at(link.a).push_back({link.b, &link});
    links_of_.at(link.b).push_back({link.a, &link});
    fill_queue(link, link.a);
    fill_queue(link, link.b);
  }

  void link_down(NodeId a, NodeId b) {
    const auto it = links_.find(ordered(a, b));
    if (it == links_.end()) return;
    if (it->second.current) ++counters_.aborted;
    auto drop = [&](NodeId n, NodeId peer) {
      auto& v = links_of_[n];
      v.erase(std::find_if(v.begin(), v.end(), [peer](const PeerLink& p) { return p.first == peer; }));
    };
    drop(it->second.a, it->second.b);
    drop(it->second.b, it->second.a);
    links_.erase(it);
  }

  /// Moves `rate * dt` bits on every live link, in node-pair order.
  void step(double dt, double now) {
    if (std::isinf(params_.rate_bps)) {
      flush(now);
      return;
    }
    const double budget = params_.rate_bps * dt / 8.0;
    for (auto& [key, link] : links_) run_link(link, budget, now);
  }

  /// Empties every queue instantly; repeats until nothing moves.
  void flush(double now) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (auto& [key, link] : links_) moved = run_link(link, std::numeric_limits<double>::infinity(), now) || moved;
    }
  }

  /// Drops expired messages everywhere.
  void expire(double now) {
    for (auto& b : buffers_) counters_.expired += b.expire(now).size();
  }

 private:
  void account(const AdmitResult& r) {
    counters_.evicted += r.evicted.size();
    counters_.expired += r.expired.size();
  }

  /// Queues on `link` everything `sender` holds that the peer has not seen:
  /// messages for the peer first, then oldest-created first.
  void fill_queue(ContactLink& link, NodeId sender) {
    const NodeId peer = link.peer_of(sender);
    const Buffer& from = buffers_[sender];
    const Buffer& to = buffers_[peer];
    std::vector<const Message*> offer;
    for (const auto& h : from.held())
      if (!to.knows(h.message.id)) offer.push_back(&h.message);
    std::stable_sort(offer.begin(), offer.end(), [peer](const Message* x, const Message* y) {
      const bool dx = x->destination == peer, dy = y->destination == peer;
      if (dx != dy) return dx;
      if (x->created_at != y->created_at) return x->created_at < y->created_at;
      return x->id < y->id;
    });
    auto& q = link.queue_from(sender);
    for (const Message* m : offer) q.push_back(m->id);
  }

  /// Offers a newly acquired message on every live link of `holder`.
  void offer_everywhere(NodeId holder, MessageId id) {
    const Message& m = messages_[id];
    for (const auto& [peer, link] : links_of_[holder]) {
      if (buffers_[peer].knows(id)) continue;
      auto& q = link->queue_from(holder);
      if (m.destination == peer) {
        q.push_front(id);
      } else {
        q.push_back(id);
      }
    }
  }

  /// Next message worth sending, alternating sides. Stale entries (sender no
  /// longer holds it, receiver already has it) are discarded.
  std::optional<ContactLink::InFlight> pick(ContactLink& link) {
    for (int attempt = 0; attempt < 2; ++attempt) {
      const NodeId sender = link.a_turn ? link.a : link.b;
      auto& q = link.queue_from(sender);
      const NodeId peer = link.peer_of(sender);
      while (!q.empty()) {
        const MessageId id = q.front();
        q.pop_front();
        if (buffers_[sender].holds(id) && !buffers_[peer].knows(id)) {
          link.a_turn = !link.a_turn;
          return ContactLink::InFlight{id, sender == link.a, static_cast<double>(messages_[id].size)};
        }
      }
      link.a_turn = !link.a_turn;
    }
    return std::nullopt;
  }

  /// Spends up to `budget` bytes on one link. Returns true if any copy
  /// completed.
  bool run_link(ContactLink& link, double budget, double now) {
    bool completed = false;
    while (budget > 0.0) {
      if (!link.current) {
        link.current = pick(link);
        if (!link.current) break;
      }
      auto& cur = *link.current;
      const double spend = std::min(budget, cur.bytes_remaining);
      budget -= spend;
      cur.bytes_remaining -= spend;
      if (cur.bytes_remaining > 1e-6) break;
      const ContactLink::InFlight done = cur;
      link.current.reset();
      const NodeId sender = done.a_to_b ? link.a : link.b;
      const NodeId receiver = done.a_to_b ? link.b : link.a;
      completed = receive(sender, receiver, done.message, now) || completed;
    }
    return completed;
  }

  bool receive(NodeId sender, NodeId receiver, MessageId id, double now) {
    const Message& m = messages_[id];
    if (!buffers_[sender].holds(id) || buffers_[receiver].knows(id) || m.expired(now)) return false;
    ++counters_.relayed;
    const int hops = buffers_[sender].find(id)->hops + 1;
    if (receiver == m.destination) {
      buffers_[receiver].mark_delivered(id);
      if (!delivered_at_[id]) {
        delivered_at_[id] = now;
        deliveries_.push_back({id, now, hops});
        ++counters_.delivered;
      }
      return true;
    }
    const auto r = buffers_[receiver].admit(m, now, hops);
    account(r);
    if (!r.admitted()) {
      ++counters_.rejected;
      return false;
    }
    offer_everywhere(receiver, id);
    return true;
  }

  NetworkParams params_;
  std::vector<Buffer> buffers_;
  std::vector<Message> messages_;
  std::vector<std::optional<double>> delivered_at_;
  std::vector<Delivery> deliveries_;
  std::map<NodePair, ContactLink> links_;
  using PeerLink = std::pair<NodeId, ContactLink*>;  // map nodes are stable
  std::vector<std::vector<PeerLink>> links_of_;
  NetworkCounters counters_;
};

}  // namespace natdis::dtn
