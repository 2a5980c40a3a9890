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
#include <functional>
#include <list>
#include <unordered_map>
#include <optional>
#include <queue>
#include <string_view>
#include <vector>

#include "natdis/dtn/message.hpp"

namespace natdis::dtn {

enum class DropPolicy { kOldestReceived, kRejectNew };

inline std::optional<DropPolicy> parse_drop_policy(std::string_view s) {
  if (s == "oldest_received") return DropPolicy::kOldestReceived;
  if (s == "reject_new") return DropPolicy::kRejectNew;
  return std::nullopt;
}

inline std::string_view to_string(DropPolicy p) {
  return p == DropPolicy::kOldestReceived ? "oldest_received" : "reject_new";
}

enum class AdmitStatus { kAdmitted, kDuplicate, kOversize, kNoSpace };

struct AdmitResult {
  AdmitStatus status = AdmitStatus::kAdmitted;
  std::vector<MessageId> evicted;
  std::vector<MessageId> expired;

  bool admitted() const { return status == AdmitStatus::kAdmitted; }
};

struct HeldMessage {
  Message message;
  double received_at = 0.0;
  int hops = 0;  // relays between the source and this copy
};

/// Message store of one node. Messages are kept in receive order. A node
/// never evicts a message it originated.
class Buffer {
 public:
  Buffer() = default;
  Buffer(NodeId owner, std::int64_t capacity, DropPolicy policy = DropPolicy::kOldestReceived)
      : owner_(owner), capacity_(capacity), policy_(policy) {}

  NodeId owner() const { return owner_; }
  std::int64_t capacity() const { return capacity_; }
  std::int64_t used() const { return used_; }
  double fill_fraction() const { return capacity_ > 0 ? static_cast<double>(used_) / static_cast<double>(capacity_) : 0.0; }
  std::size_t size() const { return held_.size(); }
  const std::list<HeldMessage>& held() const { return held_; }

  bool holds(MessageId id) const { return id < holds_.size() && holds_[id]; }
  /// Held here, or delivered here as the destination.
  bool knows(MessageId id) const { return holds(id) || (id < delivered_.size() && delivered_[id]); }
  void mark_delivered(MessageId id) { set(delivered_, id, true); }

  const HeldMessage* find(MessageId id) const {
    const auto it = index_.find(id);
    return it == index_.end() ? nullptr : &*it->second;
  }

  AdmitResult admit(const Message& m, double now, int hops = 0) {
    AdmitResult r;
    if (m.size > capacity_) {
      r.status = AdmitStatus::kOversize;
      return r;
    }
    if (knows(m.id)) {
      r.status = AdmitStatus::kDuplicate;
      return r;
    }
    r.expired = expire(now);
    if (used_ + m.size > capacity_) {
      if (policy_ == DropPolicy::kRejectNew) {
        r.status = AdmitStatus::kNoSpace;
        return r;
      }
      // Check first that enough non-protected bytes exist, so a rejected
      // message does not cost anything.
      if (own_bytes_ + m.size > capacity_) {
        r.status = AdmitStatus::kNoSpace;
        return r;
      }
      while (used_ + m.size > capacity_) {
        const auto it = std::find_if(held_.begin(), held_.end(),
                                     [&](const HeldMessage& h) { return h.message.source != owner_; });
        r.evicted.push_back(it->message.id);
        erase(it);
      }
    }
    held_.push_back({m, now, hops});
    index_.emplace(m.id, std::prev(held_.end()));
    used_ += m.size;
    if (m.source == owner_) own_bytes_ += m.size;
    set(holds_, m.id, true);
    expiry_.push({m.created_at + m.ttl, m.id});
    return r;
  }

  /// Drops messages older than their TTL; returns their ids.
  std::vector<MessageId> expire(double now) {
    std::vector<MessageId> out;
    // The heap may hold entries for copies evicted since; those are skipped.
    while (!expiry_.empty() && now > expiry_.top().first) {
      const MessageId id = expiry_.top().second;
      const auto it = index_.find(id);
      if (it != index_.end() && !it->second->message.expired(now)) break;  // rounding at the boundary
      expiry_.pop();
      if (it == index_.end()) continue;
      out.push_back(id);
      erase(it->second);
    }
    return out;
  }

  bool remove(MessageId id) {
    const auto it = index_.find(id);
    if (it == index_.end()) return false;
    erase(it->second);
    return true;
  }

 private:
  static void set(std::vector<bool>& v, MessageId id, bool value) {
    if (id >= v.size()) v.resize(std::max<std::size_t>(id + 1, v.size() * 2), false);
    v[id] = value;
  }

  void erase(std::list<HeldMessage>::iterator it) {
    used_ -= it->message.size;
    if (it->message.source == owner_) own_bytes_ -= it->message.size;
    set(holds_, it->message.id, false);
    index_.erase(it->message.id);
    held_.erase(it);
  }

  NodeId owner_ = 0;
  std::int64_t capacity_ = 20'000'000;
  DropPolicy policy_ = DropPolicy::kOldestReceived;
  std::int64_t used_ = 0;
  std::list<HeldMessage> held_;  // receive order
  std::unordered_map<MessageId, std::list<HeldMessage>::iterator> index_;
  std::int64_t own_bytes_ = 0;  // bytes originated here, never evicted
  using Expiry = std::pair<double, MessageId>;
  std::priority_queue<Expiry, std::vector<Expiry>, std::greater<>> expiry_;
  std::vector<bool> holds_;
  std::vector<bool> delivered_;
};

}  // namespace natdis::dtn
