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
#include <string>

namespace natdis::dtn {

using NodeId = std::uint32_t;
using MessageId = std::uint64_t;

struct Message {
  MessageId id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  std::int64_t size = 0;  // bytes
  double created_at = 0.0;
  double ttl = 21600.0;

  /// Expired strictly after `ttl` seconds of age.
  bool expired(double now) const { return now - created_at > ttl; }
};

inline std::string message_name(MessageId id) { return "M" + std::to_string(id); }

}  // namespace natdis::dtn
