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

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "natdis/core/error.hpp"
#include "natdis/core/format.hpp"
#include "natdis/geo/map_graph.hpp"

namespace natdis::geo {

enum class PoiKind { kAirportRdc, kOsocc, kTownHall, kBaseCamp, kHospital, kFoodWater, kUnHotel, kHomeAnchor };

inline constexpr std::array<std::string_view, 8> kPoiKindNames = {
    "airport_rdc", "osocc", "town_hall", "base_camp", "hospital", "food_water", "un_hotel", "home_anchor"};

inline std::string_view to_string(PoiKind k) { return kPoiKindNames[static_cast<std::size_t>(k)]; }

inline std::optional<PoiKind> parse_poi_kind(std::string_view s) {
  for (std::size_t i = 0; i < kPoiKindNames.size(); ++i) {
    if (kPoiKindNames[i] == s) return static_cast<PoiKind>(i);
  }
  return std::nullopt;
}

/// Kinds the Natural Disaster model cannot run without.
inline constexpr std::array<PoiKind, 6> kRequiredNdKinds = {PoiKind::kAirportRdc, PoiKind::kOsocc,    PoiKind::kBaseCamp,
                                                            PoiKind::kHospital,   PoiKind::kFoodWater, PoiKind::kTownHall};

struct Poi {
  std::string name;
  PoiKind kind = PoiKind::kHomeAnchor;
  Point2D declared;          // as written in the file
  GraphPosition location;    // snapped onto the street graph
  std::optional<int> capacity;
};

/// Parses `<kind> <name> <x> <y> [key=value ...]` lines and snaps each POI
/// onto `graph`. Only `capacity=<int>` is recognized as an attribute.
inline std::vector<Poi> load_pois(std::string_view text, const MapGraph& graph, bool require_nd_kinds) {
  std::vector<Poi> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    while (!line.empty()) {
      const auto sp = line.find_first_of(" \t");
      fields.push_back(line.substr(0, sp));
      line = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp));
    }
    auto fail = [&](const std::string& what) { throw ParseError("poi", line_no, what); };
    if (fields.size() < 4) fail("expected '<kind> <name> <x> <y> [key=value ...]'");

    Poi poi;
    const auto kind = parse_poi_kind(fields[0]);
    if (!kind) fail("unknown POI kind '" + std::string(fields[0]) + "'");
    poi.kind = *kind;
    poi.name = std::string(fields[1]);
    if (!parse_double(fields[2], poi.declared.x) || !parse_double(fields[3], poi.declared.y) ||
        !std::isfinite(poi.declared.x) || !std::isfinite(poi.declared.y)) {
      fail("malformed coordinates");
    }
    for (std::size_t i = 4; i < fields.size(); ++i) {
      const auto eq = fields[i].find('=');
      if (eq == std::string_view::npos) fail("malformed attribute '" + std::string(fields[i]) + "'");
      const auto key = fields[i].substr(0, eq);
      const auto value = fields[i].substr(eq + 1);
      if (key != "capacity") fail("unknown attribute '" + std::string(key) + "'");
      int cap = 0;
      if (!parse_int(value, cap) || cap < 0) fail("capacity must be a non-negative integer");
      poi.capacity = cap;
    }
    poi.location = snap_point(graph, poi.declared);
    out.push_back(std::move(poi));
  }

  if (require_nd_kinds) {
    for (PoiKind k : kRequiredNdKinds) {
      bool found = false;
      for (const auto& p : out) found = found || p.kind == k;
      if (!found) throw ValidationError("POI file is missing required kind '" + std::string(to_string(k)) + "'");
    }
  }
  return out;
}

/// Indexed view over a POI list.
class PoiSet {
 public:
  PoiSet() = default;
  explicit PoiSet(std::vector<Poi> pois) : pois_(std::move(pois)) {
    for (std::size_t i = 0; i < pois_.size(); ++i) by_kind_[static_cast<std::size_t>(pois_[i].kind)].push_back(i);
  }

  const std::vector<Poi>& all() const { return pois_; }
  const Poi& operator[](std::size_t i) const { return pois_[i]; }
  std::size_t size() const { return pois_.size(); }

  /// Indices of POIs of one kind, in file order.
  const std::vector<std::size_t>& of(PoiKind k) const { return by_kind_[static_cast<std::size_t>(k)]; }

  /// First POI of a kind, or nullptr.
  const Poi* first(PoiKind k) const {
    const auto& v = of(k);
    return v.empty() ? nullptr : &pois_[v.front()];
  }

  const Poi& require(PoiKind k) const {
    if (const Poi* p = first(k)) return *p;
    throw ValidationError("missing POI kind '" + std::string(to_string(k)) + "'");
  }

 private:
  std::vector<Poi> pois_;
  std::array<std::vector<std::size_t>, kPoiKindNames.size()> by_kind_;
};

}  // namespace natdis::geo
