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
#include <optional>
#include <string_view>

namespace natdis::mobility {

enum class Role { kHealthyLocal, kInjuredLocal, kDrt, kUsrt, kScientist, kUnOfficial, kGovOfficial };

inline constexpr std::size_t kRoleCount = 7;
inline constexpr std::array<Role, kRoleCount> kAllRoles = {Role::kHealthyLocal, Role::kInjuredLocal, Role::kDrt,
                                                           Role::kUsrt,         Role::kScientist,    Role::kUnOfficial,
                                                           Role::kGovOfficial};
inline constexpr std::array<std::string_view, kRoleCount> kRoleNames = {
    "healthy_local", "injured_local", "drt", "usrt", "scientist", "un_official", "gov_official"};

inline std::string_view to_string(Role r) { return kRoleNames[static_cast<std::size_t>(r)]; }
inline std::size_t index(Role r) { return static_cast<std::size_t>(r); }

inline std::optional<Role> parse_role(std::string_view s) {
  for (std::size_t i = 0; i < kRoleCount; ++i)
    if (kRoleNames[i] == s) return static_cast<Role>(i);
  return std::nullopt;
}

/// Roles that reach the area through the airport and its reception centre.
inline bool arrives_by_air(Role r) { return r == Role::kDrt || r == Role::kUsrt || r == Role::kUnOfficial; }

enum class Activity {
  kSleep,
  kNeighborhood,
  kFoodDistribution,
  kHospital,
  kAirportRdc,
  kOsoccMeeting,
  kTownHall,
  kBaseCamp,
  kCityRoaming,
  kStreetSearch,
  kReconnaissance,
  kParked,
};

inline constexpr std::array<std::string_view, 12> kActivityNames = {
    "sleep",       "neighborhood", "food_distribution", "hospital",      "airport_rdc",    "osocc_meeting",
    "town_hall",   "base_camp",    "city_roaming",      "street_search", "reconnaissance", "parked"};

inline std::string_view to_string(Activity a) { return kActivityNames[static_cast<std::size_t>(a)]; }

inline std::optional<Activity> parse_activity(std::string_view s) {
  for (std::size_t i = 0; i < kActivityNames.size(); ++i)
    if (kActivityNames[i] == s) return static_cast<Activity>(i);
  return std::nullopt;
}

}  // namespace natdis::mobility
