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
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "natdis/core/error.hpp"
#include "natdis/core/format.hpp"
#include "natdis/core/random.hpp"
#include "natdis/mobility/role.hpp"

namespace natdis::mobility {

struct ScheduleBlock {
  double start_hour = 0.0;
  double end_hour = 24.0;
  Activity activity = Activity::kSleep;
  // One food-distribution visit is carved out of this block each day.
  bool food_visit = false;

  friend bool operator==(const ScheduleBlock&, const ScheduleBlock&) = default;
};

/// Blocks of one day, in order, tiling [0, 24).
using DayTable = std::vector<ScheduleBlock>;

inline void validate_table(const DayTable& t) {
  if (t.empty()) throw ConfigError("schedule table is empty");
  if (t.front().start_hour != 0.0 || t.back().end_hour != 24.0)
    throw ConfigError("schedule table must start at 0 and end at 24");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i].start_hour < t[i].end_hour)) throw ConfigError("schedule block has non-positive length");
    if (i > 0 && t[i].start_hour != t[i - 1].end_hour) throw ConfigError("schedule blocks must be contiguous");
  }
}

/// "sleep 0-7, city_roaming+food 7-21, neighborhood 21-24"
inline DayTable parse_table(std::string_view text) {
  DayTable out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) throw ConfigError("empty schedule block");
    const auto sp = item.find(' ');
    if (sp == std::string_view::npos) throw ConfigError("schedule block needs '<activity> <start>-<end>'");
    std::string_view name = item.substr(0, sp);
    const auto range = trim(item.substr(sp));
    ScheduleBlock b;
    if (name.ends_with("+food")) {
      b.food_visit = true;
      name.remove_suffix(5);
    }
    const auto act = parse_activity(name);
    if (!act) throw ConfigError("unknown activity '" + std::string(name) + "'");
    b.activity = *act;
    const auto dash = range.find('-');
    if (dash == std::string_view::npos || !parse_double(range.substr(0, dash), b.start_hour) ||
        !parse_double(range.substr(dash + 1), b.end_hour)) {
      throw ConfigError("malformed hour range '" + std::string(range) + "'");
    }
    out.push_back(b);
  }
  validate_table(out);
  return out;
}

inline std::string format_table(const DayTable& t) {
  std::string out;
  for (const auto& b : t) {
    if (!out.empty()) out += ", ";
    out += to_string(b.activity);
    if (b.food_visit) out += "+food";
    out += ' ' + format_number(b.start_hour) + '-' + format_number(b.end_hour);
  }
  return out;
}

struct RoleSchedule {
  DayTable first_day;   // day 0, the day of the disaster
  DayTable later_days;  // days 1 and onwards
};

/// Schedule tables for all roles.
class ScheduleBook {
 public:
  static ScheduleBook defaults() {
    using A = Activity;
    auto t = [](std::initializer_list<ScheduleBlock> b) { return DayTable(b); };
    ScheduleBook book;
    book.set(Role::kHealthyLocal,
             {t({{0, 7, A::kSleep}, {7, 16, A::kNeighborhood}, {16, 20, A::kFoodDistribution}, {20, 24, A::kNeighborhood}}),
              t({{0, 7, A::kSleep}, {7, 21, A::kCityRoaming, true}, {21, 24, A::kNeighborhood}})});
    book.set(Role::kInjuredLocal, {t({{0, 11, A::kSleep}, {11, 20, A::kHospital}, {20, 24, A::kNeighborhood}}),
                                   t({{0, 7, A::kSleep}, {7, 21, A::kHospital}, {21, 24, A::kNeighborhood}})});
    const DayTable responders_day0 =
        t({{0, 4, A::kParked}, {4, 15, A::kAirportRdc}, {15, 18, A::kOsoccMeeting}, {18, 24, A::kBaseCamp}});
    book.set(Role::kDrt, {responders_day0, t({{0, 7, A::kSleep},
                                              {7, 10, A::kOsoccMeeting},
                                              {10, 21, A::kCityRoaming},
                                              {21, 24, A::kNeighborhood}})});
    book.set(Role::kUsrt, {responders_day0, t({{0, 7, A::kSleep},
                                               {7, 10, A::kOsoccMeeting},
                                               {10, 21, A::kStreetSearch},
                                               {21, 24, A::kNeighborhood}})});
    book.set(Role::kScientist, {t({{0, 7, A::kSleep}, {7, 20, A::kNeighborhood}, {20, 24, A::kNeighborhood}}),
                                t({{0, 7, A::kSleep}, {7, 21, A::kCityRoaming}, {21, 24, A::kNeighborhood}})});
    book.set(Role::kUnOfficial, {t({{0, 4, A::kParked}, {4, 17, A::kAirportRdc}, {17, 24, A::kOsoccMeeting}}),
                                 t({{0, 7, A::kSleep},
                                    {7, 10, A::kOsoccMeeting},
                                    {10, 12, A::kTownHall},
                                    {12, 21, A::kReconnaissance},
                                    {21, 24, A::kNeighborhood}})});
    book.set(Role::kGovOfficial, {t({{0, 7, A::kSleep}, {7, 14, A::kAirportRdc}, {14, 20, A::kTownHall}, {20, 24, A::kNeighborhood}}),
                                  t({{0, 7, A::kSleep},
                                     {7, 10, A::kTownHall},
                                     {10, 12, A::kOsoccMeeting},
                                     {12, 21, A::kReconnaissance},
                                     {21, 24, A::kNeighborhood}})});
    return book;
  }

  void set(Role r, RoleSchedule s) {
    validate_table(s.first_day);
    validate_table(s.later_days);
    schedules_[index(r)] = std::move(s);
  }

  const RoleSchedule& of(Role r) const { return schedules_[index(r)]; }
  const DayTable& table(Role r, int day) const { return day == 0 ? of(r).first_day : of(r).later_days; }

 private:
  std::array<RoleSchedule, kRoleCount> schedules_;
};

/// Fraction of each neighboring block a boundary may move into, so that no
/// block shrinks below 20% of its nominal length.
inline constexpr double kMaxJitterShare = 0.4;

/// One offset (hours) per inner boundary of `t`, uniform in [-max, max] and
/// capped so blocks never invert.
inline std::vector<double> draw_jitter(const DayTable& t, Rng& rng, double max_jitter_hours) {
  std::vector<double> out;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double u = rng.uniform(-max_jitter_hours, max_jitter_hours);
    const double lo = -kMaxJitterShare * (t[i - 1].end_hour - t[i - 1].start_hour);
    const double hi = kMaxJitterShare * (t[i].end_hour - t[i].start_hour);
    out.push_back(std::clamp(u, lo, hi));
  }
  return out;
}

inline DayTable apply_jitter(const DayTable& t, std::span<const double> offsets) {
  DayTable out = t;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double boundary = t[i].start_hour + (i - 1 < offsets.size() ? offsets[i - 1] : 0.0);
    out[i - 1].end_hour = boundary;
    out[i].start_hour = boundary;
  }
  return out;
}

/// Activity scheduled at `hour_of_day` in a table that tiles [0, 24).
inline Activity activity_at(const DayTable& t, double hour_of_day) {
  for (const auto& b : t)
    if (hour_of_day < b.end_hour) return b.activity;
  return t.back().activity;
}

/// The scheduled activity for `role` on `day` at `hour_of_day`, with the given
/// per-boundary jitter. Day 0 uses the first-day table, later days the other.
inline Activity nd_active_block(const ScheduleBook& book, Role role, int day, double hour_of_day,
                                std::span<const double> jitter) {
  return activity_at(apply_jitter(book.table(role, day), jitter), hour_of_day);
}

/// Concrete plan for one node-day: jittered table with any food visit carved
/// out of its host block. Still tiles [0, 24).
inline DayTable build_day_plan(const DayTable& table, Rng& rng, double max_jitter_hours, double food_visit_hours) {
  const auto jitter = draw_jitter(table, rng, max_jitter_hours);
  DayTable plan;
  for (const auto& b : apply_jitter(table, jitter)) {
    if (!b.food_visit) {
      plan.push_back(b);
      continue;
    }
    const double len = b.end_hour - b.start_hour;
    const double dur = std::min(food_visit_hours, len);
    const double start = rng.uniform(b.start_hour, b.end_hour - dur);
    ScheduleBlock before{b.start_hour, start, b.activity};
    ScheduleBlock food{start, start + dur, Activity::kFoodDistribution};
    ScheduleBlock after{start + dur, b.end_hour, b.activity};
    if (before.end_hour > before.start_hour) plan.push_back(before);
    plan.push_back(food);
    if (after.end_hour > after.start_hour) plan.push_back(after);
  }
  return plan;
}

}  // namespace natdis::mobility
