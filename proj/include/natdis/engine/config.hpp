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
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "natdis/core/error.hpp"
#include "natdis/core/format.hpp"
#include "natdis/dtn/buffer.hpp"
#include "natdis/dtn/traffic.hpp"
#include "natdis/mobility/natural_disaster.hpp"

namespace natdis::engine {

enum class MobilityModel { kRwp, kMap, kNd };
enum class InactivePolicy { kParkedVisible, kHidden };
enum class BufferStatistic { kMean, kMedian };

inline std::string_view to_string(MobilityModel m) {
  switch (m) {
    case MobilityModel::kRwp:
      return "rwp";
    case MobilityModel::kMap:
      return "map";
    case MobilityModel::kNd:
      return "nd";
  }
  return "nd";
}

/// Every tunable of a scenario. Defaults are the full-scale settings.
struct ScenarioConfig {
  // [scenario]
  std::string name = "scenario";
  std::filesystem::path map_path;
  std::filesystem::path poi_path;
  double duration = 604800.0;
  double step_dt = 1.0;
  double width = 5000.0;
  double height = 7000.0;
  int nodes = 500;
  mobility::RoleCounts role_counts = {300, 60, 60, 30, 10, 20, 20};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  InactivePolicy inactive_policy = InactivePolicy::kParkedVisible;

  // [mobility]
  MobilityModel model = MobilityModel::kNd;
  mobility::RoleSpeeds speeds;
  mobility::PauseRange pause{0.0, 120.0};
  double snap_tolerance = 0.5;
  bool prune_components = true;

  // [nd]
  mobility::NdParams nd;

  // [traffic]
  bool traffic_enabled = true;
  dtn::TrafficParams traffic;

  // [radio]
  double radio_range = 10.0;
  double phy_rate = 2'000'000.0;

  // [routing]
  std::string protocol = "epidemic";
  std::int64_t buffer_size = 20'000'000;
  dtn::DropPolicy drop_policy = dtn::DropPolicy::kOldestReceived;

  // [reports]
  bool density_enabled = true;
  double density_cell = 10.0;
  double density_interval = 60.0;
  bool buffer_enabled = true;
  double buffer_interval = 300.0;
  BufferStatistic buffer_statistic = BufferStatistic::kMean;
  double cdf_bucket = 60.0;

  // Directory that relative paths are resolved against.
  std::filesystem::path base_dir = ".";

  std::filesystem::path resolve(const std::filesystem::path& p) const {
    if (p.empty() || p.is_absolute()) return p;
    return base_dir / p;
  }
};

/// One `section.key` entry: how to read and write it on a config.
struct ConfigKey {
  std::string name;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;

  std::string_view section() const { return std::string_view(name).substr(0, name.find('.')); }
  std::string_view key() const { return std::string_view(name).substr(name.find('.') + 1); }
};

namespace detail {

inline std::string bad_value(const std::string& key, std::string_view value) {
  return "invalid value '" + std::string(value) + "' for " + key;
}

inline ConfigKey number(std::string name, double ScenarioConfig::*field) {
  return {name,
          [name, field](ScenarioConfig& c, std::string_view v) {
            if (!parse_double(v, c.*field)) throw ConfigError(bad_value(name, v));
          },
          [field](const ScenarioConfig& c) { return format_number(c.*field); }};
}

/// A double reached through an accessor, for nested parameter structs.
inline ConfigKey number(std::string name, std::function<double&(ScenarioConfig&)> ref) {
  return {name,
          [name, ref](ScenarioConfig& c, std::string_view v) {
            if (!parse_double(v, ref(c))) throw ConfigError(bad_value(name, v));
          },
          [ref](const ScenarioConfig& c) { return format_number(ref(const_cast<ScenarioConfig&>(c))); }};
}

template <typename Int>
ConfigKey integer(std::string name, std::function<Int&(ScenarioConfig&)> ref) {
  return {name,
          [name, ref](ScenarioConfig& c, std::string_view v) {
            if (!parse_int(v, ref(c))) throw ConfigError(bad_value(name, v));
          },
          [ref](const ScenarioConfig& c) { return std::to_string(ref(const_cast<ScenarioConfig&>(c))); }};
}

inline bool parse_bool(std::string_view v, bool& out) {
  v = trim(v);
  if (v == "true" || v == "on" || v == "yes" || v == "1") {
    out = true;
    return true;
  }
  if (v == "false" || v == "off" || v == "no" || v == "0") {
    out = false;
    return true;
  }
  return false;
}

inline ConfigKey flag(std::string name, bool ScenarioConfig::*field) {
  return {name,
          [name, field](ScenarioConfig& c, std::string_view v) {
            if (!parse_bool(v, c.*field)) throw ConfigError(bad_value(name, v));
          },
          [field](const ScenarioConfig& c) { return std::string(c.*field ? "true" : "false"); }};
}

inline ConfigKey path(std::string name, std::filesystem::path ScenarioConfig::*field) {
  return {name, [field](ScenarioConfig& c, std::string_view v) { c.*field = std::string(trim(v)); },
          [field](const ScenarioConfig& c) {
            if ((c.*field).empty()) return std::string();
            return std::filesystem::absolute(c.resolve(c.*field)).lexically_normal().generic_string();
          }};
}

inline std::vector<std::uint64_t> parse_seed_list(std::string_view v) {
  std::vector<std::uint64_t> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    std::uint64_t s = 0;
    if (!parse_int(v.substr(0, comma), s)) throw ConfigError("invalid seed list '" + std::string(v) + "'");
    out.push_back(s);
    v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
  }
  if (out.empty()) throw ConfigError("seed list is empty");
  return out;
}

inline std::string format_seed_list(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (auto s : seeds) out += (out.empty() ? "" : ",") + std::to_string(s);
  return out;
}

}  // namespace detail

/// All keys in the order they are documented and dumped.
inline const std::vector<ConfigKey>& config_keys() {
  using namespace detail;
  using C = ScenarioConfig;
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    k.push_back({"scenario.name", [](C& c, std::string_view v) { c.name = std::string(trim(v)); },
                 [](const C& c) { return c.name; }});
    k.push_back(path("scenario.map", &C::map_path));
    k.push_back(path("scenario.pois", &C::poi_path));
    k.push_back(number("scenario.duration", &C::duration));
    k.push_back(number("scenario.step_dt", &C::step_dt));
    k.push_back(number("scenario.width", &C::width));
    k.push_back(number("scenario.height", &C::height));
    k.push_back(integer<int>("scenario.nodes", [](C& c) -> int& { return c.nodes; }));
    for (mobility::Role r : mobility::kAllRoles) {
      k.push_back(integer<int>("scenario." + std::string(mobility::to_string(r)),
                               [r](C& c) -> int& { return c.role_counts[mobility::index(r)]; }));
    }
    k.push_back({"scenario.seeds", [](C& c, std::string_view v) { c.seeds = parse_seed_list(v); },
                 [](const C& c) { return format_seed_list(c.seeds); }});
    k.push_back({"scenario.inactive_policy",
                 [](C& c, std::string_view v) {
                   v = trim(v);
                   if (v == "parked_visible") {
                     c.inactive_policy = InactivePolicy::kParkedVisible;
                   } else if (v == "hidden") {
                     c.inactive_policy = InactivePolicy::kHidden;
                   } else {
                     throw ConfigError(bad_value("scenario.inactive_policy", v));
                   }
                 },
                 [](const C& c) {
                   return std::string(c.inactive_policy == InactivePolicy::kHidden ? "hidden" : "parked_visible");
                 }});

    k.push_back({"mobility.model",
                 [](C& c, std::string_view v) {
                   v = trim(v);
                   if (v == "rwp") {
                     c.model = MobilityModel::kRwp;
                   } else if (v == "map") {
                     c.model = MobilityModel::kMap;
                   } else if (v == "nd") {
                     c.model = MobilityModel::kNd;
                   } else {
                     throw ConfigError(bad_value("mobility.model", v));
                   }
                 },
                 [](const C& c) { return std::string(to_string(c.model)); }});
    k.push_back(number("mobility.speed_min", [](C& c) -> double& { return c.speeds.walking.min; }));
    k.push_back(number("mobility.speed_max", [](C& c) -> double& { return c.speeds.walking.max; }));
    k.push_back(number("mobility.injured_speed_min", [](C& c) -> double& { return c.speeds.injured.min; }));
    k.push_back(number("mobility.injured_speed_max", [](C& c) -> double& { return c.speeds.injured.max; }));
    k.push_back(number("mobility.search_speed_min", [](C& c) -> double& { return c.speeds.usrt_search.min; }));
    k.push_back(number("mobility.search_speed_max", [](C& c) -> double& { return c.speeds.usrt_search.max; }));
    k.push_back(number("mobility.pause_min", [](C& c) -> double& { return c.pause.min; }));
    k.push_back(number("mobility.pause_max", [](C& c) -> double& { return c.pause.max; }));
    k.push_back(number("mobility.snap_tolerance", &C::snap_tolerance));
    k.push_back(flag("mobility.prune_components", &C::prune_components));

    k.push_back(number("nd.neighborhood_radius", [](C& c) -> double& { return c.nd.neighborhood_radius; }));
    k.push_back(number("nd.immobile_injured_fraction", [](C& c) -> double& { return c.nd.immobile_injured_fraction; }));
    k.push_back(number("nd.volunteer_fraction", [](C& c) -> double& { return c.nd.volunteer_fraction; }));
    k.push_back(integer<int>("nd.volunteer_day", [](C& c) -> int& { return c.nd.volunteer_day; }));
    k.push_back(number("nd.jitter_hours", [](C& c) -> double& { return c.nd.jitter_hours; }));
    k.push_back(number("nd.prepositioned_fraction", [](C& c) -> double& { return c.nd.prepositioned_fraction; }));
    k.push_back(number("nd.prepositioned_hour", [](C& c) -> double& { return c.nd.prepositioned_hour; }));
    k.push_back(integer<int>("nd.arrival_first_day", [](C& c) -> int& { return c.nd.arrival_first_day; }));
    k.push_back(integer<int>("nd.arrival_last_day", [](C& c) -> int& { return c.nd.arrival_last_day; }));
    k.push_back(number("nd.daylight_start_hour", [](C& c) -> double& { return c.nd.daylight_start_hour; }));
    k.push_back(number("nd.daylight_end_hour", [](C& c) -> double& { return c.nd.daylight_end_hour; }));
    k.push_back(number("nd.un_arrival_hour", [](C& c) -> double& { return c.nd.un_arrival_hour; }));
    k.push_back(integer<int>("nd.usrt_departure_day", [](C& c) -> int& { return c.nd.usrt_departure_day; }));
    k.push_back(number("nd.rdc_dwell", [](C& c) -> double& { return c.nd.rdc_dwell; }));
    k.push_back(number("nd.osocc_briefing", [](C& c) -> double& { return c.nd.osocc_briefing; }));
    k.push_back(number("nd.food_visit_hours", [](C& c) -> double& { return c.nd.food_visit_hours; }));
    k.push_back(number("nd.roam_pause_min", [](C& c) -> double& { return c.nd.roam_pause.min; }));
    k.push_back(number("nd.roam_pause_max", [](C& c) -> double& { return c.nd.roam_pause.max; }));
    k.push_back(number("nd.recon_pause_min", [](C& c) -> double& { return c.nd.recon_pause.min; }));
    k.push_back(number("nd.recon_pause_max", [](C& c) -> double& { return c.nd.recon_pause.max; }));
    k.push_back(number("nd.hospital_retry", [](C& c) -> double& { return c.nd.hospital_retry; }));
    for (mobility::Role r : mobility::kAllRoles) {
      for (int day : {0, 1}) {
        const std::string name =
            "nd.schedule." + std::string(mobility::to_string(r)) + (day == 0 ? ".day0" : ".day1");
        k.push_back({name,
                     [r, day](C& c, std::string_view v) {
                       auto s = c.nd.schedules.of(r);
                       (day == 0 ? s.first_day : s.later_days) = mobility::parse_table(v);
                       c.nd.schedules.set(r, std::move(s));
                     },
                     [r, day](const C& c) { return mobility::format_table(c.nd.schedules.table(r, day)); }});
      }
    }

    k.push_back(flag("traffic.enabled", &C::traffic_enabled));
    k.push_back(number("traffic.interval_min", [](C& c) -> double& { return c.traffic.interval_min; }));
    k.push_back(number("traffic.interval_max", [](C& c) -> double& { return c.traffic.interval_max; }));
    k.push_back(integer<std::int64_t>("traffic.size_min", [](C& c) -> std::int64_t& { return c.traffic.size_min; }));
    k.push_back(integer<std::int64_t>("traffic.size_max", [](C& c) -> std::int64_t& { return c.traffic.size_max; }));
    k.push_back(number("traffic.ttl", [](C& c) -> double& { return c.traffic.ttl; }));

    k.push_back(number("radio.range", &C::radio_range));
    k.push_back(number("radio.rate", &C::phy_rate));

    k.push_back({"routing.protocol",
                 [](C& c, std::string_view v) {
                   if (trim(v) != "epidemic") throw ConfigError(bad_value("routing.protocol", v) + " (only epidemic)");
                   c.protocol = "epidemic";
                 },
                 [](const C& c) { return c.protocol; }});
    k.push_back(integer<std::int64_t>("routing.buffer_size", [](C& c) -> std::int64_t& { return c.buffer_size; }));
    k.push_back({"routing.drop_policy",
                 [](C& c, std::string_view v) {
                   const auto p = dtn::parse_drop_policy(trim(v));
                   if (!p) throw ConfigError(bad_value("routing.drop_policy", v));
                   c.drop_policy = *p;
                 },
                 [](const C& c) { return std::string(dtn::to_string(c.drop_policy)); }});

    k.push_back(flag("reports.density", &C::density_enabled));
    k.push_back(number("reports.density_cell", &C::density_cell));
    k.push_back(number("reports.density_interval", &C::density_interval));
    k.push_back(flag("reports.buffer", &C::buffer_enabled));
    k.push_back(number("reports.buffer_interval", &C::buffer_interval));
    k.push_back({"reports.buffer_statistic",
                 [](C& c, std::string_view v) {
                   v = trim(v);
                   if (v == "mean") {
                     c.buffer_statistic = BufferStatistic::kMean;
                   } else if (v == "median") {
                     c.buffer_statistic = BufferStatistic::kMedian;
                   } else {
                     throw ConfigError(bad_value("reports.buffer_statistic", v));
                   }
                 },
                 [](const C& c) { return std::string(c.buffer_statistic == BufferStatistic::kMean ? "mean" : "median"); }});
    k.push_back(number("reports.cdf_bucket", &C::cdf_bucket));
    return k;
  }();
  return keys;
}

inline const ConfigKey* find_key(std::string_view name) {
  for (const auto& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

/// Applies `section.key=value`.
inline void apply_override(ScenarioConfig& c, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override must look like section.key=value");
  const auto name = trim(assignment.substr(0, eq));
  const auto* key = find_key(name);
  if (!key) throw ConfigError("unknown config key '" + std::string(name) + "'");
  key->set(c, trim(assignment.substr(eq + 1)));
}

/// Parses `[section]` headers and `key = value` lines over the defaults.
inline ScenarioConfig parse_config(std::string_view text, std::filesystem::path base_dir = ".") {
  ScenarioConfig c;
  c.base_dir = std::move(base_dir);
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("config", line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      bool known = false;
      for (const auto& k : config_keys()) known = known || k.section() == section;
      if (!known) throw ParseError("config", line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("config", line_no, "expected 'key = value'");
    if (section.empty()) throw ParseError("config", line_no, "key outside of any [section]");
    const std::string name = section + "." + std::string(trim(line.substr(0, eq)));
    const auto* key = find_key(name);
    if (!key) throw ParseError("config", line_no, "unknown key '" + name + "'");
    try {
      key->set(c, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ParseError("config", line_no, e.what());
    }
  }
  return c;
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto dir = path.parent_path();
  if (dir.empty()) dir = ".";
  return parse_config(ss.str(), dir);
}

/// Checks cross-field constraints; throws ConfigError naming the key.
inline void validate(const ScenarioConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(c.step_dt > 0.0, "scenario.step_dt must be positive");
  require(c.duration >= 0.0, "scenario.duration must not be negative");
  const double steps = c.duration / c.step_dt;
  require(std::abs(steps - std::round(steps)) <= 1e-9 * std::max(1.0, steps),
          "scenario.duration must be a multiple of scenario.step_dt");
  require(c.width > 0.0 && c.height > 0.0, "scenario.width and scenario.height must be positive");
  long sum = 0;
  for (int n : c.role_counts) {
    require(n >= 0, "role counts must not be negative");
    sum += n;
  }
  require(sum == c.nodes, "role counts sum to " + std::to_string(sum) + " but scenario.nodes is " +
                              std::to_string(c.nodes));
  require(!c.seeds.empty(), "scenario.seeds is empty");
  auto range_ok = [&](mobility::SpeedRange r, const std::string& what) {
    require(r.min > 0.0 && r.min <= r.max, what + " needs 0 < min <= max");
  };
  range_ok(c.speeds.walking, "mobility.speed_min/max");
  range_ok(c.speeds.injured, "mobility.injured_speed_min/max");
  range_ok(c.speeds.usrt_search, "mobility.search_speed_min/max");
  require(c.pause.min >= 0.0 && c.pause.min <= c.pause.max, "mobility.pause_min/max needs 0 <= min <= max");
  require(c.snap_tolerance >= 0.0, "mobility.snap_tolerance must not be negative");
  if (c.model != MobilityModel::kRwp) require(!c.map_path.empty(), "scenario.map is required for the map and nd models");
  if (c.model == MobilityModel::kNd) require(!c.poi_path.empty(), "scenario.pois is required for the nd model");

  const auto& nd = c.nd;
  auto fraction = [&](double f, const std::string& key) { require(f >= 0.0 && f <= 1.0, key + " must be in [0, 1]"); };
  fraction(nd.immobile_injured_fraction, "nd.immobile_injured_fraction");
  fraction(nd.volunteer_fraction, "nd.volunteer_fraction");
  fraction(nd.prepositioned_fraction, "nd.prepositioned_fraction");
  require(nd.neighborhood_radius > 0.0, "nd.neighborhood_radius must be positive");
  require(nd.jitter_hours >= 0.0, "nd.jitter_hours must not be negative");
  require(nd.arrival_first_day >= 0 && nd.arrival_first_day <= nd.arrival_last_day,
          "nd.arrival_first_day/last_day out of order");
  require(nd.daylight_start_hour >= 0.0 && nd.daylight_start_hour < nd.daylight_end_hour &&
              nd.daylight_end_hour <= 24.0,
          "nd.daylight_start_hour/end_hour must satisfy 0 <= start < end <= 24");
  require(nd.prepositioned_hour >= 0.0 && nd.prepositioned_hour < 24.0, "nd.prepositioned_hour must be in [0, 24)");
  require(nd.un_arrival_hour >= 0.0 && nd.un_arrival_hour < 24.0, "nd.un_arrival_hour must be in [0, 24)");
  require(nd.volunteer_day >= 0 && nd.usrt_departure_day >= 0, "day indices must not be negative");
  require(nd.rdc_dwell >= 0.0 && nd.osocc_briefing >= 0.0 && nd.hospital_retry > 0.0,
          "nd dwell and retry times must not be negative");
  require(nd.food_visit_hours > 0.0, "nd.food_visit_hours must be positive");
  require(nd.roam_pause.min >= 0.0 && nd.roam_pause.min <= nd.roam_pause.max, "nd.roam_pause_min/max out of order");
  require(nd.recon_pause.min >= 0.0 && nd.recon_pause.min <= nd.recon_pause.max, "nd.recon_pause_min/max out of order");

  const auto& t = c.traffic;
  require(t.interval_min > 0.0 && t.interval_min <= t.interval_max, "traffic.interval_min/max needs 0 < min <= max");
  require(t.size_min > 0 && t.size_min <= t.size_max, "traffic.size_min/max needs 0 < min <= max");
  require(t.ttl > 0.0, "traffic.ttl must be positive");
  require(c.radio_range > 0.0, "radio.range must be positive");
  require(c.phy_rate > 0.0, "radio.rate must be positive");
  require(c.buffer_size > 0, "routing.buffer_size must be positive");
  require(c.density_cell > 0.0 && c.density_interval > 0.0, "reports.density_cell/interval must be positive");
  require(c.buffer_interval > 0.0, "reports.buffer_interval must be positive");
  require(c.cdf_bucket > 0.0, "reports.cdf_bucket must be positive");
}

/// Every key with its effective value, grouped by section.
inline std::string resolved_config(const ScenarioConfig& c) {
  std::string out;
  std::string_view section;
  for (const auto& k : config_keys()) {
    if (k.section() != section) {
      section = k.section();
      out += (out.empty() ? "[" : "\n[") + std::string(section) + "]\n";
    }
    out += std::string(k.key()) + " = " + k.get(c) + "\n";
  }
  return out;
}

}  // namespace natdis::engine
