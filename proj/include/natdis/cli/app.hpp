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

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "natdis/engine/run.hpp"

namespace natdis::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kFailed = 2 };

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::vector<std::string> overrides;
  bool quiet = false;
};

/// Config file plus `--set` overrides, in command-line order.
inline engine::ScenarioConfig resolve_config(const Options& o) {
  auto c = engine::load_config(o.config);
  for (const auto& s : o.overrides) engine::apply_override(c, s);
  return c;
}

inline void write_resolved(const engine::ScenarioConfig& c, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  reports::write_text(dir / "resolved_config.txt", engine::resolved_config(c));
}

inline engine::Scenario load(const engine::ScenarioConfig& c, const Options& o, std::ostream& err) {
  auto sc = engine::load_scenario(c);
  if (!o.quiet)
    for (const auto& w : sc.warnings) err << "warning: " << w << "\n";
  return sc;
}

inline int cmd_run(const Options& o, std::ostream& err) {
  auto c = resolve_config(o);
  const std::uint64_t seed = o.seed.value_or(c.seeds.front());
  const auto sc = load(c, o, err);
  const auto t0 = std::chrono::steady_clock::now();
  const auto reports = engine::run(sc, seed);
  reports.write(o.out);
  write_resolved(sc.config, o.out);
  if (!o.quiet) {
    err << "seed " << seed << ": "
        << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s, reports in "
        << o.out << "\n";
  }
  return kOk;
}

inline int cmd_batch(const Options& o, std::ostream& err) {
  auto c = resolve_config(o);
  if (!o.seeds.empty()) c.seeds = engine::detail::parse_seed_list(o.seeds);
  const auto sc = load(c, o, err);
  const auto t0 = std::chrono::steady_clock::now();
  const auto batch = engine::run_batch(sc, sc.config.seeds);
  engine::write_batch(batch, o.out);
  write_resolved(sc.config, o.out);
  if (!o.quiet) {
    err << batch.runs.size() << " seeds: "
        << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s, reports in "
        << o.out << "\n";
  }
  return kOk;
}

inline int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto sc = load(resolve_config(o), o, err);
  out << "ok: " << sc.config.name;
  if (sc.graph) out << ", " << sc.graph->vertex_count() << " vertices, " << sc.graph->edge_count() << " edges";
  out << ", " << sc.pois.size() << " POIs\n";
  return kOk;
}

inline int cmd_map_info(const Options& o, std::ostream& out) {
  const auto c = resolve_config(o);
  if (c.map_path.empty()) throw ConfigError("scenario.map is not set");
  const auto g = engine::load_map(c.resolve(c.map_path), c.snap_tolerance);
  out << "vertices " << g.vertex_count() << "\n"
      << "edges " << g.edge_count() << "\n"
      << "total_length_m " << format_number(g.total_length()) << "\n"
      << "components " << geo::component_count(g) << "\n";
  return kOk;
}

/// Parses `argv` and dispatches. Results go to files (and `out` for the
/// informational commands); diagnostics go to `err`.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Delay-tolerant network simulation over disaster-area mobility", "natdis"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Scenario config file (INI)")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", o.overrides, "Override a config key, as section.key=value (repeatable)")
        ->allow_extra_args(false);
    sub->add_flag("--quiet", o.quiet, "Suppress progress and warnings");
  };

  auto* run = app.add_subcommand("run", "Simulate one seed and write the reports");
  add_common(run);
  run->add_option("--out", o.out, "Output directory")->required();
  run->add_option("--seed", o.seed, "Seed (default: first of scenario.seeds)");

  auto* batch = app.add_subcommand("batch", "Simulate a seed list; write per-seed and aggregate reports");
  add_common(batch);
  batch->add_option("--out", o.out, "Output directory")->required();
  batch->add_option("--seeds", o.seeds, "Comma-separated seeds (default: scenario.seeds)");

  auto* validate = app.add_subcommand("validate", "Check the config, street map and POIs");
  add_common(validate);

  auto* map_info = app.add_subcommand("map-info", "Print street graph statistics of the configured map");
  add_common(map_info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    // Top-level help shows every subcommand with its flags.
    if (app.get_subcommands().empty()) {
      out << app.help("", CLI::AppFormatMode::All);
      return kOk;
    }
    out << app.get_subcommands().front()->help(app.get_name());
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Usage errors count as invalid input.
    return app.exit(e, out, err) == 0 ? kOk : kInvalid;
  }

  try {
    if (*run) return cmd_run(o, err);
    if (*batch) return cmd_batch(o, err);
    if (*validate) return cmd_validate(o, out, err);
    if (*map_info) return cmd_map_info(o, out);
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kFailed;
}

}  // namespace natdis::cli
