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

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "natdis/engine/world.hpp"

namespace natdis::engine {

inline reports::ReportSet run(const Scenario& scenario, std::uint64_t seed) {
  World world(scenario, seed);
  world.run();
  return world.finish();
}

/// Per-seed reports plus mean/std aggregate, in seed order.
struct BatchResult {
  std::vector<std::uint64_t> seeds;
  std::vector<reports::ReportSet> runs;
  reports::ReportSet aggregate;
};

inline reports::ReportSet aggregate(const std::vector<reports::ReportSet>& runs) {
  reports::ReportSet out;
  if (runs.empty()) return out;
  for (std::size_t f = 0; f < reports::ReportSet::kFileNames.size(); ++f) {
    std::vector<reports::Table> tables;
    for (const auto& r : runs) tables.push_back(r.table(f));
    out.table(f) = reports::aggregate(tables, reports::ReportSet::key_columns(f));
  }
  return out;
}

/// Worker count: NATDIS_THREADS if set and positive, else the hardware count.
inline unsigned batch_threads(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NATDIS_THREADS")) {
    unsigned v = 0;
    if (parse_int(env, v) && v > 0) n = v;
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs every seed, possibly in parallel. A failing seed aborts the batch
/// with that seed named in the error.
inline BatchResult run_batch(const Scenario& scenario, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ConfigError("batch needs at least one seed");
  BatchResult out;
  out.seeds = seeds;
  out.runs.resize(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        out.runs[i] = run(scenario, seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = batch_threads(seeds.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!errors[i]) continue;
    const std::string prefix = "seed " + std::to_string(seeds[i]) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ValidationError& e) {
      throw ValidationError(prefix + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(prefix + e.what());
    }
  }
  out.aggregate = aggregate(out.runs);
  return out;
}

/// Writes `seed_<n>/` per run and `aggregate/` under `dir`.
inline void write_batch(const BatchResult& b, const std::filesystem::path& dir) {
  for (std::size_t i = 0; i < b.runs.size(); ++i) b.runs[i].write(dir / ("seed_" + std::to_string(b.seeds[i])));
  b.aggregate.write(dir / "aggregate");
}

}  // namespace natdis::engine
