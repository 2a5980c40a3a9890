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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "natdis/core/error.hpp"
#include "natdis/core/format.hpp"
#include "natdis/dtn/contacts.hpp"
#include "natdis/geo/point.hpp"
#include "natdis/mobility/role.hpp"
#include "natdis/reports/table.hpp"

namespace natdis::reports {

/// Node counts accumulated per square cell over `bounds`. A point on a cell
/// boundary belongs to the higher-index cell; points outside the bounds go
/// to the nearest border cell and are counted as out-of-bounds.
class DensityGrid {
 public:
  DensityGrid() = default;
  DensityGrid(geo::Box bounds, double cell) : bounds_(bounds), cell_(cell) {
    if (!(cell > 0.0)) throw ValidationError("density cell size must be positive");
    nx_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(bounds.width() / cell)));
    ny_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(bounds.height() / cell)));
    counts_.assign(nx_ * ny_, 0);
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double cell() const { return cell_; }
  const geo::Box& bounds() const { return bounds_; }
  std::uint64_t samples() const { return samples_; }
  std::uint64_t observations() const { return observations_; }
  std::uint64_t out_of_bounds() const { return out_of_bounds_; }

  std::pair<std::size_t, std::size_t> cell_of(geo::Point2D p) const {
    return {index(p.x, bounds_.min_x, nx_), index(p.y, bounds_.min_y, ny_)};
  }

  void observe(geo::Point2D p) {
    if (!bounds_.contains(p)) ++out_of_bounds_;
    const auto [ix, iy] = cell_of(p);
    ++counts_[iy * nx_ + ix];
    ++observations_;
  }

  void end_sample() { ++samples_; }

  std::uint64_t count(std::size_t ix, std::size_t iy) const { return counts_.at(iy * nx_ + ix); }
  double average(std::size_t ix, std::size_t iy) const {
    return samples_ ? static_cast<double>(count(ix, iy)) / static_cast<double>(samples_) : 0.0;
  }

  /// Non-zero cells, row by row (y, then x).
  Table table() const {
    Table t{{"x_cell", "y_cell", "avg_count"}, {}};
    for (std::size_t iy = 0; iy < ny_; ++iy)
      for (std::size_t ix = 0; ix < nx_; ++ix)
        if (count(ix, iy)) t.rows.push_back({std::to_string(ix), std::to_string(iy), format_number(average(ix, iy))});
    return t;
  }

 private:
  std::size_t index(double v, double origin, std::size_t n) const {
    const double f = std::floor((v - origin) / cell_);
    if (!(f >= 0.0)) return 0;
    return std::min(static_cast<std::size_t>(f), n - 1);
  }

  geo::Box bounds_{0, 0, 1, 1};
  double cell_ = 10.0;
  std::size_t nx_ = 1, ny_ = 1;
  std::vector<std::uint64_t> counts_ = {0};
  std::uint64_t samples_ = 0;
  std::uint64_t observations_ = 0;
  std::uint64_t out_of_bounds_ = 0;
};

struct BufferSample {
  double time = 0.0;
  double fraction = 0.0;
};

inline double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline Table buffer_table(std::span<const BufferSample> samples) {
  Table t{{"time_s", "mean_fraction"}, {}};
  for (const auto& s : samples) t.rows.push_back({format_number(s.time), format_number(s.fraction)});
  return t;
}

inline Table encounter_table(const dtn::EncounterLog& log, std::span<const mobility::Role> roles) {
  Table t{{"node", "role", "total", "unique"}, {}};
  for (dtn::NodeId n = 0; n < log.node_count(); ++n) {
    t.rows.push_back({std::to_string(n), std::string(mobility::to_string(roles[n])), std::to_string(log.total(n)),
                      std::to_string(log.unique(n))});
  }
  return t;
}

/// Fraction of created messages delivered within each delay bucket, from 0
/// up to the first bucket at or beyond `ttl`. Empty when nothing was created.
inline Table delay_cdf_table(std::uint64_t created, std::span<const double> delays, double ttl, double bucket) {
  Table t{{"delay_s", "fraction"}, {}};
  if (created == 0) return t;
  std::vector<double> sorted(delays.begin(), delays.end());
  std::sort(sorted.begin(), sorted.end());
  const auto buckets = static_cast<std::size_t>(std::ceil(ttl / bucket));
  std::size_t done = 0;
  for (std::size_t k = 0; k <= buckets; ++k) {
    const double edge = static_cast<double>(k) * bucket;
    while (done < sorted.size() && sorted[done] <= edge) ++done;
    t.rows.push_back({format_number(edge), format_number(static_cast<double>(done) / static_cast<double>(created))});
  }
  return t;
}

struct MessageOutcome {
  mobility::Role source_role;
  mobility::Role destination_role;
  bool delivered = false;
};

inline Table delivery_matrix_table(std::span<const MessageOutcome> outcomes) {
  std::array<std::array<std::uint64_t, mobility::kRoleCount>, mobility::kRoleCount> created{}, delivered{};
  for (const auto& o : outcomes) {
    ++created[mobility::index(o.source_role)][mobility::index(o.destination_role)];
    if (o.delivered) ++delivered[mobility::index(o.source_role)][mobility::index(o.destination_role)];
  }
  Table t{{"src_role", "dst_role", "created", "delivered", "rate"}, {}};
  for (mobility::Role s : mobility::kAllRoles) {
    for (mobility::Role d : mobility::kAllRoles) {
      const auto c = created[mobility::index(s)][mobility::index(d)];
      const auto v = delivered[mobility::index(s)][mobility::index(d)];
      t.rows.push_back({std::string(mobility::to_string(s)), std::string(mobility::to_string(d)), std::to_string(c),
                        std::to_string(v), format_number(c ? static_cast<double>(v) / static_cast<double>(c) : 0.0)});
    }
  }
  return t;
}

inline Table summary_table(std::span<const std::pair<std::string, double>> metrics) {
  Table t{{"metric", "value"}, {}};
  for (const auto& [k, v] : metrics) t.rows.push_back({k, format_number(v)});
  return t;
}

/// The six report files of one run.
struct ReportSet {
  static constexpr std::array<std::string_view, 6> kFileNames = {
      "density.csv", "encounters.csv", "delay_cdf.csv", "buffer.csv", "delivery_matrix.csv", "summary.csv"};

  Table density;
  Table encounters;
  Table delay_cdf;
  Table buffer;
  Table delivery_matrix;
  Table summary;

  /// Table for `kFileNames[i]`.
  Table& table(std::size_t i) {
    std::array<Table*, 6> t = {&density, &encounters, &delay_cdf, &buffer, &delivery_matrix, &summary};
    return *t.at(i);
  }
  const Table& table(std::size_t i) const { return const_cast<ReportSet*>(this)->table(i); }

  /// Number of leading key columns per file, for aggregation.
  static std::size_t key_columns(std::size_t i) { return i <= 1 || i == 4 ? 2 : 1; }

  void write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < kFileNames.size(); ++i) write_csv(dir / kFileNames[i], table(i));
  }
};

}  // namespace natdis::reports
