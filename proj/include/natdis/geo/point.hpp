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

namespace natdis::geo {

/// Planar position in meters (x east, y north) in the scenario frame.
struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
inline Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
inline Point2D operator*(Point2D a, double s) { return {a.x * s, a.y * s}; }

inline double distance(Point2D a, Point2D b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Closest point on segment [a, b] to p, as a fraction t in [0, 1].
inline double project_onto_segment(Point2D p, Point2D a, Point2D b) {
  const Point2D d = b - a;
  const double len2 = d.x * d.x + d.y * d.y;
  if (len2 == 0.0) return 0.0;
  const double t = ((p.x - a.x) * d.x + (p.y - a.y) * d.y) / len2;
  return std::clamp(t, 0.0, 1.0);
}

inline double distance_to_segment(Point2D p, Point2D a, Point2D b) {
  const double t = project_onto_segment(p, a, b);
  return distance(p, a + (b - a) * t);
}

/// Point at arc length `s` from a towards b on segment of length `len`.
inline Point2D lerp_by_length(Point2D a, Point2D b, double s, double len) {
  if (len <= 0.0) return a;
  if (s >= len) return b;
  return a + (b - a) * (s / len);
}

/// Axis-aligned rectangle [min_x, max_x] x [min_y, max_y].
struct Box {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool contains(Point2D p) const { return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y; }
};

}  // namespace natdis::geo
