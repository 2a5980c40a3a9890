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

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "natdis/core/error.hpp"
#include "natdis/core/format.hpp"
#include "natdis/geo/point.hpp"

namespace natdis::geo {

struct Polyline {
  std::vector<Point2D> points;

  friend bool operator==(const Polyline&, const Polyline&) = default;
};

struct MultiPolyline {
  std::vector<Polyline> parts;

  friend bool operator==(const MultiPolyline&, const MultiPolyline&) = default;
};

using Geometry = std::variant<Point2D, Polyline, MultiPolyline>;

namespace detail {

class WktLineParser {
 public:
  WktLineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  Geometry parse() {
    const std::string tag = keyword();
    Geometry g;
    if (tag == "POINT") {
      expect('(');
      g = coordinate();
      expect(')');
    } else if (tag == "LINESTRING") {
      g = polyline();
    } else if (tag == "MULTILINESTRING") {
      MultiPolyline multi;
      expect('(');
      multi.parts.push_back(polyline());
      while (accept(',')) multi.parts.push_back(polyline());
      expect(')');
      g = std::move(multi);
    } else if (tag.empty()) {
      fail("expected geometry tag");
    } else {
      fail("unsupported geometry tag '" + tag + "'");
    }
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters after geometry");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("wkt", line_, what); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string keyword() {
    skip_space();
    std::string out;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(text_[pos_]))));
      ++pos_;
    }
    return out;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  double number() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E') {
        ++pos_;
      } else {
        break;
      }
    }
    double v = 0.0;
    if (start == pos_ || !parse_double(text_.substr(start, pos_ - start), v)) fail("malformed coordinate");
    if (!std::isfinite(v)) fail("non-finite coordinate");
    return v;
  }

  Point2D coordinate() {
    const double x = number();
    const double y = number();
    return {x, y};
  }

  Polyline polyline() {
    Polyline line;
    expect('(');
    line.points.push_back(coordinate());
    while (accept(',')) line.points.push_back(coordinate());
    expect(')');
    if (line.points.size() < 2) fail("linestring needs at least 2 points");
    return line;
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

inline void emit_points(std::string& out, const std::vector<Point2D>& pts) {
  out += '(';
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ", ";
    out += format_number(pts[i].x);
    out += ' ';
    out += format_number(pts[i].y);
  }
  out += ')';
}

}  // namespace detail

/// Parses one geometry per line. Blank lines and lines starting with '#'
/// are skipped. Errors carry the 1-based line number.
inline std::vector<Geometry> parse_wkt(std::string_view text) {
  std::vector<Geometry> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    out.push_back(detail::WktLineParser(line, line_no).parse());
  }
  return out;
}

inline std::string to_wkt(const Geometry& g) {
  std::string out;
  if (const auto* p = std::get_if<Point2D>(&g)) {
    out = "POINT (" + format_number(p->x) + " " + format_number(p->y) + ")";
  } else if (const auto* l = std::get_if<Polyline>(&g)) {
    out = "LINESTRING ";
    detail::emit_points(out, l->points);
  } else {
    const auto& m = std::get<MultiPolyline>(g);
    out = "MULTILINESTRING (";
    for (std::size_t i = 0; i < m.parts.size(); ++i) {
      if (i) out += ", ";
      detail::emit_points(out, m.parts[i].points);
    }
    out += ')';
  }
  return out;
}

inline std::string emit_wkt(const std::vector<Geometry>& geometries) {
  std::string out;
  for (const auto& g : geometries) {
    out += to_wkt(g);
    out += '\n';
  }
  return out;
}

}  // namespace natdis::geo
