#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace pinaccess {

// All layout coordinates are integer database units (1000 per micron).
using Coord = std::int64_t;

struct Point {
  Coord x = 0;
  Coord y = 0;

  auto operator<=>(const Point&) const = default;
};

// Closed axis-aligned rectangle [xl, xh] x [yl, yh].
struct Rect {
  Coord xl = 0;
  Coord yl = 0;
  Coord xh = 0;
  Coord yh = 0;

  auto operator<=>(const Rect&) const = default;

  Coord width() const { return xh - xl; }
  Coord height() const { return yh - yl; }
  bool valid() const { return xl <= xh && yl <= yh; }
  bool has_area() const { return xl < xh && yl < yh; }

  bool contains(const Rect& r) const {
    return xl <= r.xl && yl <= r.yl && r.xh <= xh && r.yh <= yh;
  }
  bool contains(Point p) const {
    return xl <= p.x && p.x <= xh && yl <= p.y && p.y <= yh;
  }
  // Closed-set intersection: touching edges count.
  bool touches(const Rect& r) const {
    return xl <= r.xh && r.xl <= xh && yl <= r.yh && r.yl <= yh;
  }
  // Positive-area intersection.
  bool overlaps(const Rect& r) const {
    return xl < r.xh && r.xl < xh && yl < r.yh && r.yl < yh;
  }

  Rect expanded(Coord d) const { return {xl - d, yl - d, xh + d, yh + d}; }
  Rect translated(Coord dx, Coord dy) const {
    return {xl + dx, yl + dy, xh + dx, yh + dy};
  }
  Rect united(const Rect& r) const {
    return {std::min(xl, r.xl), std::min(yl, r.yl), std::max(xh, r.xh),
            std::max(yh, r.yh)};
  }
};

// Square of side `side` centred on p; odd sides put the extra unit on the
// high side.
inline Rect square_at(Point p, Coord side) {
  const Coord lo = side / 2;
  return {p.x - lo, p.y - lo, p.x - lo + side, p.y - lo + side};
}

// Gap between two closed intervals (0 when they touch or overlap).
inline Coord interval_gap(Coord a_lo, Coord a_hi, Coord b_lo, Coord b_hi) {
  if (a_hi < b_lo) return b_lo - a_hi;
  if (b_hi < a_lo) return a_lo - b_hi;
  return 0;
}

// Squared Euclidean rect-to-rect distance. Stays integral.
inline Coord distance2(const Rect& a, const Rect& b) {
  const Coord dx = interval_gap(a.xl, a.xh, b.xl, b.xh);
  const Coord dy = interval_gap(a.yl, a.yh, b.yl, b.yh);
  return dx * dx + dy * dy;
}

// The region between two rectangles: the gap box when separated, the
// intersection when they overlap.
inline Rect gap_box(const Rect& a, const Rect& b) {
  auto axis = [](Coord alo, Coord ahi, Coord blo, Coord bhi) {
    const Coord lo = std::max(alo, blo);
    const Coord hi = std::min(ahi, bhi);
    return lo <= hi ? std::pair{lo, hi} : std::pair{hi, lo};
  };
  const auto [x0, x1] = axis(a.xl, a.xh, b.xl, b.xh);
  const auto [y0, y1] = axis(a.yl, a.yh, b.yl, b.yh);
  return {x0, y0, x1, y1};
}

// Legal placement transforms. N = R0, FN = mirror about the vertical axis
// (MY), S = R180, FS = mirror about the horizontal axis (MX).
enum class Orientation { N, FN, S, FS };

std::string_view to_string(Orientation o);
Orientation parse_orientation(std::string_view s);

inline bool mirrors_x(Orientation o) {
  return o == Orientation::FN || o == Orientation::S;
}
inline bool mirrors_y(Orientation o) {
  return o == Orientation::S || o == Orientation::FS;
}

// Maps a rectangle in cell-local coordinates of a width x height master to
// die coordinates for an instance placed at `origin` (lower-left of the
// placed bounding box, DEF convention).
Rect place_rect(const Rect& local, Orientation o, Point origin, Coord width,
                Coord height);

std::ostream& operator<<(std::ostream& os, const Rect& r);
std::ostream& operator<<(std::ostream& os, Orientation o);

}  // namespace pinaccess
