#include "pinaccess/geometry.hpp"

#include <stdexcept>

namespace pinaccess {

std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::N: return "N";
    case Orientation::FN: return "FN";
    case Orientation::S: return "S";
    case Orientation::FS: return "FS";
  }
  return "N";
}

Orientation parse_orientation(std::string_view s) {
  if (s == "N") return Orientation::N;
  if (s == "FN") return Orientation::FN;
  if (s == "S") return Orientation::S;
  if (s == "FS") return Orientation::FS;
  throw std::invalid_argument("unknown orientation '" + std::string(s) + "'");
}

Rect place_rect(const Rect& local, Orientation o, Point origin, Coord width,
                Coord height) {
  Rect r = local;
  if (mirrors_x(o)) {
    r.xl = width - local.xh;
    r.xh = width - local.xl;
  }
  if (mirrors_y(o)) {
    r.yl = height - local.yh;
    r.yh = height - local.yl;
  }
  return r.translated(origin.x, origin.y);
}

std::ostream& operator<<(std::ostream& os, const Rect& r) {
  return os << "(" << r.xl << " " << r.yl << ") (" << r.xh << " " << r.yh
            << ")";
}

std::ostream& operator<<(std::ostream& os, Orientation o) {
  return os << to_string(o);
}

}  // namespace pinaccess
