#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "pinaccess/geometry.hpp"

namespace pinaccess::detail {

// Calls f(i, j) once for every pair of rectangles (i < j) whose x and y
// gaps are both below `reach`. Sweeps along x; callers apply the exact test.
template <class F>
void for_each_near_pair(const std::vector<Rect>& rects, Coord reach, F&& f) {
  std::vector<std::size_t> order(rects.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rects[a].xl != rects[b].xl ? rects[a].xl < rects[b].xl : a < b;
  });
  std::vector<std::size_t> active;
  for (std::size_t k : order) {
    const Rect& r = rects[k];
    std::size_t keep = 0;
    for (std::size_t m = 0; m < active.size(); ++m) {
      const Rect& q = rects[active[m]];
      if (r.xl - q.xh >= reach) continue;  // q can never be near again
      active[keep++] = active[m];
      if (interval_gap(r.yl, r.yh, q.yl, q.yh) < reach)
        f(std::min(k, active[m]), std::max(k, active[m]));
    }
    active.resize(keep);
    active.push_back(k);
  }
}

// Same, between two distinct sets: f(i, j) with i indexing `a`, j `b`.
template <class F>
void for_each_near_pair(const std::vector<Rect>& a, const std::vector<Rect>& b,
                        Coord reach, F&& f) {
  std::vector<Rect> all(a);
  all.insert(all.end(), b.begin(), b.end());
  const std::size_t na = a.size();
  for_each_near_pair(all, reach, [&](std::size_t i, std::size_t j) {
    if (i < na && j >= na) f(i, j - na);
  });
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace pinaccess::detail
