#include "pinaccess/router.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "sweep.hpp"

namespace pinaccess {

StrapDraw draw_strap(SplitMix64& rng, Coord dbu_per_micron) {
  auto draw = [&] {
    std::uint64_t k = 0;
    while (k == 0) k = rng.scaled_unit(100);
    return static_cast<Coord>(k);
  };
  StrapDraw d;
  d.width = draw() * dbu_per_micron / 500;
  d.step = draw() * dbu_per_micron / 50;
  return d;
}

StrapPlan plan_straps(const Rect& die, const TechRules& rules, std::uint64_t seed,
                      bool enabled) {
  StrapPlan plan;
  plan.seed = seed;
  if (!enabled) return plan;
  SplitMix64 rng(seed);
  for (int l : {layer::M2, layer::M3}) {
    const auto& rule = rules.at(l);
    const StrapDraw d = draw_strap(rng, rules.dbu_per_micron);
    const Coord span =
        rule.direction == Direction::Horizontal ? die.height() : die.width();
    int k = 0;
    for (Coord off = 0; off < span; off += d.step, ++k)
      plan.straps.push_back(
          {l, rule.direction, off, d.width, d.step, k % 2 == 0 ? "VDD" : "VSS"});
  }
  return plan;
}

Rect strap_rect(const Strap& s, const Rect& die) {
  if (s.direction == Direction::Horizontal)
    return {die.xl, die.yl + s.offset, die.xh,
            std::min(die.yh, die.yl + s.offset + s.width)};
  return {die.xl + s.offset, die.yl, std::min(die.xh, die.xl + s.offset + s.width),
          die.yh};
}

std::string_view to_string(ShapeSource s) {
  switch (s) {
    case ShapeSource::Route: return "route";
    case ShapeSource::Pin: return "pin";
    case ShapeSource::Obstruction: return "obstruction";
    case ShapeSource::Rail: return "rail";
    case ShapeSource::Strap: return "strap";
  }
  return "";
}

std::string_view to_string(NetStatus s) {
  switch (s) {
    case NetStatus::Routed: return "routed";
    case NetStatus::Open: return "open";
    case NetStatus::Shorted: return "shorted";
  }
  return "";
}

namespace {

Coord half_up(Coord v) { return (v + 1) / 2; }

// Dense per-node blockage flags derived from the track blockage list.
class BlockMap {
 public:
  explicit BlockMap(const RoutingGrid& g)
      : nx_(g.m3_tracks.size()), ny_(g.m2_tracks.size()),
        node_(2 * nx_ * ny_, false), edge_(2 * nx_ * ny_, false),
        v2_(nx_ * ny_, false) {
    for (const auto& b : g.blocked) {
      const bool on_m2 = b.track_layer == layer::M2;
      const auto& along = on_m2 ? g.m3_tracks : g.m2_tracks;
      const std::size_t t = static_cast<std::size_t>(b.track);
      const auto first = std::lower_bound(along.begin(), along.end(), b.lo);
      const std::size_t a = static_cast<std::size_t>(first - along.begin());
      for (std::size_t k = a; k < along.size() && along[k] <= b.hi; ++k) {
        const std::size_t i = on_m2 ? k : t;
        const std::size_t j = on_m2 ? t : k;
        if (b.layer == layer::V2) {
          v2_[i * ny_ + j] = true;
        } else {
          node_[id(on_m2 ? 0 : 1, i, j)] = true;
        }
      }
      if (b.layer == layer::V2) continue;
      // Edge k spans along[k]..along[k+1].
      for (std::size_t k = a > 0 ? a - 1 : 0; k + 1 < along.size(); ++k) {
        if (along[k] > b.hi) break;
        if (along[k + 1] < b.lo) continue;
        const std::size_t i = on_m2 ? k : t;
        const std::size_t j = on_m2 ? t : k;
        edge_[id(on_m2 ? 0 : 1, i, j)] = true;
      }
    }
  }

  std::size_t id(int m, std::size_t i, std::size_t j) const {
    return (static_cast<std::size_t>(m) * nx_ + i) * ny_ + j;
  }
  bool node(std::size_t n) const { return node_[n]; }
  bool edge(std::size_t n) const { return edge_[n]; }
  bool v2(std::size_t i, std::size_t j) const { return v2_[i * ny_ + j]; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }

 private:
  std::size_t nx_, ny_;
  std::vector<bool> node_, edge_, v2_;
};

std::vector<Coord> make_tracks(Coord lo, Coord hi, Coord pitch) {
  std::vector<Coord> t;
  for (Coord v = lo + pitch / 2; v < hi; v += pitch) t.push_back(v);
  return t;
}

}  // namespace

bool RoutingGrid::node_blocked(int metal, int i, int j) const {
  const bool m2 = metal == layer::M2;
  const int track = m2 ? j : i;
  const Coord at = m2 ? m3_tracks.at(i) : m2_tracks.at(j);
  for (const auto& b : blocked)
    if (b.layer == metal && b.track_layer == metal && b.track == track &&
        b.lo <= at && at <= b.hi)
      return true;
  return false;
}

bool RoutingGrid::v2_blocked(int i, int j) const {
  for (const auto& b : blocked) {
    if (b.layer != layer::V2) continue;
    if (b.track_layer == layer::M2 && b.track == j && b.lo <= m3_tracks.at(i) &&
        m3_tracks.at(i) <= b.hi)
      return true;
    if (b.track_layer == layer::M3 && b.track == i && b.lo <= m2_tracks.at(j) &&
        m2_tracks.at(j) <= b.hi)
      return true;
  }
  return false;
}

bool RoutingGrid::edge_blocked(int metal, int i, int j) const {
  const bool m2 = metal == layer::M2;
  const int track = m2 ? j : i;
  const Coord a = m2 ? m3_tracks.at(i) : m2_tracks.at(j);
  const Coord b = m2 ? m3_tracks.at(i + 1) : m2_tracks.at(j + 1);
  for (const auto& bl : blocked)
    if (bl.layer == metal && bl.track_layer == metal && bl.track == track &&
        bl.lo <= b && a <= bl.hi)
      return true;
  return false;
}

RoutingGrid build_grid(const TestcellSpec& spec, const Library& lib,
                       const TechRules& rules, const StrapPlan& straps) {
  const auto& m2 = rules.at(layer::M2);
  const auto& m3 = rules.at(layer::M3);
  const auto& v1 = rules.at(layer::V1);
  const auto& v2 = rules.at(layer::V2);
  if (spec.die.height() < m2.pitch || spec.die.width() < m3.pitch)
    throw std::invalid_argument("die of " + spec.id +
                                " is smaller than one routing pitch");

  RoutingGrid g;
  g.die = spec.die;
  g.m2_tracks = make_tracks(spec.die.yl, spec.die.yh, m2.pitch);
  g.m3_tracks = make_tracks(spec.die.xl, spec.die.xh, m3.pitch);
  const Coord pad1 = v1.min_width + 2 * v1.min_enclosure;
  const Coord pad2 = v2.min_width + 2 * v2.min_enclosure;
  g.m2_clearance = std::max({half_up(m2.min_width), half_up(pad1), half_up(pad2)});
  g.m3_clearance = std::max(half_up(m3.min_width), half_up(pad2));

  std::map<Terminal, std::string> net_of;
  for (const auto& n : spec.nets)
    for (const auto& t : n.terminals) net_of[t] = n.name;

  for (const auto& inst : spec.instances) {
    const auto& master = lib.cell(inst.master);
    auto place = [&](const Rect& r) {
      return place_rect(r, inst.orient, inst.origin, inst.width, inst.height);
    };
    for (const auto& r : master.rails)
      g.fixed.push_back({layer::M1, place(r.rect), r.net, ShapeSource::Rail});
    for (const auto& o : master.obstructions)
      g.fixed.push_back({o.layer, place(o.rect), "", ShapeSource::Obstruction});
  }
  for (const auto& s : straps.straps)
    g.fixed.push_back({s.layer, strap_rect(s, spec.die), s.net, ShapeSource::Strap});

  for (const auto& f : g.fixed) {
    const Rect& r = f.rect;
    if (f.layer == layer::M2) {
      const Coord h = g.m2_clearance;
      for (std::size_t j = 0; j < g.m2_tracks.size(); ++j)
        if (r.yl <= g.m2_tracks[j] + h && r.yh >= g.m2_tracks[j] - h)
          g.blocked.push_back({layer::M2, layer::M2, static_cast<int>(j),
                               r.xl - h, r.xh + h});
      for (std::size_t i = 0; i < g.m3_tracks.size(); ++i)
        if (r.xl <= g.m3_tracks[i] + h && r.xh >= g.m3_tracks[i] - h)
          g.blocked.push_back({layer::V2, layer::M3, static_cast<int>(i),
                               r.yl - h, r.yh + h});
    } else if (f.layer == layer::M3) {
      const Coord h = g.m3_clearance;
      for (std::size_t i = 0; i < g.m3_tracks.size(); ++i)
        if (r.xl <= g.m3_tracks[i] + h && r.xh >= g.m3_tracks[i] - h)
          g.blocked.push_back({layer::M3, layer::M3, static_cast<int>(i),
                               r.yl - h, r.yh + h});
      for (std::size_t j = 0; j < g.m2_tracks.size(); ++j)
        if (r.yl <= g.m2_tracks[j] + h && r.yh >= g.m2_tracks[j] - h)
          g.blocked.push_back({layer::V2, layer::M2, static_cast<int>(j),
                               r.xl - h, r.xh + h});
    }
  }

  std::vector<Rect> m1_fixed;
  for (const auto& f : g.fixed)
    if (f.layer == layer::M1) m1_fixed.push_back(f.rect);

  const BlockMap blocks(g);
  auto index_of = [](const std::vector<Coord>& v, Coord c) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), c) - v.begin());
  };
  for (const auto& inst : spec.instances) {
    const auto& master = lib.cell(inst.master);
    for (const auto& pin : master.pins) {
      PinAccess pa;
      pa.terminal = {inst.name, pin.name};
      const auto it = net_of.find(pa.terminal);
      pa.net = it != net_of.end() ? it->second : "";
      std::set<Point> pts;
      for (const auto& s : pin.shapes) {
        const Rect r = place_rect(s, inst.orient, inst.origin, inst.width, inst.height);
        pa.shapes.push_back(r);
        for (std::size_t i = index_of(g.m3_tracks, r.xl);
             i < g.m3_tracks.size() && g.m3_tracks[i] <= r.xh; ++i)
          for (std::size_t j = index_of(g.m2_tracks, r.yl);
               j < g.m2_tracks.size() && g.m2_tracks[j] <= r.yh; ++j) {
            const Point p{g.m3_tracks[i], g.m2_tracks[j]};
            const Rect foot = square_at(p, v1.min_width).expanded(v1.min_enclosure);
            if (!r.contains(foot)) continue;
            if (blocks.node(blocks.id(0, i, j))) continue;
            const bool clash = std::any_of(m1_fixed.begin(), m1_fixed.end(),
                                           [&](const Rect& f) { return f.touches(foot); });
            if (!clash) pts.insert(p);
          }
      }
      pa.points.assign(pts.begin(), pts.end());
      g.pins.push_back(std::move(pa));
    }
  }
  return g;
}

namespace {

class Router {
 public:
  Router(const RoutingGrid& g, const RouteConfig& cfg)
      : g_(g), blocks_(g), cfg_(cfg), occ_(2 * blocks_.nx() * blocks_.ny(), 0),
        hist_(occ_.size(), 0), dist_(occ_.size(), 0), prev_(occ_.size(), 0),
        stamp_(occ_.size(), 0), target_(occ_.size(), 0) {}

  struct NetState {
    std::vector<std::vector<std::size_t>> access;  // per terminal, M2 nodes
    bool failed = false;
    std::vector<std::size_t> nodes;  // sorted
    std::set<std::pair<std::size_t, std::size_t>> edges;
    std::set<std::size_t> v1;
  };

  std::size_t node_at(Point p) const {
    const auto i = std::lower_bound(g_.m3_tracks.begin(), g_.m3_tracks.end(), p.x) -
                   g_.m3_tracks.begin();
    const auto j = std::lower_bound(g_.m2_tracks.begin(), g_.m2_tracks.end(), p.y) -
                   g_.m2_tracks.begin();
    return blocks_.id(0, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }

  void run(std::vector<NetState>& nets, const std::vector<std::size_t>& order,
           int& iterations) {
    std::int64_t pres = 1;
    for (int it = 1; it <= std::max(1, cfg_.max_iterations); ++it) {
      iterations = it;
      for (std::size_t idx : order) {
        auto& n = nets[idx];
        if (n.failed) continue;
        if (it > 1 && !overused(n)) continue;
        release(n);
        route_net(n, pres);
        claim(n);
      }
      bool any = false;
      for (std::size_t k = 0; k < occ_.size(); ++k)
        if (occ_[k] > 1) {
          any = true;
          hist_[k] += occ_[k] - 1;
        }
      if (!any) break;
      pres = std::min<std::int64_t>(pres * 2, 1 << 20);
    }
  }

  bool overused(const NetState& n) const {
    return std::any_of(n.nodes.begin(), n.nodes.end(),
                       [&](std::size_t k) { return occ_[k] > 1; });
  }

  const BlockMap& blocks() const { return blocks_; }

 private:
  void release(NetState& n) {
    for (auto k : n.nodes) --occ_[k];
    n.nodes.clear();
    n.edges.clear();
    n.v1.clear();
  }
  void claim(NetState& n) {
    for (auto k : n.nodes) ++occ_[k];
  }

  void route_net(NetState& n, std::int64_t pres) {
    if (n.access.size() < 2) return;
    for (const auto& a : n.access)
      if (a.empty()) {
        n.failed = true;
        return;
      }
    std::set<std::size_t> tree;
    std::vector<std::size_t> sources = n.access[0];
    for (std::size_t t = 1; t < n.access.size(); ++t) {
      const auto path = search(sources, n.access[t], pres);
      if (path.empty()) {
        n.failed = true;
        n.edges.clear();
        n.v1.clear();
        return;
      }
      if (t == 1) n.v1.insert(path.front());
      n.v1.insert(path.back());
      for (std::size_t k = 0; k < path.size(); ++k) {
        tree.insert(path[k]);
        if (k > 0)
          n.edges.insert({std::min(path[k - 1], path[k]), std::max(path[k - 1], path[k])});
      }
      sources.assign(tree.begin(), tree.end());
    }
    n.nodes.assign(tree.begin(), tree.end());
  }

  std::int64_t enter_cost(std::size_t node, std::int64_t base, std::int64_t pres) const {
    return base * (1 + hist_[node]) * (1 + pres * occ_[node]);
  }

  std::vector<std::size_t> search(const std::vector<std::size_t>& sources,
                                  const std::vector<std::size_t>& targets,
                                  std::int64_t pres) {
    ++epoch_;
    const std::size_t ny = blocks_.ny(), nx = blocks_.nx();
    std::size_t ti_lo = nx, ti_hi = 0, tj_lo = ny, tj_hi = 0;
    for (auto t : targets) {
      target_[t] = epoch_;
      const std::size_t i = (t / ny) % nx, j = t % ny;
      ti_lo = std::min(ti_lo, i);
      ti_hi = std::max(ti_hi, i);
      tj_lo = std::min(tj_lo, j);
      tj_hi = std::max(tj_hi, j);
    }
    auto heuristic = [&](std::size_t node) -> std::int64_t {
      const std::size_t i = (node / ny) % nx, j = node % ny;
      const std::size_t di = i < ti_lo ? ti_lo - i : (i > ti_hi ? i - ti_hi : 0);
      const std::size_t dj = j < tj_lo ? tj_lo - j : (j > tj_hi ? j - tj_hi : 0);
      return static_cast<std::int64_t>(di + dj);
    };
    using Item = std::tuple<std::int64_t, std::int64_t, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    for (auto s : sources) {
      if (blocks_.node(s)) continue;
      stamp_[s] = epoch_;
      dist_[s] = 0;
      prev_[s] = s;
      open.push({heuristic(s), 0, s});
    }
    const std::size_t plane = nx * ny;
    while (!open.empty()) {
      const auto [f, d, u] = open.top();
      open.pop();
      if (d != dist_[u]) continue;
      if (target_[u] == epoch_) {
        std::vector<std::size_t> path{u};
        while (prev_[path.back()] != path.back()) path.push_back(prev_[path.back()]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      const bool on_m2 = u < plane;
      const std::size_t i = (u / ny) % nx, j = u % ny;
      auto relax = [&](std::size_t v, std::int64_t base) {
        if (blocks_.node(v)) return;
        const std::int64_t nd = d + enter_cost(v, base, pres);
        if (stamp_[v] == epoch_ && dist_[v] <= nd) return;
        stamp_[v] = epoch_;
        dist_[v] = nd;
        prev_[v] = u;
        open.push({nd + heuristic(v), nd, v});
      };
      if (on_m2) {
        if (i + 1 < nx && !blocks_.edge(u)) relax(u + ny, 1);
        if (i > 0 && !blocks_.edge(u - ny)) relax(u - ny, 1);
      } else {
        if (j + 1 < ny && !blocks_.edge(u)) relax(u + 1, 1);
        if (j > 0 && !blocks_.edge(u - 1)) relax(u - 1, 1);
      }
      if (!blocks_.v2(i, j)) relax(on_m2 ? u + plane : u - plane, 2);
    }
    return {};
  }

  const RoutingGrid& g_;
  BlockMap blocks_;
  RouteConfig cfg_;
  std::vector<std::int64_t> occ_, hist_, dist_;
  std::vector<std::size_t> prev_;
  std::vector<std::uint64_t> stamp_, target_;
  std::uint64_t epoch_ = 0;
};

}  // namespace

RouteDB route(const TestcellSpec& spec, const Library& lib, const RoutingGrid& grid,
              const TechRules& rules, const RouteConfig& config) {
  RouteDB db;
  db.id = spec.id;
  db.die = grid.die;
  db.rules = rules;
  db.fixed = grid.fixed;

  std::map<Terminal, const PinAccess*> access;
  for (const auto& p : grid.pins) access[p.terminal] = &p;

  Router router(grid, config);
  std::vector<Router::NetState> states(spec.nets.size());
  std::vector<std::pair<Coord, std::size_t>> keyed;
  for (std::size_t k = 0; k < spec.nets.size(); ++k) {
    const auto& net = spec.nets[k];
    RoutedNet rn;
    rn.name = net.name;
    rn.terminals = net.terminals;
    for (const auto& t : net.terminals) {
      const auto it = access.find(t);
      if (it == access.end())
        throw std::invalid_argument("net " + net.name + " references unknown pin " +
                                    t.inst + "/" + t.pin);
      rn.pin_shapes.push_back(it->second->shapes);
      std::vector<std::size_t> nodes;
      for (const auto& p : it->second->points) nodes.push_back(router.node_at(p));
      states[k].access.push_back(std::move(nodes));
    }
    db.nets.push_back(std::move(rn));
    keyed.emplace_back(net_hpwl(spec, lib, net), k);
  }
  std::vector<std::size_t> order(spec.nets.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keyed[a].first != keyed[b].first) return keyed[a].first > keyed[b].first;
    return spec.nets[a].name < spec.nets[b].name;
  });

  router.run(states, order, db.iterations);

  const std::size_t nx = grid.m3_tracks.size(), ny = grid.m2_tracks.size();
  const std::size_t plane = nx * ny;
  auto coord = [&](std::size_t node) {
    const std::size_t i = (node / ny) % nx, j = node % ny;
    return Point{grid.m3_tracks[i], grid.m2_tracks[j]};
  };
  for (std::size_t k = 0; k < states.size(); ++k) {
    auto& st = states[k];
    auto& rn = db.nets[k];
    if (st.failed) {
      rn.status = NetStatus::Open;
      continue;
    }
    rn.status = router.overused(st) ? NetStatus::Shorted : NetStatus::Routed;
    // Merge unit edges into maximal runs per track.
    std::map<std::pair<int, Coord>, std::vector<std::pair<Coord, Coord>>> runs;
    for (const auto& [a, b] : st.edges) {
      const Point pa = coord(a), pb = coord(b);
      const bool a_m2 = a < plane, b_m2 = b < plane;
      if (a_m2 != b_m2) {
        rn.vias.push_back({layer::V2, pa});
      } else if (a_m2) {
        runs[{layer::M2, pa.y}].emplace_back(std::min(pa.x, pb.x), std::max(pa.x, pb.x));
      } else {
        runs[{layer::M3, pa.x}].emplace_back(std::min(pa.y, pb.y), std::max(pa.y, pb.y));
      }
    }
    for (auto& [key, spans] : runs) {
      std::sort(spans.begin(), spans.end());
      Segment cur{key.first, key.second, spans.front().first, spans.front().second};
      for (std::size_t s = 1; s < spans.size(); ++s) {
        if (spans[s].first <= cur.hi) {
          cur.hi = std::max(cur.hi, spans[s].second);
        } else {
          rn.segments.push_back(cur);
          cur.lo = spans[s].first;
          cur.hi = spans[s].second;
        }
      }
      rn.segments.push_back(cur);
    }
    for (auto n : st.v1) rn.vias.push_back({layer::V1, coord(n)});
    std::sort(rn.segments.begin(), rn.segments.end());
    std::sort(rn.vias.begin(), rn.vias.end());
  }
  return db;
}

std::vector<Shape> net_shapes(const RoutedNet& net, int net_id, const TechRules& rules) {
  std::vector<Shape> out;
  for (const auto& s : net.segments) {
    const Coord w = rules.at(s.layer).min_width;
    const Coord a = w / 2, b = w - a;
    const Rect r = s.layer == layer::M2
                       ? Rect{s.lo - a, s.track - a, s.hi + b, s.track + b}
                       : Rect{s.track - a, s.lo - a, s.track + b, s.hi + b};
    out.push_back({s.layer, r, net_id, ShapeSource::Route});
  }
  for (const auto& v : net.vias) {
    const auto& rule = rules.at(v.layer);
    const Rect cut = square_at(v.at, rule.min_width);
    out.push_back({v.layer, cut, net_id, ShapeSource::Route});
    const Rect pad = cut.expanded(rule.min_enclosure);
    out.push_back({v.layer + 1, pad, net_id, ShapeSource::Route});
    if (v.layer == layer::V2) out.push_back({layer::M2, pad, net_id, ShapeSource::Route});
  }
  return out;
}

Layout flatten(const RouteDB& db) {
  Layout L;
  std::map<std::string, int> ids;
  for (const auto& n : db.nets) {
    ids[n.name] = static_cast<int>(L.net_names.size());
    L.net_names.push_back(n.name);
  }
  L.signal_nets = L.net_names.size();
  for (const auto& f : db.fixed)
    if (!f.net.empty() && !ids.contains(f.net)) {
      ids[f.net] = static_cast<int>(L.net_names.size());
      L.net_names.push_back(f.net);
    }
  for (std::size_t k = 0; k < db.nets.size(); ++k) {
    const int id = static_cast<int>(k);
    for (const auto& shapes : db.nets[k].pin_shapes)
      for (const auto& r : shapes) L.shapes.push_back({layer::M1, r, id, ShapeSource::Pin});
    for (auto& s : net_shapes(db.nets[k], id, db.rules)) L.shapes.push_back(s);
  }
  for (const auto& f : db.fixed)
    L.shapes.push_back({f.layer, f.rect, f.net.empty() ? -1 : ids.at(f.net), f.source});
  return L;
}

std::vector<NetVerdict> extract_connectivity(const RouteDB& db) {
  const Layout L = flatten(db);
  const auto& sh = L.shapes;
  detail::DisjointSets ds(sh.size());
  const int layers = static_cast<int>(db.rules.layers.size());
  std::vector<std::vector<std::size_t>> by_layer(layers);
  for (std::size_t k = 0; k < sh.size(); ++k)
    if (sh[k].net >= 0) by_layer[sh[k].layer].push_back(k);
  auto rects = [&](const std::vector<std::size_t>& idx) {
    std::vector<Rect> r;
    for (auto k : idx) r.push_back(sh[k].rect);
    return r;
  };
  for (int l = 0; l < layers; ++l) {
    const auto& idx = by_layer[l];
    const auto rs = rects(idx);
    detail::for_each_near_pair(rs, 1, [&](std::size_t a, std::size_t b) {
      if (rs[a].touches(rs[b])) ds.unite(idx[a], idx[b]);
    });
    if (db.rules.at(l).is_metal()) continue;
    for (int m : {l - 1, l + 1}) {
      if (m < 0 || m >= layers) continue;
      const auto& midx = by_layer[m];
      const auto ms = rects(midx);
      detail::for_each_near_pair(rs, ms, 1, [&](std::size_t a, std::size_t b) {
        if (rs[a].overlaps(ms[b])) ds.unite(idx[a], midx[b]);
      });
    }
  }
  // Shapes of one pin are joined inside the cell.
  std::size_t cursor = 0;
  std::vector<std::vector<std::size_t>> terminal_root(db.nets.size());
  for (std::size_t k = 0; k < db.nets.size(); ++k) {
    for (const auto& shapes : db.nets[k].pin_shapes) {
      const std::size_t first = cursor;
      for (std::size_t s = 0; s < shapes.size(); ++s) ds.unite(first, cursor++);
      terminal_root[k].push_back(first);
    }
    cursor += net_shapes(db.nets[k], static_cast<int>(k), db.rules).size();
  }
  std::map<std::size_t, std::set<int>> labels;
  for (std::size_t k = 0; k < sh.size(); ++k)
    if (sh[k].net >= 0) labels[ds.find(k)].insert(sh[k].net);

  std::vector<NetVerdict> out;
  for (std::size_t k = 0; k < db.nets.size(); ++k) {
    NetVerdict v;
    v.net = db.nets[k].name;
    std::set<std::size_t> roots;
    for (auto t : terminal_root[k]) roots.insert(ds.find(t));
    v.open = roots.size() > 1;
    std::set<std::string> others;
    for (const auto& [root, ls] : labels)
      if (ls.contains(static_cast<int>(k)))
        for (int o : ls)
          if (o != static_cast<int>(k)) others.insert(L.net_names[o]);
    v.shorted_with.assign(others.begin(), others.end());
    out.push_back(std::move(v));
  }
  return out;
}

std::string dump_routes(const RouteDB& db) {
  std::ostringstream os;
  auto name = [&](int l) { return db.rules.at(l).name; };
  os << "testcell " << db.id << "\n";
  os << "die " << db.die.xl << ' ' << db.die.yl << ' ' << db.die.xh << ' ' << db.die.yh
     << "\n";
  os << "iterations " << db.iterations << "\n";
  for (const auto& n : db.nets) {
    os << "net " << n.name << ' ' << to_string(n.status) << "\n";
    for (const auto& s : n.segments)
      os << "  seg " << name(s.layer) << ' ' << s.track << ' ' << s.lo << ' ' << s.hi
         << "\n";
    for (const auto& v : n.vias)
      os << "  via " << name(v.layer) << ' ' << v.at.x << ' ' << v.at.y << "\n";
  }
  for (const auto& f : db.fixed)
    os << "fixed " << name(f.layer) << ' ' << to_string(f.source) << ' '
       << (f.net.empty() ? "-" : f.net) << ' ' << f.rect.xl << ' ' << f.rect.yl << ' '
       << f.rect.xh << ' ' << f.rect.yh << "\n";
  return os.str();
}

}  // namespace pinaccess
