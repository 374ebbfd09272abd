#include "pinaccess/drc.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sweep.hpp"

namespace pinaccess {

namespace {

struct RuleName {
  Rule rule;
  std::string_view key;
  std::string_view display;
};

constexpr RuleName kRules[] = {
    {Rule::DiffNetSpacing, "diff_net_spacing", "Diff net spacing"},
    {Rule::SameNetCutSpacing, "same_net_cut_spacing", "Same net via-cut spacing"},
    {Rule::MinWidth, "min_width", "Less than min width"},
    {Rule::MinEnclosure, "min_enclosure", "Insufficient via enclosure"},
    {Rule::DpOddCycle, "dp_odd_cycle", "Local double pattern cycle"},
    {Rule::Short, "short", "Short"},
    {Rule::Open, "open", "Open"},
};

constexpr std::string_view kRecognisedOnly[] = {
    "End of line spacing", "Diff net var rule spacing", "Same net spacing",
    "Same net var rule spacing", "Less than min edge length",
};

bool is_signal(const Shape& s) {
  return s.source == ShapeSource::Route || s.source == ShapeSource::Pin;
}

std::vector<std::string> names_of(std::initializer_list<int> nets,
                                  const std::vector<std::string>& names) {
  std::set<std::string> out;
  for (int n : nets)
    if (n >= 0) out.insert(names[n]);
  return {out.begin(), out.end()};
}

// True when the union of `cover` contains `box`.
bool covered(const Rect& box, const std::vector<Rect>& cover) {
  std::vector<Coord> xs{box.xl, box.xh}, ys{box.yl, box.yh};
  for (const auto& r : cover) {
    if (r.xl > box.xl && r.xl < box.xh) xs.push_back(r.xl);
    if (r.xh > box.xl && r.xh < box.xh) xs.push_back(r.xh);
    if (r.yl > box.yl && r.yl < box.yh) ys.push_back(r.yl);
    if (r.yh > box.yl && r.yh < box.yh) ys.push_back(r.yh);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const Rect cell{xs[i], ys[j], xs[i + 1], ys[j + 1]};
      if (std::none_of(cover.begin(), cover.end(),
                       [&](const Rect& r) { return r.contains(cell); }))
        return false;
    }
  return true;
}

void finish(std::vector<DrcViolation>& v, const std::set<Rule>& ignore) {
  std::erase_if(v, [&](const DrcViolation& x) { return ignore.contains(x.rule); });
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::string_view rule_key(Rule r) {
  for (const auto& n : kRules)
    if (n.rule == r) return n.key;
  return "";
}

std::string_view rule_display(Rule r) {
  for (const auto& n : kRules)
    if (n.rule == r) return n.display;
  return "";
}

std::optional<Rule> parse_rule_name(std::string_view name) {
  for (const auto& n : kRules)
    if (n.key == name || n.display == name) return n.rule;
  for (auto r : kRecognisedOnly)
    if (r == name) return std::nullopt;
  throw std::invalid_argument("unknown DRC rule '" + std::string(name) + "'");
}

std::set<Rule> parse_ignore_list(const std::vector<std::string>& names) {
  std::set<Rule> out;
  for (const auto& n : names)
    if (auto r = parse_rule_name(n)) out.insert(*r);
  return out;
}

std::vector<DrcViolation> check_dp_odd_cycle(const std::vector<Shape>& shapes,
                                             Coord dp_spacing,
                                             const std::vector<std::string>& net_names,
                                             std::string_view layer_name) {
  const std::size_t n = shapes.size();
  std::vector<Rect> rects;
  for (const auto& s : shapes) rects.push_back(s.rect);

  detail::DisjointSets merge(n);
  std::vector<std::pair<std::size_t, std::size_t>> close;
  const Coord d2 = dp_spacing * dp_spacing;
  detail::for_each_near_pair(rects, std::max<Coord>(dp_spacing, 1),
                             [&](std::size_t a, std::size_t b) {
                               const Coord d = distance2(rects[a], rects[b]);
                               if (d == 0 && shapes[a].net >= 0 &&
                                   shapes[a].net == shapes[b].net)
                                 merge.unite(a, b);
                               else if (d < d2)
                                 close.emplace_back(a, b);
                             });

  // Nodes are merged polygons, numbered by their smallest shape index.
  std::map<std::size_t, std::size_t> node_of_root;
  std::vector<std::size_t> node(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto r = merge.find(k);
    auto [it, fresh] = node_of_root.try_emplace(r, node_of_root.size());
    node[k] = it->second;
  }
  const std::size_t nodes = node_of_root.size();
  std::vector<std::vector<int>> node_nets(nodes);
  for (std::size_t k = 0; k < n; ++k) node_nets[node[k]].push_back(shapes[k].net);

  // Closest realising shape pair per conflicting node pair.
  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>> witness;
  std::map<std::pair<std::size_t, std::size_t>, Coord> best;
  for (auto [a, b] : close) {
    std::size_t u = node[a], v = node[b];
    if (u == v) continue;
    if (u > v) {
      std::swap(u, v);
      std::swap(a, b);
    }
    const Coord d = distance2(rects[a], rects[b]);
    const auto key = std::pair{u, v};
    const auto it = best.find(key);
    if (it == best.end() || d < it->second ||
        (d == it->second && std::pair{a, b} < witness[key])) {
      best[key] = d;
      witness[key] = {a, b};
    }
  }
  std::vector<std::vector<std::size_t>> adj(nodes);
  for (const auto& [key, w] : witness) {
    adj[key.first].push_back(key.second);
    adj[key.second].push_back(key.first);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<DrcViolation> out;
  std::vector<int> comp(nodes, -1);
  for (std::size_t s = 0; s < nodes; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> members{s};
    comp[s] = static_cast<int>(s);
    for (std::size_t q = 0; q < members.size(); ++q)
      for (auto v : adj[members[q]])
        if (comp[v] < 0) {
          comp[v] = static_cast<int>(s);
          members.push_back(v);
        }
    // Shortest odd cycle: BFS from every member, an edge between two nodes
    // at equal depth closes a cycle of length 2d+1.
    std::size_t best_len = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> best_cycle;
    std::vector<std::size_t> depth(nodes), parent(nodes);
    std::vector<bool> seen(nodes);
    for (auto root : members) {
      for (auto m : members) seen[m] = false;
      std::deque<std::size_t> q{root};
      seen[root] = true;
      depth[root] = 0;
      parent[root] = root;
      bool found = false;
      while (!q.empty() && !found) {
        const auto u = q.front();
        q.pop_front();
        if (2 * depth[u] + 1 >= best_len) break;
        for (auto v : adj[u]) {
          if (!seen[v]) {
            seen[v] = true;
            depth[v] = depth[u] + 1;
            parent[v] = u;
            q.push_back(v);
          } else if (depth[v] == depth[u] && u < v) {
            // Walk both branches back to their meeting point.
            std::vector<std::size_t> left{u}, right{v};
            while (left.back() != right.back()) {
              left.push_back(parent[left.back()]);
              right.push_back(parent[right.back()]);
            }
            right.pop_back();
            std::reverse(right.begin(), right.end());
            left.insert(left.end(), right.begin(), right.end());
            if (left.size() < best_len) {
              best_len = left.size();
              best_cycle = left;
            }
            found = true;
            break;
          }
        }
      }
    }
    if (best_cycle.empty()) continue;
    DrcViolation v;
    v.rule = Rule::DpOddCycle;
    v.layer = std::string(layer_name);
    std::set<std::string> nets;
    bool first = true;
    for (std::size_t k = 0; k < best_cycle.size(); ++k) {
      const auto a = best_cycle[k], b = best_cycle[(k + 1) % best_cycle.size()];
      const auto [sa, sb] = witness.at({std::min(a, b), std::max(a, b)});
      const Rect box = rects[sa].united(rects[sb]);
      v.marker = first ? box : v.marker.united(box);
      first = false;
      for (int net : node_nets[a])
        if (net >= 0) nets.insert(net_names[net]);
    }
    v.nets.assign(nets.begin(), nets.end());
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DrcViolation> check_layout(const Layout& layout, const TechRules& rules,
                                       const std::set<Rule>& ignore) {
  std::vector<DrcViolation> out;
  const auto& names = layout.net_names;
  const int layers = static_cast<int>(rules.layers.size());
  std::vector<std::vector<std::size_t>> by_layer(layers);
  for (std::size_t k = 0; k < layout.shapes.size(); ++k)
    by_layer.at(layout.shapes[k].layer).push_back(k);

  for (int l = 0; l < layers; ++l) {
    const auto& rule = rules.at(l);
    const auto& idx = by_layer[l];
    std::vector<Rect> rects;
    for (auto k : idx) rects.push_back(layout.shapes[k].rect);
    const bool metal = rule.is_metal();

    if (metal)
      for (std::size_t a = 0; a < idx.size(); ++a) {
        const Shape& s = layout.shapes[idx[a]];
        if (!is_signal(s)) continue;
        if (std::min(s.rect.width(), s.rect.height()) < rule.min_width)
          out.push_back({Rule::MinWidth, rule.name, s.rect, names_of({s.net}, names), {}});
      }

    // Same-net cuts that touch form one cut before the cut spacing check.
    detail::DisjointSets merged(idx.size());
    std::vector<std::pair<std::size_t, std::size_t>> near;
    const Coord reach = std::max(rule.min_spacing, rule.same_net_cut_spacing);
    detail::for_each_near_pair(rects, std::max<Coord>(reach, 1),
                               [&](std::size_t a, std::size_t b) {
                                 const Shape& sa = layout.shapes[idx[a]];
                                 const Shape& sb = layout.shapes[idx[b]];
                                 if (!is_signal(sa) && !is_signal(sb)) return;
                                 const bool same = sa.net >= 0 && sa.net == sb.net;
                                 if (same && rects[a].touches(rects[b]))
                                   merged.unite(a, b);
                                 near.emplace_back(a, b);
                               });
    for (auto [a, b] : near) {
      const Shape& sa = layout.shapes[idx[a]];
      const Shape& sb = layout.shapes[idx[b]];
      const bool same = sa.net >= 0 && sa.net == sb.net;
      const Coord d2 = distance2(rects[a], rects[b]);
      const Rect marker = gap_box(rects[a], rects[b]);
      if (!same) {
        if (d2 == 0)
          out.push_back({Rule::Short, rule.name, marker, names_of({sa.net, sb.net}, names), {}});
        else if (d2 < rule.min_spacing * rule.min_spacing)
          out.push_back({Rule::DiffNetSpacing, rule.name, marker,
                         names_of({sa.net, sb.net}, names), {}});
      } else if (!metal && merged.find(a) != merged.find(b) &&
                 d2 < rule.same_net_cut_spacing * rule.same_net_cut_spacing) {
        out.push_back({Rule::SameNetCutSpacing, rule.name, marker,
                       names_of({sa.net}, names), {}});
      }
    }

    if (!metal) {
      for (int m : {l - 1, l + 1}) {
        if (m < 0 || m >= layers) continue;
        const auto& midx = by_layer[m];
        std::vector<Rect> mrects;
        for (auto k : midx) mrects.push_back(layout.shapes[k].rect);
        std::vector<std::vector<Rect>> cover(idx.size());
        detail::for_each_near_pair(rects, mrects, rule.min_enclosure + 1,
                                   [&](std::size_t a, std::size_t b) {
                                     const Shape& c = layout.shapes[idx[a]];
                                     const Shape& s = layout.shapes[midx[b]];
                                     if (c.net >= 0 && c.net == s.net)
                                       cover[a].push_back(mrects[b]);
                                   });
        for (std::size_t a = 0; a < idx.size(); ++a) {
          const Shape& c = layout.shapes[idx[a]];
          if (c.source != ShapeSource::Route) continue;
          if (!covered(c.rect.expanded(rule.min_enclosure), cover[a]))
            out.push_back({Rule::MinEnclosure, rules.at(m).name, c.rect,
                           names_of({c.net}, names), {}});
        }
      }
    }

    if (metal && rule.dp_spacing) {
      std::vector<Shape> sig;
      for (auto k : idx)
        if (is_signal(layout.shapes[k])) sig.push_back(layout.shapes[k]);
      for (auto& v : check_dp_odd_cycle(sig, *rule.dp_spacing, names, rule.name))
        out.push_back(std::move(v));
    }
  }
  finish(out, ignore);
  return out;
}

std::vector<DrcViolation> check_drc(const RouteDB& db, const std::set<Rule>& ignore) {
  auto out = check_layout(flatten(db), db.rules, ignore);
  if (!ignore.contains(Rule::Open)) {
    const auto verdicts = extract_connectivity(db);
    for (std::size_t k = 0; k < verdicts.size(); ++k) {
      if (!verdicts[k].open) continue;
      const auto& net = db.nets[k];
      Rect box{};
      bool first = true;
      for (const auto& shapes : net.pin_shapes)
        for (const auto& r : shapes) {
          box = first ? r : box.united(r);
          first = false;
        }
      out.push_back({Rule::Open, db.rules.at(layer::M1).name, box, {net.name}, {}});
    }
  }
  finish(out, ignore);
  return out;
}

std::vector<DrcViolation> attribute(std::vector<DrcViolation> violations,
                                    const TestcellSpec& spec, Coord halo) {
  if (halo < 0) throw std::invalid_argument("halo must be non-negative");
  for (auto& v : violations) {
    std::set<std::string> masters;
    for (const auto& i : spec.instances)
      if (i.bbox().expanded(halo).touches(v.marker)) masters.insert(i.master);
    v.masters.assign(masters.begin(), masters.end());
  }
  return violations;
}

std::string format_violations(const std::vector<DrcViolation>& vs) {
  auto join = [](const std::vector<std::string>& v) {
    if (v.empty()) return std::string("-");
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + v[k];
    return s;
  };
  std::ostringstream os;
  for (const auto& v : vs)
    os << rule_key(v.rule) << ' ' << v.layer << ' ' << v.marker.xl << ' ' << v.marker.yl
       << ' ' << v.marker.xh << ' ' << v.marker.yh << ' ' << join(v.nets) << ' '
       << join(v.masters) << '\n';
  return os.str();
}

std::vector<DrcViolation> parse_violations(std::string_view text) {
  std::vector<DrcViolation> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int no = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> v;
    if (s == "-") return v;
    std::size_t b = 0;
    while (true) {
      const auto e = s.find(',', b);
      v.push_back(s.substr(b, e - b));
      if (e == std::string::npos) break;
      b = e + 1;
    }
    return v;
  };
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key, nets, masters;
    DrcViolation v;
    if (!(ls >> key >> v.layer >> v.marker.xl >> v.marker.yl >> v.marker.xh >>
          v.marker.yh >> nets >> masters))
      throw ParseError(no, "malformed violation record");
    std::optional<Rule> r;
    try {
      r = parse_rule_name(key);
    } catch (const std::invalid_argument& e) {
      throw ParseError(no, e.what());
    }
    if (!r) throw ParseError(no, "rule '" + key + "' has no check");
    v.rule = *r;
    v.nets = split(nets);
    v.masters = split(masters);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace pinaccess
