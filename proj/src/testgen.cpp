#include "pinaccess/testgen.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "pinaccess/random.hpp"

namespace pinaccess {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Conventional: return "conventional";
    case Method::Synopsys: return "synopsys";
    case Method::Proposed: return "proposed";
  }
  return "";
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::SingleCellOnly: return "single_cell_only";
    case Mode::CellByCellOnly: return "cell_by_cell_only";
    case Mode::AllComboInOneCellOnly: return "all_combo_in_one_cell_only";
    case Mode::All: return "all";
  }
  return "";
}

std::string_view to_string(Connectivity c) {
  return c == Connectivity::Aligned ? "aligned" : "random";
}

std::string_view to_string(TestcellKind k) {
  switch (k) {
    case TestcellKind::ConventionalPair: return "conventional_pair";
    case TestcellKind::SynopsysPair: return "synopsys_pair";
    case TestcellKind::AaRow: return "aa_row";
    case TestcellKind::AbRow: return "ab_row";
    case TestcellKind::MhAb: return "mh_ab";
    case TestcellKind::Combo: return "combo";
  }
  return "";
}

Method parse_method(std::string_view s) {
  for (auto m : {Method::Conventional, Method::Synopsys, Method::Proposed})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

Mode parse_mode(std::string_view s) {
  for (auto m : {Mode::SingleCellOnly, Mode::CellByCellOnly,
                 Mode::AllComboInOneCellOnly, Mode::All})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

Connectivity parse_connectivity(std::string_view s) {
  if (s == "aligned") return Connectivity::Aligned;
  if (s == "random") return Connectivity::Random;
  throw std::invalid_argument("unknown connectivity '" + std::string(s) + "'");
}

const Instance* TestcellSpec::find_instance(std::string_view name) const {
  for (const auto& i : instances)
    if (i.name == name) return &i;
  return nullptr;
}

std::uint64_t count_instances(std::uint64_t n, Method method) {
  if (n < 1) throw std::invalid_argument("library size must be at least 1");
  const std::uint64_t pairs = n * (n - 1);
  switch (method) {
    case Method::Conventional: return 8 * n + 8 * pairs;
    case Method::Synopsys: return 6 * n + 6 * pairs;
    case Method::Proposed: return 4 * n + 5 * pairs / 2;
  }
  return 0;
}

namespace {

class Placer {
 public:
  explicit Placer(TestcellSpec& spec) : spec_(spec) {}

  void add(const CellProfile& c, Coord x, Coord y, Orientation o) {
    Instance inst;
    inst.name = "U" + std::to_string(spec_.instances.size() + 1);
    inst.master = c.name;
    inst.origin = {x, y};
    inst.orient = o;
    inst.width = c.width;
    inst.height = c.height;
    spec_.instances.push_back(std::move(inst));
  }

  void finish() {
    Rect die{0, 0, 0, 0};
    for (const auto& i : spec_.instances) die = die.united(i.bbox());
    spec_.die = die;
  }

 private:
  TestcellSpec& spec_;
};

void require_single(const CellProfile& c) {
  if (c.height_rows != 1)
    throw std::invalid_argument("cell " + c.name + " is not single-height");
}

}  // namespace

TestcellSpec make_aa_row(const CellProfile& a) {
  TestcellSpec s;
  s.id = "scell_" + a.name;
  s.kind = TestcellKind::AaRow;
  Placer p(s);
  const Orientation seq[] = {Orientation::N, Orientation::FN, Orientation::FN,
                             Orientation::N};
  for (int k = 0; k < 4; ++k) p.add(a, k * a.width, 0, seq[k]);
  p.finish();
  return s;
}

TestcellSpec make_ab_row(const CellProfile& a, const CellProfile& b) {
  require_single(a);
  require_single(b);
  TestcellSpec s;
  s.id = "scell_" + a.name + "_" + b.name;
  s.kind = TestcellKind::AbRow;
  Placer p(s);
  const CellProfile* seq[] = {&b, &a, &b, &a, &b};
  const Orientation orient[] = {Orientation::N, Orientation::N, Orientation::FN,
                                Orientation::FN, Orientation::N};
  Coord x = 0;
  for (int k = 0; k < 5; ++k) {
    p.add(*seq[k], x, 0, orient[k]);
    x += seq[k]->width;
  }
  p.finish();
  return s;
}

TestcellSpec make_mh_ab(const CellProfile& multi, const CellProfile& single) {
  if (multi.height_rows < 2)
    throw std::invalid_argument("cell " + multi.name + " is not multiple-height");
  if (single.height_rows != 1)
    throw std::invalid_argument(
        "multiple-height to multiple-height abutment is not supported (" +
        multi.name + ", " + single.name + ")");
  TestcellSpec s;
  s.id = "mcell_" + multi.name + "_" + single.name;
  s.kind = TestcellKind::MhAb;
  Placer p(s);
  const Coord wa = multi.width, wb = single.width, hb = single.height;
  // B column | A | B column | A mirrored | B column mirrored.
  p.add(single, 0, 0, Orientation::N);
  p.add(single, 0, hb, Orientation::FS);
  p.add(multi, wb, 0, Orientation::N);
  p.add(single, wb + wa, 0, Orientation::N);
  p.add(single, wb + wa, hb, Orientation::FS);
  p.add(multi, 2 * wb + wa, 0, Orientation::FN);
  p.add(single, 2 * wb + 2 * wa, 0, Orientation::FN);
  p.add(single, 2 * wb + 2 * wa, hb, Orientation::S);
  p.finish();
  return s;
}

TestcellSpec make_synopsys_pair(const CellProfile& a, const CellProfile& b,
                                Coord row_gap) {
  require_single(a);
  require_single(b);
  TestcellSpec s;
  s.id = "tcell_" + a.name + "_" + b.name;
  s.kind = TestcellKind::SynopsysPair;
  Placer p(s);
  const Coord h = std::max(a.height, b.height);
  p.add(b, 0, 0, Orientation::N);
  p.add(a, b.width, 0, Orientation::N);
  p.add(b, b.width + a.width, 0, Orientation::N);
  const Coord y = h + row_gap;
  p.add(b, 0, y, Orientation::FN);
  p.add(a, b.width, y, Orientation::N);
  p.add(b, b.width + a.width, y, Orientation::FN);
  p.finish();
  return s;
}

std::vector<TestcellSpec> make_conventional_pair(const CellProfile& a,
                                                 const CellProfile& b) {
  require_single(a);
  require_single(b);
  const std::pair<Orientation, Orientation> combos[] = {
      {Orientation::N, Orientation::FN},
      {Orientation::FN, Orientation::N},
      {Orientation::S, Orientation::S},
      {Orientation::FS, Orientation::FS}};
  std::vector<TestcellSpec> out;
  for (const auto& [oa, ob] : combos) {
    TestcellSpec s;
    s.id = "ccell_" + a.name + "_" + b.name + "_" + std::string(to_string(oa)) +
           "_" + std::string(to_string(ob));
    s.kind = TestcellKind::ConventionalPair;
    Placer p(s);
    p.add(a, 0, 0, oa);
    p.add(b, a.width, 0, ob);
    p.finish();
    out.push_back(std::move(s));
  }
  return out;
}

TestcellSpec compose_combo(const std::vector<TestcellSpec>& testcells, Coord gap,
                           std::string id) {
  TestcellSpec out;
  out.id = std::move(id);
  out.kind = TestcellKind::Combo;
  Coord x = 0;
  Rect die{0, 0, 0, 0};
  for (const auto& t : testcells) {
    const Coord dx = x - t.die.xl;
    const Coord dy = -t.die.yl;
    std::map<std::string, std::string, std::less<>> rename;
    for (const auto& inst : t.instances) {
      Instance c = inst;
      c.name = "U" + std::to_string(out.instances.size() + 1);
      c.origin = {inst.origin.x + dx, inst.origin.y + dy};
      c.group = t.id;
      rename[inst.name] = c.name;
      die = die.united(c.bbox());
      out.instances.push_back(std::move(c));
    }
    for (const auto& n : t.nets) {
      Net m{t.id + "__" + n.name, {}};
      for (const auto& term : n.terminals)
        m.terminals.push_back({rename.at(term.inst), term.pin});
      out.nets.push_back(std::move(m));
    }
    x += t.die.width() + gap;
  }
  out.die = die;
  return out;
}

std::vector<TestcellSpec> enumerate_testcells(const LibraryProfile& profile,
                                              Method method, Mode mode,
                                              Coord combo_gap) {
  if (profile.cells.empty()) throw std::invalid_argument("empty library");
  std::vector<const CellProfile*> single, multi;
  for (const auto& c : profile.cells)
    (c.height_rows == 1 ? single : multi).push_back(&c);

  const bool pairs = mode != Mode::SingleCellOnly;
  std::vector<TestcellSpec> out;
  switch (method) {
    case Method::Proposed:
      for (const auto& c : profile.cells) out.push_back(make_aa_row(c));
      if (pairs) {
        for (std::size_t i = 0; i < single.size(); ++i)
          for (std::size_t j = i + 1; j < single.size(); ++j)
            out.push_back(make_ab_row(*single[i], *single[j]));
        // Multiple-height pairs are deferred; only multi x single is built.
        for (const auto* m : multi)
          for (const auto* s : single) out.push_back(make_mh_ab(*m, *s));
      }
      break;
    case Method::Synopsys:
      for (const auto* a : single)
        for (const auto* b : single)
          if (pairs || a == b)
            out.push_back(make_synopsys_pair(*a, *b, combo_gap));
      break;
    case Method::Conventional:
      for (const auto* a : single)
        for (const auto* b : single)
          if (pairs || a == b)
            for (auto& t : make_conventional_pair(*a, *b))
              out.push_back(std::move(t));
      break;
  }
  if (mode == Mode::AllComboInOneCellOnly)
    return {compose_combo(out, combo_gap)};
  return out;
}

std::string BoundaryClass::str() const {
  auto e = [](Edge x) { return x == Edge::L ? "L" : "R"; };
  return "(" + left_master + "." + e(left_edge) + "|" + right_master + "." +
         e(right_edge) + ")";
}

BoundaryClass canonicalize(const BoundaryClass& c) {
  BoundaryClass a = c;
  a.canonical = false;
  BoundaryClass b{c.right_master, c.right_edge, c.left_master, c.left_edge, false};
  BoundaryClass out = std::min(a, b);
  out.canonical = true;
  return out;
}

Edge right_side_edge(Orientation o) { return mirrors_x(o) ? Edge::L : Edge::R; }
Edge left_side_edge(Orientation o) { return mirrors_x(o) ? Edge::R : Edge::L; }

std::set<BoundaryClass> boundary_classes(const TestcellSpec& spec) {
  std::set<BoundaryClass> out;
  const auto& in = spec.instances;
  for (const auto& a : in)
    for (const auto& b : in) {
      if (&a == &b) continue;
      const Rect ra = a.bbox(), rb = b.bbox();
      if (ra.xh != rb.xl) continue;
      if (std::min(ra.yh, rb.yh) <= std::max(ra.yl, rb.yl)) continue;
      out.insert(canonicalize({a.master, right_side_edge(a.orient), b.master,
                               left_side_edge(b.orient), false}));
    }
  return out;
}

namespace {

struct PinRef {
  std::size_t inst;  // index within the group
  const Pin* pin;
};

// Connects one group of instances; terminal instance names are local
// (U1..Un by position) and mapped back by the caller.
std::vector<Net> connect_group(const std::vector<const Instance*>& group,
                               const Library& lib, Connectivity strategy,
                               std::uint64_t seed) {
  auto local = [](std::size_t i) { return "U" + std::to_string(i + 1); };
  std::vector<Net> nets;
  if (strategy == Connectivity::Aligned) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < group.size(); ++i) {
      const auto& master = lib.cell(group[i]->master);
      for (const auto& p : master.pins) {
        const std::string name = master.name + "_" + p.name;
        auto [it, fresh] = index.try_emplace(name, nets.size());
        if (fresh) nets.push_back({name, {}});
        nets[it->second].terminals.push_back({local(i), p.name});
      }
    }
    return nets;
  }

  SplitMix64 rng(seed);
  std::vector<PinRef> drivers, sinks;
  for (std::size_t i = 0; i < group.size(); ++i)
    for (const auto& p : lib.cell(group[i]->master).pins)
      (p.drives() ? drivers : sinks).push_back({i, &p});

  auto shuffle = [&](std::vector<std::size_t>& v) {
    for (std::size_t k = v.size(); k > 1; --k)
      std::swap(v[k - 1], v[rng.below(k)]);
  };
  std::vector<std::size_t> order(drivers.size()), pool(sinks.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  for (std::size_t k = 0; k < pool.size(); ++k) pool[k] = k;
  shuffle(order);
  shuffle(pool);

  std::vector<std::vector<std::size_t>> fanout(drivers.size());
  auto take = [&](std::size_t d) {
    for (auto it = pool.begin(); it != pool.end(); ++it)
      if (sinks[*it].inst != drivers[d].inst) {
        fanout[d].push_back(*it);
        pool.erase(it);
        return;
      }
  };
  for (auto d : order) take(d);
  for (auto d : order) {
    const auto extra = rng.below(3);
    for (std::uint64_t k = 0; k < extra; ++k) take(d);
  }

  for (std::size_t d = 0; d < drivers.size(); ++d) {
    const auto& drv = drivers[d];
    Net n{local(drv.inst) + "_" + drv.pin->name, {{local(drv.inst), drv.pin->name}}};
    for (auto s : fanout[d])
      n.terminals.push_back({local(sinks[s].inst), sinks[s].pin->name});
    nets.push_back(std::move(n));
  }
  if (!pool.empty()) {
    std::sort(pool.begin(), pool.end());
    Net dump{"dump", {}};
    for (auto s : pool)
      dump.terminals.push_back({local(sinks[s].inst), sinks[s].pin->name});
    nets.push_back(std::move(dump));
  }
  return nets;
}

}  // namespace

TestcellSpec assign_connectivity(const TestcellSpec& spec, const Library& lib,
                                 Connectivity strategy, std::uint64_t seed) {
  std::size_t signal = 0;
  for (const auto& i : spec.instances) signal += lib.cell(i.master).pins.size();
  if (signal == 0) throw std::invalid_argument("testcell has no signal pins");

  TestcellSpec out = spec;
  out.nets.clear();

  std::vector<std::string> groups;
  std::map<std::string, std::vector<const Instance*>> members;
  for (const auto& i : spec.instances) {
    const std::string g = i.group.empty() ? spec.id : i.group;
    if (!members.contains(g)) groups.push_back(g);
    members[g].push_back(&i);
  }
  const bool combo = groups.size() > 1 || groups.front() != spec.id;
  for (const auto& g : groups) {
    const auto& group = members[g];
    auto nets = connect_group(group, lib, strategy, derive_seed(seed, g));
    for (auto& n : nets) {
      if (combo) n.name = g + "__" + n.name;
      for (auto& t : n.terminals) {
        const std::size_t idx = std::stoul(t.inst.substr(1)) - 1;
        t.inst = group[idx]->name;
      }
      out.nets.push_back(std::move(n));
    }
  }
  return out;
}

Coord net_hpwl(const TestcellSpec& spec, const Library& lib, const Net& net) {
  bool first = true;
  Rect box;
  for (const auto& t : net.terminals) {
    const Instance* inst = spec.find_instance(t.inst);
    if (!inst) throw std::invalid_argument("unknown instance " + t.inst);
    const auto& master = lib.cell(inst->master);
    const Pin* pin = master.find_pin(t.pin);
    if (!pin) throw std::invalid_argument("unknown pin " + t.pin);
    Rect pb = pin->shapes.front();
    for (const auto& s : pin->shapes) pb = pb.united(s);
    const Rect placed = place_rect(pb, inst->orient, inst->origin, inst->width,
                                   inst->height);
    // Doubled centre keeps the arithmetic integral.
    const Point c{placed.xl + placed.xh, placed.yl + placed.yh};
    const Rect pt{c.x, c.y, c.x, c.y};
    box = first ? pt : box.united(pt);
    first = false;
  }
  if (first) return 0;
  return (box.width() + box.height()) / 2;
}

}  // namespace pinaccess
