#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "pinaccess/testgen.hpp"

using namespace pinaccess;

namespace {

std::size_t total_instances(const std::vector<TestcellSpec>& specs) {
  std::size_t n = 0;
  for (const auto& s : specs) n += s.instances.size();
  return n;
}

std::vector<Orientation> orients(const TestcellSpec& s) {
  std::vector<Orientation> out;
  for (const auto& i : s.instances) out.push_back(i.orient);
  return out;
}

std::vector<std::string> masters(const TestcellSpec& s) {
  std::vector<std::string> out;
  for (const auto& i : s.instances) out.push_back(i.master);
  return out;
}

std::set<std::string> class_strings(const TestcellSpec& s) {
  std::set<std::string> out;
  for (const auto& c : boundary_classes(s)) out.insert(c.str());
  return out;
}

// Which original edge faces a seam, computed from the placed pin geometry:
// a marker rectangle at the cell's original right edge is transformed and
// checked against the placed box.
Edge facing(const Instance& inst, bool right_side) {
  const Rect marker{inst.width - 1, 0, inst.width, 1};
  const Rect placed = place_rect(marker, inst.orient, inst.origin, inst.width, inst.height);
  const bool marker_on_right = placed.xh == inst.origin.x + inst.width;
  return marker_on_right == right_side ? Edge::R : Edge::L;
}

void check_layout_invariants(const TestcellSpec& s, const Library& lib) {
  std::set<std::string> names;
  for (const auto& i : s.instances) {
    EXPECT_TRUE(s.die.contains(i.bbox())) << s.id << " " << i.name;
    EXPECT_TRUE(names.insert(i.name).second) << s.id;
  }
  for (std::size_t a = 0; a < s.instances.size(); ++a)
    for (std::size_t b = a + 1; b < s.instances.size(); ++b)
      EXPECT_FALSE(s.instances[a].bbox().overlaps(s.instances[b].bbox()))
          << s.id << " " << s.instances[a].name << " " << s.instances[b].name;
  // Every signal pin appears in exactly one net.
  std::map<Terminal, int> seen;
  std::set<std::string> net_names;
  for (const auto& n : s.nets) {
    EXPECT_TRUE(net_names.insert(n.name).second) << s.id << " " << n.name;
    for (const auto& t : n.terminals) ++seen[t];
  }
  std::size_t pins = 0;
  for (const auto& i : s.instances)
    for (const auto& p : lib.cell(i.master).pins) {
      ++pins;
      const Terminal key{i.name, p.name};
      EXPECT_EQ(seen[key], 1) << s.id << " " << i.name << "." << p.name;
    }
  EXPECT_EQ(seen.size(), pins) << s.id;
}

}  // namespace

TEST(CountInstances, KnownCounts) {
  EXPECT_EQ(count_instances(1000, Method::Conventional), 8'000'000u);
  EXPECT_EQ(count_instances(1000, Method::Synopsys), 6'000'000u);
  EXPECT_EQ(count_instances(1, Method::Proposed), 4u);
  EXPECT_EQ(count_instances(1000, Method::Proposed), 2'501'500u);
  EXPECT_THROW(count_instances(0, Method::Proposed), std::invalid_argument);
}

TEST(CountInstances, ReductionOrdering) {
  for (std::uint64_t n = 2; n <= 2000; ++n) {
    EXPECT_LT(count_instances(n, Method::Proposed), count_instances(n, Method::Synopsys));
    EXPECT_LT(count_instances(n, Method::Synopsys), count_instances(n, Method::Conventional));
  }
  const double r = static_cast<double>(count_instances(1000, Method::Conventional)) /
                   static_cast<double>(count_instances(1000, Method::Proposed));
  EXPECT_NEAR(r, 3.2, 0.01);
}

TEST(Enumerate, SingleCellProposed) {
  const auto p = fixtures::single_height_profile(1);
  const auto specs = enumerate_testcells(p, Method::Proposed, Mode::CellByCellOnly, 200);
  ASSERT_EQ(specs.size(), 1u);
  EXPECT_EQ(specs[0].id, "scell_C0");
  EXPECT_EQ(specs[0].instances.size(), 4u);
  EXPECT_EQ(orients(specs[0]), (std::vector{Orientation::N, Orientation::FN, Orientation::FN,
                                            Orientation::N}));
}

TEST(Enumerate, TwoCellsThirteenInstances) {
  const auto p = fixtures::single_height_profile(2);
  const auto specs = enumerate_testcells(p, Method::Proposed, Mode::CellByCellOnly, 200);
  ASSERT_EQ(specs.size(), 3u);
  EXPECT_EQ(total_instances(specs), 13u);
  EXPECT_EQ(specs[2].id, "scell_C0_C1");
  EXPECT_EQ(masters(specs[2]), (std::vector<std::string>{"C1", "C0", "C1", "C0", "C1"}));
  EXPECT_EQ(orients(specs[2]), (std::vector{Orientation::N, Orientation::N, Orientation::FN,
                                            Orientation::FN, Orientation::N}));
}

TEST(Enumerate, SynopsysPair) {
  const auto p = fixtures::single_height_profile(2);
  const auto s = make_synopsys_pair(p.cells[0], p.cells[1], 200);
  ASSERT_EQ(s.instances.size(), 6u);
  EXPECT_EQ(masters(s), (std::vector<std::string>{"C1", "C0", "C1", "C1", "C0", "C1"}));
  EXPECT_EQ(s.instances[1].orient, Orientation::N);
  EXPECT_EQ(s.instances[4].orient, Orientation::N);
  EXPECT_EQ(orients(s), (std::vector{Orientation::N, Orientation::N, Orientation::N,
                                     Orientation::FN, Orientation::N, Orientation::FN}));
  EXPECT_GT(s.instances[3].origin.y, s.instances[0].origin.y);
}

TEST(Enumerate, TenCellsAllMode) {
  const auto lib = fixtures::load("lib10.lib");
  const auto specs =
      enumerate_testcells(profile_library(lib), Method::Proposed, Mode::All, 200);
  EXPECT_EQ(total_instances(specs), 265u);
  const auto combo = enumerate_testcells(profile_library(lib), Method::Proposed,
                                         Mode::AllComboInOneCellOnly, 200);
  ASSERT_EQ(combo.size(), 1u);
  EXPECT_EQ(combo[0].instances.size(), 265u);
  EXPECT_EQ(combo[0].kind, TestcellKind::Combo);
}

TEST(Enumerate, InstanceCountIdentity) {
  for (std::uint64_t n = 1; n <= 50; ++n) {
    const auto p = fixtures::single_height_profile(static_cast<int>(n));
    for (Method m : {Method::Proposed, Method::Synopsys, Method::Conventional}) {
      const auto specs = enumerate_testcells(p, m, Mode::CellByCellOnly, 200);
      ASSERT_EQ(total_instances(specs), count_instances(n, m)) << n << " " << to_string(m);
    }
  }
}

TEST(Enumerate, ModeContainment) {
  const auto lib = fixtures::load("clean.lib");
  const auto p = profile_library(lib);
  auto ids = [&](Mode m) {
    std::set<std::string> out;
    for (const auto& s : enumerate_testcells(p, Method::Proposed, m, 200)) out.insert(s.id);
    return out;
  };
  const auto single = ids(Mode::SingleCellOnly);
  const auto cbc = ids(Mode::CellByCellOnly);
  const auto all = ids(Mode::All);
  EXPECT_TRUE(std::includes(cbc.begin(), cbc.end(), single.begin(), single.end()));
  EXPECT_TRUE(std::includes(all.begin(), all.end(), cbc.begin(), cbc.end()));
  EXPECT_EQ(single.size(), lib.cells.size());
  // clean.lib holds one double-height cell: it gets an aa_row and mh_ab
  // testcells with every single-height cell.
  EXPECT_TRUE(cbc.contains("mcell_DFFX1_INVX1"));
}

TEST(Enumerate, MultiHeight) {
  auto multi = fixtures::profile("M", 6, 2);
  auto single = fixtures::profile("S", 3);
  const auto s = make_mh_ab(multi, single);
  EXPECT_EQ(s.id, "mcell_M_S");
  ASSERT_EQ(s.instances.size(), 8u);
  EXPECT_EQ(s.die.height(), 1800);
  EXPECT_THROW(make_mh_ab(multi, fixtures::profile("M2", 4, 2)), std::invalid_argument);
  EXPECT_THROW(make_ab_row(multi, single), std::invalid_argument);
  // Two multi-height cells in one library: no multi x multi testcell.
  const std::vector<CellMaster> cells{
      fixtures::make_cell("M1", 6, {{"A", PinDirection::Input, {fixtures::bar(1, 1, 3)}}}, 2),
      fixtures::make_cell("M2", 4, {{"A", PinDirection::Input, {fixtures::bar(1, 1, 3)}}}, 2),
      fixtures::inverter("S", 3)};
  const auto specs = enumerate_testcells(profile_library(cells, 900), Method::Proposed,
                                         Mode::CellByCellOnly, 200);
  for (const auto& t : specs) EXPECT_NE(t.id, "mcell_M1_M2");
  EXPECT_EQ(specs.size(), 3u + 2u);
}

TEST(BoundaryClasses, AaRow) {
  const auto s = make_aa_row(fixtures::profile("A", 3));
  EXPECT_EQ(class_strings(s), (std::set<std::string>{"(A.R|A.R)", "(A.L|A.R)", "(A.L|A.L)"}));
}

TEST(BoundaryClasses, AbRow) {
  const auto s = make_ab_row(fixtures::profile("A", 3), fixtures::profile("B", 5));
  const auto got = boundary_classes(s);
  EXPECT_EQ(got.size(), 4u);
  // Each expected seam reading canonicalises into the produced set.
  for (const auto& c : {BoundaryClass{"B", Edge::R, "A", Edge::L},
                        BoundaryClass{"A", Edge::R, "B", Edge::R},
                        BoundaryClass{"A", Edge::R, "B", Edge::L},
                        BoundaryClass{"A", Edge::L, "B", Edge::L}})
    EXPECT_TRUE(got.contains(canonicalize(c))) << c.str();
}

TEST(BoundaryClasses, SingleInstanceHasNone) {
  TestcellSpec s;
  s.instances.push_back({"U1", "A", {0, 0}, Orientation::N, 300, 900, ""});
  EXPECT_TRUE(boundary_classes(s).empty());
}

TEST(BoundaryClasses, MatchesGeometricOracle) {
  const auto lib = fixtures::load("clean.lib");
  for (Method m : {Method::Proposed, Method::Synopsys, Method::Conventional})
    for (const auto& s : enumerate_testcells(profile_library(lib), m, Mode::CellByCellOnly, 200)) {
      std::set<BoundaryClass> want;
      for (const auto& a : s.instances)
        for (const auto& b : s.instances) {
          if (a.bbox().xh != b.bbox().xl) continue;
          if (std::min(a.bbox().yh, b.bbox().yh) <= std::max(a.bbox().yl, b.bbox().yl)) continue;
          want.insert(canonicalize({a.master, facing(a, true), b.master, facing(b, false)}));
        }
      EXPECT_EQ(boundary_classes(s), want) << s.id;
    }
}

TEST(BoundaryClasses, CanonicalFormIsSwapInvariant) {
  for (Edge x : {Edge::L, Edge::R})
    for (Edge y : {Edge::L, Edge::R}) {
      const BoundaryClass a{"P", x, "Q", y};
      const BoundaryClass b{"Q", y, "P", x};
      EXPECT_EQ(canonicalize(a), canonicalize(b));
      EXPECT_TRUE(canonicalize(a).canonical);
      EXPECT_EQ(canonicalize(canonicalize(a)), canonicalize(a));
    }
}

TEST(BoundaryClasses, OrientationEdges) {
  EXPECT_EQ(right_side_edge(Orientation::N), Edge::R);
  EXPECT_EQ(right_side_edge(Orientation::FN), Edge::L);
  EXPECT_EQ(right_side_edge(Orientation::S), Edge::L);
  EXPECT_EQ(right_side_edge(Orientation::FS), Edge::R);
  EXPECT_EQ(left_side_edge(Orientation::FN), Edge::R);
}

TEST(Connectivity, AlignedSynopsysPair) {
  const auto lib = fixtures::load("clean.lib");
  const auto p = profile_library(lib);
  const auto s = assign_connectivity(
      make_synopsys_pair(p.cell("NAND2X1"), p.cell("INVX1"), 200), lib, Connectivity::Aligned, 1);
  const Net* bx = nullptr;
  for (const auto& n : s.nets)
    if (n.name == "INVX1_A") bx = &n;
  ASSERT_NE(bx, nullptr);
  std::set<std::string> insts;
  for (const auto& t : bx->terminals) {
    EXPECT_EQ(t.pin, "A");
    EXPECT_EQ(s.find_instance(t.inst)->master, "INVX1");
    insts.insert(t.inst);
  }
  EXPECT_EQ(insts.size(), 4u);
  check_layout_invariants(s, lib);
}

TEST(Connectivity, RandomIsDeterministic) {
  const auto lib = fixtures::load("clean.lib");
  const auto p = profile_library(lib);
  const auto raw = make_ab_row(p.cell("NAND2X1"), p.cell("AOI21X1"));
  for (std::uint64_t seed : {1ULL, 7ULL, 123456789ULL}) {
    const auto a = assign_connectivity(raw, lib, Connectivity::Random, seed);
    const auto b = assign_connectivity(raw, lib, Connectivity::Random, seed);
    EXPECT_EQ(a, b);
  }
  EXPECT_NE(assign_connectivity(raw, lib, Connectivity::Random, 1).nets,
            assign_connectivity(raw, lib, Connectivity::Random, 2).nets);
}

TEST(Connectivity, RandomStructure) {
  const auto lib = fixtures::load("lib10.lib");
  for (const auto& raw :
       enumerate_testcells(profile_library(lib), Method::Proposed, Mode::CellByCellOnly, 200))
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto s = assign_connectivity(raw, lib, Connectivity::Random, seed);
      check_layout_invariants(s, lib);
      for (const auto& n : s.nets) {
        if (n.name == "dump") {
          for (const auto& t : n.terminals)
            EXPECT_FALSE(lib.cell(s.find_instance(t.inst)->master).find_pin(t.pin)->drives());
          continue;
        }
        // Driver first, then 1-3 sinks on other instances (or none when
        // every sink is taken).
        ASSERT_FALSE(n.terminals.empty());
        const auto& drv = n.terminals.front();
        EXPECT_TRUE(lib.cell(s.find_instance(drv.inst)->master).find_pin(drv.pin)->drives());
        EXPECT_LE(n.terminals.size(), 4u);
        for (std::size_t k = 1; k < n.terminals.size(); ++k)
          EXPECT_NE(n.terminals[k].inst, drv.inst);
      }
    }
}

TEST(Connectivity, RandomLengthensNets) {
  const auto lib = fixtures::load("clean.lib");
  const auto p = profile_library(lib);
  const auto raw = make_ab_row(p.cell("NAND2X1"), p.cell("AOI21X1"));
  auto mean = [&](const TestcellSpec& s) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& net : s.nets)
      if (!net.unconnected()) {
        sum += static_cast<double>(net_hpwl(s, lib, net));
        ++n;
      }
    return sum / static_cast<double>(n);
  };
  const double aligned = mean(assign_connectivity(raw, lib, Connectivity::Aligned, 0));
  double random = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed)
    random += mean(assign_connectivity(raw, lib, Connectivity::Random, seed));
  random /= 100;
  EXPECT_GT(random, aligned);
}

TEST(Connectivity, HpwlIsHalfPerimeter) {
  const auto lib = fixtures::load("clean.lib");
  auto s = make_aa_row(profile_library(lib).cell("INVX1"));
  // Pin A of U1 (N, centre 150,250) and U2 (FN at x=300, centre 450,250).
  const Net n{"x", {{"U1", "A"}, {"U2", "A"}}};
  EXPECT_EQ(net_hpwl(s, lib, n), 300);
  const Net m{"y", {{"U1", "A"}, {"U1", "Y"}}};
  EXPECT_EQ(net_hpwl(s, lib, m), 400);
}

TEST(Connectivity, ComboKeepsGroupsDisjoint) {
  const auto lib = fixtures::load("clean.lib");
  const auto p = profile_library(lib);
  std::vector<TestcellSpec> parts;
  for (const auto& s : enumerate_testcells(p, Method::Proposed, Mode::CellByCellOnly, 200))
    parts.push_back(assign_connectivity(s, lib, Connectivity::Random, 3));
  const auto combo = compose_combo(parts, 200);
  const auto redone = assign_connectivity(compose_combo(
                                              [&] {
                                                auto raw = parts;
                                                for (auto& r : raw) r.nets.clear();
                                                return raw;
                                              }(),
                                              200),
                                          lib, Connectivity::Random, 3);
  EXPECT_EQ(combo.nets, redone.nets);
  check_layout_invariants(combo, lib);
  for (const auto& n : combo.nets) {
    std::set<std::string> groups;
    for (const auto& t : n.terminals) groups.insert(combo.find_instance(t.inst)->group);
    EXPECT_EQ(groups.size(), 1u) << n.name;
    EXPECT_EQ(n.name.substr(0, n.name.find("__")), *groups.begin());
  }
  // Testcells sit 200 apart, bottom-aligned.
  EXPECT_EQ(combo.instances[4].origin.x, parts[0].die.width() + 200);
}

TEST(Connectivity, NoSignalPinsRejected) {
  Library lib;
  lib.rules = fixtures::rules();
  auto c = fixtures::inverter("BARE", 3);
  c.pins.clear();
  lib.cells.push_back(c);
  EXPECT_THROW(assign_connectivity(make_aa_row(fixtures::profile("BARE", 3)), lib,
                                   Connectivity::Aligned, 1),
               std::invalid_argument);
}

TEST(Enums, ParseAndPrint) {
  for (Method m : {Method::Proposed, Method::Synopsys, Method::Conventional})
    EXPECT_EQ(parse_method(to_string(m)), m);
  for (Mode m : {Mode::SingleCellOnly, Mode::CellByCellOnly, Mode::AllComboInOneCellOnly,
                 Mode::All})
    EXPECT_EQ(parse_mode(to_string(m)), m);
  EXPECT_EQ(to_string(Mode::SingleCellOnly), "single_cell_only");
  EXPECT_THROW(parse_method("fast"), std::invalid_argument);
  EXPECT_THROW(parse_connectivity("chaotic"), std::invalid_argument);
}
