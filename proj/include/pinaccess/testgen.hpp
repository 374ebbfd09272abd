#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pinaccess/geometry.hpp"
#include "pinaccess/techlib.hpp"

namespace pinaccess {

enum class Method { Conventional, Synopsys, Proposed };
enum class Mode { SingleCellOnly, CellByCellOnly, AllComboInOneCellOnly, All };
enum class Connectivity { Aligned, Random };
enum class TestcellKind { ConventionalPair, SynopsysPair, AaRow, AbRow, MhAb, Combo };

std::string_view to_string(Method m);
std::string_view to_string(Mode m);
std::string_view to_string(Connectivity c);
std::string_view to_string(TestcellKind k);
Method parse_method(std::string_view s);
Mode parse_mode(std::string_view s);
Connectivity parse_connectivity(std::string_view s);

struct Instance {
  std::string name;    // U1..Uk in placement order
  std::string master;
  Point origin;
  Orientation orient = Orientation::N;
  Coord width = 0;
  Coord height = 0;
  std::string group;  // owning testcell id inside a combo placement

  Rect bbox() const {
    return {origin.x, origin.y, origin.x + width, origin.y + height};
  }
  bool operator==(const Instance&) const = default;
};

struct Terminal {
  std::string inst;
  std::string pin;
  auto operator<=>(const Terminal&) const = default;
};

struct Net {
  std::string name;
  std::vector<Terminal> terminals;

  // Nets with a single terminal carry no connection to route.
  bool unconnected() const { return terminals.size() < 2; }
  bool operator==(const Net&) const = default;
};

struct TestcellSpec {
  std::string id;
  TestcellKind kind = TestcellKind::AaRow;
  std::vector<Instance> instances;
  Rect die;
  std::vector<Net> nets;

  const Instance* find_instance(std::string_view name) const;
  bool operator==(const TestcellSpec&) const = default;
};

// Instance count of a full run over n cells. Exact integer arithmetic.
std::uint64_t count_instances(std::uint64_t n, Method method);

// Builders for the individual testcell shapes. Throw std::invalid_argument
// for combinations the method does not support.
TestcellSpec make_aa_row(const CellProfile& a);
TestcellSpec make_ab_row(const CellProfile& a, const CellProfile& b);
TestcellSpec make_mh_ab(const CellProfile& multi, const CellProfile& single);
TestcellSpec make_synopsys_pair(const CellProfile& a, const CellProfile& b,
                                Coord row_gap);
std::vector<TestcellSpec> make_conventional_pair(const CellProfile& a,
                                                 const CellProfile& b);

// Places testcells left to right, `gap` apart, bottom-aligned. Instances are
// renumbered U1..Uk and remember their testcell in `group`; nets already
// assigned are carried over with a "<group>__" prefix.
TestcellSpec compose_combo(const std::vector<TestcellSpec>& testcells, Coord gap,
                           std::string id = "all_combo");

// `combo_gap` is the horizontal spacing used by the all-combo placement and
// the vertical gap between the two rows of a Synopsys testcell.
std::vector<TestcellSpec> enumerate_testcells(const LibraryProfile& profile,
                                              Method method, Mode mode,
                                              Coord combo_gap);

enum class Edge { L, R };

struct BoundaryClass {
  std::string left_master;
  Edge left_edge = Edge::L;
  std::string right_master;
  Edge right_edge = Edge::L;
  bool canonical = false;

  auto operator<=>(const BoundaryClass&) const = default;
  std::string str() const;  // "(A.R|B.L)"
};

// A seam seen from the other side is the same abutment; the canonical form
// is the lexicographically smaller of the two readings.
BoundaryClass canonicalize(const BoundaryClass& c);
// Which original edge of an instance faces right (or left) after placement.
Edge right_side_edge(Orientation o);
Edge left_side_edge(Orientation o);
std::set<BoundaryClass> boundary_classes(const TestcellSpec& spec);

// Populates nets. Aligned joins same-named pins of same-master instances;
// random draws a seeded driver-to-sink matching with fanout 1-3 and ties
// leftover inputs into a "dump" net. Instances of a combo placement are
// connected group by group, so every group gets exactly the nets its
// stand-alone testcell would get.
TestcellSpec assign_connectivity(const TestcellSpec& spec, const Library& lib,
                                 Connectivity strategy, std::uint64_t seed);

// Half-perimeter of the bounding box of the net's pin-shape centres.
Coord net_hpwl(const TestcellSpec& spec, const Library& lib, const Net& net);

}  // namespace pinaccess
