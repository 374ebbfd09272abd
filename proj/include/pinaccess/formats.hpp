#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pinaccess/geometry.hpp"
#include "pinaccess/testgen.hpp"

namespace pinaccess {

struct VerilogInstance {
  std::string master;
  std::string name;
  // Named port connections in file order; an empty net is an explicit
  // unconnected port `.A()`.
  std::vector<std::pair<std::string, std::string>> ports;
  bool operator==(const VerilogInstance&) const = default;
};

struct VerilogModule {
  std::string name;
  std::vector<std::string> wires;
  std::vector<VerilogInstance> instances;
  bool operator==(const VerilogModule&) const = default;
};

struct VerilogNetlist {
  std::vector<VerilogModule> modules;
  bool operator==(const VerilogNetlist&) const = default;
};

// One module named after the testcell; wires in net order, instances in
// placement order, ports sorted by pin name. Throws std::invalid_argument
// when the testcell has no nets.
std::string emit_verilog(const TestcellSpec& spec);
VerilogNetlist parse_verilog(std::string_view text);

using NetMap = std::map<std::string, std::set<Terminal>>;
NetMap connectivity_of(const TestcellSpec& spec);
NetMap connectivity_of(const VerilogModule& module);

struct DefComponent {
  std::string inst;
  std::string master;
  Point origin;
  Orientation orient = Orientation::N;
  bool operator==(const DefComponent&) const = default;
};

struct DefNet {
  std::string name;
  std::vector<Terminal> terminals;
  bool operator==(const DefNet&) const = default;
};

struct DefDocument {
  std::string version = "5.6";
  std::string design;
  Coord dbu = 1000;
  std::vector<DefComponent> components;
  Rect die;
  std::vector<DefNet> nets;
  bool operator==(const DefDocument&) const = default;
};

DefDocument def_from_spec(const TestcellSpec& spec, bool with_nets = false);
// Throws std::invalid_argument naming the first overlapping pair.
std::string emit_def(const TestcellSpec& spec, bool with_nets = false);
std::string emit_def(const DefDocument& doc);
DefDocument parse_def(std::string_view text);

// Master name -> (width, height) lookup used by placement validation.
using SizeLookup = std::function<std::pair<Coord, Coord>(std::string_view)>;

// Pairs of components whose placed boxes share positive area, in
// component order.
std::vector<std::pair<std::string, std::string>> find_overlaps(
    const DefDocument& doc, const SizeLookup& size);

}  // namespace pinaccess
