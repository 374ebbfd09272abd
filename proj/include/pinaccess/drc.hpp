#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pinaccess/geometry.hpp"
#include "pinaccess/router.hpp"
#include "pinaccess/techlib.hpp"
#include "pinaccess/testgen.hpp"

namespace pinaccess {

enum class Rule {
  DiffNetSpacing,
  SameNetCutSpacing,
  MinWidth,
  MinEnclosure,
  DpOddCycle,
  Short,
  Open,
};

std::string_view rule_key(Rule r);      // "diff_net_spacing"
std::string_view rule_display(Rule r);  // "Diff net spacing"

// Accepts rule keys, display names, and the names that are recognised for
// suppression only (end-of-line and variable-rule spacing). Returns nullopt
// for a recognised name with no check behind it; throws
// std::invalid_argument for anything else.
std::optional<Rule> parse_rule_name(std::string_view name);
std::set<Rule> parse_ignore_list(const std::vector<std::string>& names);

struct DrcViolation {
  Rule rule = Rule::DiffNetSpacing;
  std::string layer;
  Rect marker;
  std::vector<std::string> nets;     // sorted
  std::vector<std::string> masters;  // sorted; empty = routing-only

  auto operator<=>(const DrcViolation&) const = default;
};

// Geometric checks on a flat layout: shorts, different-net spacing,
// same-net cut spacing, metal min width, via enclosure and double-pattern
// odd cycles. Pairs of two non-signal shapes are not checked. Output is
// sorted and free of duplicates.
std::vector<DrcViolation> check_layout(const Layout& layout, const TechRules& rules,
                                       const std::set<Rule>& ignore = {});

// Full check of a routed testcell: check_layout plus opens found by
// extract_connectivity.
std::vector<DrcViolation> check_drc(const RouteDB& db, const std::set<Rule>& ignore = {});

// Odd-cycle check on one metal layer. Touching shapes of the same net form
// one node; nodes conflict when two of their shapes are closer than
// `dp_spacing`. One violation per non-bipartite conflict component, marked
// by the shapes along a shortest odd cycle.
std::vector<DrcViolation> check_dp_odd_cycle(const std::vector<Shape>& shapes,
                                             Coord dp_spacing,
                                             const std::vector<std::string>& net_names,
                                             std::string_view layer_name);

// Fills `masters` from the instances whose halo-expanded boxes touch the
// marker.
std::vector<DrcViolation> attribute(std::vector<DrcViolation> violations,
                                    const TestcellSpec& spec, Coord halo);

// Stable one-line-per-violation text form and its parser.
std::string format_violations(const std::vector<DrcViolation>& v);
std::vector<DrcViolation> parse_violations(std::string_view text);

}  // namespace pinaccess
