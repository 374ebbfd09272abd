#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pinaccess/geometry.hpp"

namespace pinaccess {

// Thrown by every text parser in the toolkit; carries the 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Exact non-negative rational used for rule-margin scaling.
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  static Rational parse(std::string_view text);  // "1.25", "5/4", "2"
  Rational reduced() const;
  Coord ceil_mul(Coord v) const;  // ceil(v * num / den)
  double to_double() const { return static_cast<double>(num) / den; }
  std::string str() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num * b.den == b.num * a.den;
  }
  friend auto operator<=>(const Rational& a, const Rational& b) {
    return a.num * b.den <=> b.num * a.den;
  }
};

enum class LayerKind { Metal, Via };
enum class Direction { Horizontal, Vertical, None };

struct LayerRule {
  std::string name;
  LayerKind kind = LayerKind::Metal;
  Direction direction = Direction::None;
  Coord pitch = 0;                 // metal only
  Coord min_width = 0;             // cut size on via layers
  Coord min_spacing = 0;           // different-net spacing
  Coord same_net_cut_spacing = 0;  // via only
  Coord min_enclosure = 0;         // via only; overhang on both metals
  std::optional<Coord> dp_spacing;  // metal only

  bool is_metal() const { return kind == LayerKind::Metal; }
  bool operator==(const LayerRule&) const = default;
};

// Layer indices of the fixed five-layer stack the router works on.
namespace layer {
inline constexpr int M1 = 0;
inline constexpr int V1 = 1;
inline constexpr int M2 = 2;
inline constexpr int V2 = 3;
inline constexpr int M3 = 4;
}  // namespace layer

struct TechRules {
  Coord dbu_per_micron = 1000;
  std::vector<LayerRule> layers;
  Coord site_width = 0;
  Coord row_height = 0;
  Rational margin_scale{1, 1};

  const LayerRule& at(int index) const { return layers.at(index); }
  int index_of(std::string_view name) const;  // -1 when absent
  bool operator==(const TechRules&) const = default;
};

enum class PinDirection { Input, Output, Inout };

struct Pin {
  std::string name;
  PinDirection direction = PinDirection::Input;
  std::vector<Rect> shapes;  // M1, cell-local DBU

  bool drives() const { return direction != PinDirection::Input; }
  bool operator==(const Pin&) const = default;
};

struct Rail {
  std::string net;  // "VDD" or "VSS"
  Rect rect;
  bool operator==(const Rail&) const = default;
};

struct Obstruction {
  int layer = 0;
  Rect rect;
  bool operator==(const Obstruction&) const = default;
};

struct CellMaster {
  std::string name;
  Coord width = 0;
  int height_rows = 1;
  std::vector<Pin> pins;
  std::vector<Rail> rails;
  std::vector<Obstruction> obstructions;

  Coord height(const TechRules& rules) const {
    return height_rows * rules.row_height;
  }
  const Pin* find_pin(std::string_view pin) const;
  bool operator==(const CellMaster&) const = default;
};

struct Library {
  TechRules rules;
  std::vector<CellMaster> cells;

  const CellMaster& cell(std::string_view name) const;
  const CellMaster* find(std::string_view name) const;
  bool operator==(const Library&) const = default;
};

// Reads the line-oriented library format (TECH ... END, CELL ... END).
Library parse_library(std::string_view text);
Library read_library_file(const std::string& path);
std::string serialize_library(const Library& lib);
std::string serialize_cell(const CellMaster& cell, const TechRules& rules);
std::string serialize_tech(const TechRules& rules);

// Throws std::invalid_argument naming the offending layer/cell and rule.
void validate(const TechRules& rules);
void validate(const CellMaster& cell, const TechRules& rules);

struct CellProfile {
  std::string name;
  Coord width = 0;
  int height_rows = 1;
  Coord height = 0;
  std::size_t pin_count = 0;
  Rational normalized_width;  // width / minimum cell width
};

struct LibraryProfile {
  std::vector<CellProfile> cells;  // library order
  std::vector<std::string> single_height;
  std::vector<std::string> multi_height;
  Coord min_width = 0;
  Coord row_height = 0;

  const CellProfile& cell(std::string_view name) const;
};

LibraryProfile profile_library(std::span<const CellMaster> cells,
                               Coord row_height);
inline LibraryProfile profile_library(const Library& lib) {
  return profile_library(lib.cells, lib.rules.row_height);
}

// Multiplies min_spacing, min_width, min_enclosure and same_net_cut_spacing
// by `factor`, rounding up. Pitch, dp_spacing and the placement grid are
// left untouched.
TechRules scale_rules(const TechRules& rules, Rational factor);

std::string_view to_string(PinDirection d);

}  // namespace pinaccess
