#pragma once

#include <string>
#include <vector>

#include "pinaccess/techlib.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) {
  return std::string(PINACCESS_TEST_DATA) + "/" + name;
}

inline pinaccess::Library load(const std::string& name) {
  return pinaccess::read_library_file(data_path(name));
}

// The synthetic rule deck shared by every fixture library.
inline pinaccess::TechRules rules() { return load("clean.lib").rules; }

inline pinaccess::Rect bar(int col, int row_lo, int row_hi) {
  return {col * 100 + 10, row_lo * 100 + 10, col * 100 + 90, row_hi * 100 + 90};
}

// Single- or double-height cell with standard rails and the given pins.
inline pinaccess::CellMaster make_cell(const std::string& name, int sites,
                                       std::vector<pinaccess::Pin> pins, int rows = 1) {
  using namespace pinaccess;
  CellMaster c;
  c.name = name;
  c.width = sites * 100;
  c.height_rows = rows;
  c.pins = std::move(pins);
  c.rails.push_back({"VSS", {0, 0, c.width, 30}});
  if (rows == 1) {
    c.rails.push_back({"VDD", {0, 870, c.width, 900}});
  } else {
    c.rails.push_back({"VDD", {0, 870, c.width, 930}});
    c.rails.push_back({"VSS", {0, 1770, c.width, 1800}});
  }
  return c;
}

inline pinaccess::CellMaster inverter(const std::string& name, int sites) {
  using pinaccess::PinDirection;
  return make_cell(name, sites,
                   {{"A", PinDirection::Input, {bar(1, 1, 3)}},
                    {"Y", PinDirection::Output, {bar(1, 5, 7)}}});
}

// 108 single-height cells; 90 of them are at most ten times the minimum
// width (3 sites), the rest are wide.
inline pinaccess::Library library1_like() {
  pinaccess::Library lib;
  lib.rules = rules();
  for (int k = 0; k < 108; ++k) {
    const int sites = k < 90 ? 3 + (k * 27) / 89 : 31 + (k - 90) * 2;
    lib.cells.push_back(inverter("C" + std::to_string(k), sites));
  }
  return lib;
}

inline pinaccess::CellProfile profile(const std::string& name, int sites, int rows = 1) {
  pinaccess::CellProfile p;
  p.name = name;
  p.width = sites * 100;
  p.height_rows = rows;
  p.height = rows * 900;
  p.pin_count = 2;
  return p;
}

inline pinaccess::LibraryProfile single_height_profile(int n) {
  std::vector<pinaccess::CellMaster> cells;
  for (int k = 0; k < n; ++k)
    cells.push_back(inverter("C" + std::to_string(k), 3 + k % 5));
  return pinaccess::profile_library(cells, 900);
}

}  // namespace fixtures
