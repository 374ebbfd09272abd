#include "pinaccess/techlib.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace pinaccess {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r')
      ++j;
    words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

Coord to_coord(std::string_view w, int line) {
  Coord v = 0;
  auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec != std::errc{} || ptr != w.data() + w.size())
    throw ParseError(line, "expected integer, got '" + std::string(w) + "'");
  return v;
}

class LibraryReader {
 public:
  explicit LibraryReader(std::string_view text) : text_(text) {}

  Library read() {
    Library lib;
    bool have_tech = false;
    std::set<std::string, std::less<>> names;
    while (next_line()) {
      if (words_[0] == "TECH") {
        expect_count(1);
        if (have_tech) fail("duplicate TECH section");
        lib.rules = read_tech();
        have_tech = true;
      } else if (words_[0] == "CELL") {
        expect_count(2);
        if (!have_tech) fail("CELL before TECH section");
        const int cell_line = line_no_;
        CellMaster cell = read_cell(std::string(words_[1]), lib.rules);
        if (!names.insert(cell.name).second)
          throw ParseError(cell_line, "duplicate cell '" + cell.name + "'");
        lib.cells.push_back(std::move(cell));
      } else {
        fail("unknown keyword '" + std::string(words_[0]) + "'");
      }
    }
    if (!have_tech) throw ParseError(line_no_, "missing TECH section");
    return lib;
  }

 private:
  bool next_line() {
    while (pos_ < text_.size()) {
      const std::size_t end = text_.find('\n', pos_);
      std::string_view line =
          text_.substr(pos_, end == std::string_view::npos ? text_.size() - pos_
                                                           : end - pos_);
      pos_ = end == std::string_view::npos ? text_.size() : end + 1;
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      words_ = split_words(line);
      if (!words_.empty()) return true;
    }
    words_.clear();
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line_no_, msg);
  }

  void expect_count(std::size_t n) const {
    if (words_.size() != n)
      fail("'" + std::string(words_[0]) + "' expects " + std::to_string(n - 1) +
           " argument(s)");
  }

  Coord num(std::size_t i) const { return to_coord(words_.at(i), line_no_); }

  TechRules read_tech() {
    TechRules rules;
    bool have_dbu = false, have_site = false, have_row = false;
    while (true) {
      if (!next_line()) fail("unterminated TECH section");
      const auto kw = words_[0];
      if (kw == "END") {
        expect_count(1);
        break;
      } else if (kw == "DBU") {
        expect_count(2);
        rules.dbu_per_micron = num(1);
        have_dbu = true;
      } else if (kw == "SITE") {
        expect_count(2);
        rules.site_width = num(1);
        have_site = true;
      } else if (kw == "ROW") {
        expect_count(2);
        rules.row_height = num(1);
        have_row = true;
      } else if (kw == "LAYER") {
        rules.layers.push_back(read_layer());
      } else {
        fail("unknown keyword '" + std::string(kw) + "' in TECH");
      }
    }
    if (!have_dbu || !have_site || !have_row)
      fail("TECH section requires DBU, SITE and ROW");
    try {
      validate(rules);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    return rules;
  }

  LayerRule read_layer() {
    if (words_.size() < 3) fail("LAYER expects a name and a kind");
    LayerRule l;
    l.name = std::string(words_[1]);
    if (words_[2] == "metal")
      l.kind = LayerKind::Metal;
    else if (words_[2] == "via")
      l.kind = LayerKind::Via;
    else
      fail("layer kind must be metal or via");
    std::size_t i = 3;
    if (i < words_.size() && (words_[i] == "H" || words_[i] == "V")) {
      if (l.kind == LayerKind::Via) fail("via layer cannot have a direction");
      l.direction = words_[i] == "H" ? Direction::Horizontal : Direction::Vertical;
      ++i;
    }
    std::set<std::string_view> seen;
    for (; i < words_.size(); i += 2) {
      const auto key = words_[i];
      if (i + 1 >= words_.size())
        fail("missing value for '" + std::string(key) + "'");
      if (!seen.insert(key).second)
        fail("duplicate '" + std::string(key) + "'");
      const Coord v = num(i + 1);
      if (key == "PITCH")
        l.pitch = v;
      else if (key == "WIDTH")
        l.min_width = v;
      else if (key == "SPACING")
        l.min_spacing = v;
      else if (key == "CUTSPACING")
        l.same_net_cut_spacing = v;
      else if (key == "ENCLOSURE")
        l.min_enclosure = v;
      else if (key == "DPSPACING")
        l.dp_spacing = v;
      else
        fail("unknown keyword '" + std::string(key) + "' in LAYER");
    }
    const bool metal = l.is_metal();
    auto need = [&](std::string_view k) {
      if (!seen.contains(k))
        fail("layer " + l.name + " requires " + std::string(k));
    };
    auto forbid = [&](std::string_view k) {
      if (seen.contains(k))
        fail(std::string(k) + " is not allowed on " +
             (metal ? "metal" : "via") + " layer " + l.name);
    };
    need("WIDTH");
    need("SPACING");
    if (metal) {
      need("PITCH");
      forbid("CUTSPACING");
      forbid("ENCLOSURE");
    } else {
      need("CUTSPACING");
      need("ENCLOSURE");
      forbid("PITCH");
      forbid("DPSPACING");
    }
    return l;
  }

  Rect read_rect(std::size_t at) const {
    if (words_.size() != at + 5 || words_[at] != "RECT")
      fail("expected RECT <x1> <y1> <x2> <y2>");
    Rect r{num(at + 1), num(at + 2), num(at + 3), num(at + 4)};
    if (!r.has_area()) fail("degenerate rectangle");
    return r;
  }

  CellMaster read_cell(std::string name, const TechRules& rules) {
    CellMaster cell;
    cell.name = std::move(name);
    bool have_size = false;
    while (true) {
      if (!next_line()) fail("unterminated CELL " + cell.name);
      const auto kw = words_[0];
      if (kw == "END") {
        expect_count(1);
        break;
      } else if (kw == "SIZE") {
        expect_count(3);
        cell.width = num(1);
        cell.height_rows = static_cast<int>(num(2));
        have_size = true;
      } else if (kw == "PIN") {
        if (words_.size() < 3) fail("PIN expects name, direction and RECT");
        PinDirection dir;
        if (words_[2] == "IN")
          dir = PinDirection::Input;
        else if (words_[2] == "OUT")
          dir = PinDirection::Output;
        else if (words_[2] == "INOUT")
          dir = PinDirection::Inout;
        else
          fail("pin direction must be IN, OUT or INOUT");
        const Rect r = read_rect(3);
        const std::string pin_name(words_[1]);
        auto it = std::find_if(cell.pins.begin(), cell.pins.end(),
                               [&](const Pin& p) { return p.name == pin_name; });
        if (it == cell.pins.end()) {
          cell.pins.push_back(Pin{pin_name, dir, {r}});
        } else {
          if (it->direction != dir)
            fail("pin " + pin_name + " of cell " + cell.name +
                 " redeclared with a different direction");
          it->shapes.push_back(r);
        }
      } else if (kw == "OBS") {
        if (words_.size() < 2) fail("OBS expects a layer and RECT");
        const int idx = rules.index_of(words_[1]);
        if (idx < 0) fail("unknown layer '" + std::string(words_[1]) + "'");
        cell.obstructions.push_back({idx, read_rect(2)});
      } else if (kw == "RAIL") {
        if (words_.size() < 2 || (words_[1] != "VDD" && words_[1] != "VSS"))
          fail("RAIL expects VDD or VSS");
        cell.rails.push_back({std::string(words_[1]), read_rect(2)});
      } else {
        fail("unknown keyword '" + std::string(kw) + "' in CELL");
      }
    }
    if (!have_size) fail("cell " + cell.name + " has no SIZE");
    try {
      validate(cell, rules);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    return cell;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
  std::vector<std::string_view> words_;
};

void write_rect(std::ostringstream& os, const Rect& r) {
  os << "RECT " << r.xl << ' ' << r.yl << ' ' << r.xh << ' ' << r.yh;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  auto bad = [&] {
    return std::invalid_argument("invalid rational '" + std::string(text) + "'");
  };
  auto integer = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) throw bad();
    return v;
  };
  Rational r;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    r = {integer(text.substr(0, slash)), integer(text.substr(slash + 1))};
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 9) throw bad();
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t whole = dot == 0 ? 0 : integer(text.substr(0, dot));
    const std::int64_t part = frac.empty() ? 0 : integer(frac);
    if (whole < 0 || part < 0) throw bad();
    r = {whole * den + part, den};
  } else {
    r = {integer(text), 1};
  }
  if (r.den <= 0 || r.num < 0) throw bad();
  return r.reduced();
}

Rational Rational::reduced() const {
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? *this : Rational{num / g, den / g};
}

Coord Rational::ceil_mul(Coord v) const {
  const __int128 p = static_cast<__int128>(v) * num;
  __int128 q = p / den;
  if (p % den != 0 && p > 0) ++q;
  return static_cast<Coord>(q);
}

std::string Rational::str() const {
  const Rational r = reduced();
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

int TechRules::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (layers[i].name == name) return static_cast<int>(i);
  return -1;
}

const Pin* CellMaster::find_pin(std::string_view pin) const {
  for (const auto& p : pins)
    if (p.name == pin) return &p;
  return nullptr;
}

const CellMaster* Library::find(std::string_view name) const {
  for (const auto& c : cells)
    if (c.name == name) return &c;
  return nullptr;
}

const CellMaster& Library::cell(std::string_view name) const {
  if (const auto* c = find(name)) return *c;
  throw std::out_of_range("no cell named '" + std::string(name) + "'");
}

const CellProfile& LibraryProfile::cell(std::string_view name) const {
  for (const auto& c : cells)
    if (c.name == name) return c;
  throw std::out_of_range("no cell named '" + std::string(name) + "'");
}

void validate(const TechRules& rules) {
  auto bad = [](const std::string& m) { throw std::invalid_argument(m); };
  if (rules.dbu_per_micron != 1000) bad("DBU must be 1000");
  if (rules.site_width <= 0) bad("SITE must be positive");
  if (rules.row_height <= 0) bad("ROW must be positive");
  if (rules.layers.empty() || rules.layers.size() % 2 == 0)
    bad("layers must alternate metal/via starting and ending with metal");
  std::set<std::string> names;
  for (std::size_t i = 0; i < rules.layers.size(); ++i) {
    const auto& l = rules.layers[i];
    if (!names.insert(l.name).second) bad("duplicate layer " + l.name);
    const bool want_metal = i % 2 == 0;
    if (l.is_metal() != want_metal)
      bad("layer " + l.name + ": layers must alternate metal/via");
    if (l.min_width <= 0 || l.min_spacing <= 0)
      bad("layer " + l.name + ": distances must be positive");
    if (l.is_metal()) {
      if (l.pitch <= 0) bad("layer " + l.name + ": pitch must be positive");
      if (l.min_width > l.pitch)
        bad("layer " + l.name + ": min width exceeds pitch");
      if (l.dp_spacing && *l.dp_spacing <= 0)
        bad("layer " + l.name + ": dp spacing must be positive");
    } else if (l.same_net_cut_spacing <= 0 || l.min_enclosure <= 0) {
      bad("layer " + l.name + ": distances must be positive");
    }
  }
}

void validate(const CellMaster& cell, const TechRules& rules) {
  auto bad = [&](const std::string& m) {
    throw std::invalid_argument("cell " + cell.name + ": " + m);
  };
  if (cell.width <= 0 || rules.site_width <= 0 ||
      cell.width % rules.site_width != 0)
    bad("width must be a positive multiple of the site width");
  if (cell.height_rows < 1) bad("height must be at least one row");
  const Rect box{0, 0, cell.width, cell.height(rules)};
  std::size_t signal = 0;
  for (std::size_t i = 0; i < cell.pins.size(); ++i) {
    const auto& p = cell.pins[i];
    for (std::size_t j = 0; j < i; ++j)
      if (cell.pins[j].name == p.name) bad("duplicate pin " + p.name);
    if (p.shapes.empty()) bad("pin " + p.name + " has no shapes");
    for (const auto& s : p.shapes)
      if (!box.contains(s)) bad("pin " + p.name + " lies outside the cell");
    ++signal;
  }
  if (signal == 0) bad("at least one signal pin is required");
  for (const auto& r : cell.rails) {
    if (r.rect.xl != 0 || r.rect.xh != cell.width)
      bad(r.net + " rail must span the full cell width");
    if (!box.contains(r.rect)) bad(r.net + " rail lies outside the cell");
  }
  for (const auto& o : cell.obstructions) {
    if (o.layer < 0 || o.layer >= static_cast<int>(rules.layers.size()))
      bad("obstruction on unknown layer");
    if (!box.contains(o.rect)) bad("obstruction lies outside the cell");
  }
}

Library parse_library(std::string_view text) {
  return LibraryReader(text).read();
}

Library read_library_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open library file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_library(ss.str());
}

std::string serialize_tech(const TechRules& rules) {
  std::ostringstream os;
  os << "TECH\n";
  os << "DBU " << rules.dbu_per_micron << "\n";
  os << "SITE " << rules.site_width << "\n";
  os << "ROW " << rules.row_height << "\n";
  for (const auto& l : rules.layers) {
    os << "LAYER " << l.name << (l.is_metal() ? " metal" : " via");
    if (l.direction == Direction::Horizontal) os << " H";
    if (l.direction == Direction::Vertical) os << " V";
    if (l.is_metal()) os << " PITCH " << l.pitch;
    os << " WIDTH " << l.min_width << " SPACING " << l.min_spacing;
    if (!l.is_metal())
      os << " CUTSPACING " << l.same_net_cut_spacing << " ENCLOSURE "
         << l.min_enclosure;
    if (l.dp_spacing) os << " DPSPACING " << *l.dp_spacing;
    os << "\n";
  }
  os << "END\n";
  return os.str();
}

std::string_view to_string(PinDirection d) {
  switch (d) {
    case PinDirection::Input: return "IN";
    case PinDirection::Output: return "OUT";
    case PinDirection::Inout: return "INOUT";
  }
  return "IN";
}

std::string serialize_cell(const CellMaster& cell, const TechRules& rules) {
  std::ostringstream os;
  os << "CELL " << cell.name << "\n";
  os << "SIZE " << cell.width << ' ' << cell.height_rows << "\n";
  for (const auto& p : cell.pins)
    for (const auto& s : p.shapes) {
      os << "PIN " << p.name << ' ' << to_string(p.direction) << ' ';
      write_rect(os, s);
      os << "\n";
    }
  for (const auto& o : cell.obstructions) {
    os << "OBS " << rules.layers.at(o.layer).name << ' ';
    write_rect(os, o.rect);
    os << "\n";
  }
  for (const auto& r : cell.rails) {
    os << "RAIL " << r.net << ' ';
    write_rect(os, r.rect);
    os << "\n";
  }
  os << "END\n";
  return os.str();
}

std::string serialize_library(const Library& lib) {
  std::string out = serialize_tech(lib.rules);
  for (const auto& c : lib.cells) out += serialize_cell(c, lib.rules);
  return out;
}

LibraryProfile profile_library(std::span<const CellMaster> cells,
                               Coord row_height) {
  if (cells.empty()) throw std::invalid_argument("empty library");
  LibraryProfile prof;
  prof.row_height = row_height;
  prof.min_width = cells.front().width;
  for (const auto& c : cells) prof.min_width = std::min(prof.min_width, c.width);
  for (const auto& c : cells) {
    CellProfile p;
    p.name = c.name;
    p.width = c.width;
    p.height_rows = c.height_rows;
    p.height = c.height_rows * row_height;
    p.pin_count = c.pins.size();
    p.normalized_width = Rational{c.width, prof.min_width}.reduced();
    prof.cells.push_back(p);
    (c.height_rows == 1 ? prof.single_height : prof.multi_height)
        .push_back(c.name);
  }
  return prof;
}

TechRules scale_rules(const TechRules& rules, Rational factor) {
  if (factor.den <= 0 || factor < Rational{1, 1})
    throw std::invalid_argument("margin scale must be >= 1");
  TechRules out = rules;
  for (auto& l : out.layers) {
    l.min_width = factor.ceil_mul(l.min_width);
    l.min_spacing = factor.ceil_mul(l.min_spacing);
    l.min_enclosure = factor.ceil_mul(l.min_enclosure);
    l.same_net_cut_spacing = factor.ceil_mul(l.same_net_cut_spacing);
  }
  out.margin_scale = Rational{rules.margin_scale.num * factor.num,
                              rules.margin_scale.den * factor.den}
                         .reduced();
  validate(out);
  return out;
}

}  // namespace pinaccess
