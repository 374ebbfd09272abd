#include "pinaccess/formats.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "pinaccess/techlib.hpp"

namespace pinaccess {

namespace {

struct Token {
  std::string text;
  int line = 0;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::vector<Token> lex_verilog(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (text.substr(i, 2) == "/*") {
      const int start = line;
      i += 2;
      while (i < text.size() && text.substr(i, 2) != "*/") {
        if (text[i] == '\n') ++line;
        ++i;
      }
      if (i >= text.size()) throw ParseError(start, "unterminated comment");
      i += 2;
    } else if (ident_start(c)) {
      const std::size_t b = i;
      while (i < text.size() && ident_char(text[i])) ++i;
      out.push_back({std::string(text.substr(b, i - b)), line});
    } else if (std::string_view("();,.").find(c) != std::string_view::npos) {
      out.push_back({std::string(1, c), line});
      ++i;
    } else {
      throw ParseError(line, std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

class VerilogParser {
 public:
  explicit VerilogParser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  VerilogNetlist parse() {
    VerilogNetlist nl;
    while (!at_end()) nl.modules.push_back(module());
    return nl;
  }

 private:
  bool at_end() const { return pos_ >= toks_.size(); }
  int line() const {
    if (toks_.empty()) return 1;
    return at_end() ? toks_.back().line : toks_[pos_].line;
  }
  const std::string& peek() const {
    static const std::string eof;
    return at_end() ? eof : toks_[pos_].text;
  }
  std::string next() {
    if (at_end()) throw ParseError(line(), "unexpected end of file");
    return toks_[pos_++].text;
  }
  void expect(std::string_view t) {
    const int l = line();
    const std::string got = at_end() ? "end of file" : next();
    if (got != t)
      throw ParseError(l, "expected '" + std::string(t) + "', got '" + got + "'");
  }
  std::string identifier() {
    const int l = line();
    std::string t = next();
    if (!ident_start(t[0]))
      throw ParseError(l, "expected identifier, got '" + t + "'");
    return t;
  }

  VerilogModule module() {
    expect("module");
    VerilogModule m;
    m.name = identifier();
    expect("(");
    if (peek() != ")")
      throw ParseError(line(), "module ports are not supported");
    expect(")");
    expect(";");
    std::set<std::string> declared;
    std::vector<std::pair<std::string, int>> uses;
    while (peek() != "endmodule") {
      const int l = line();
      if (at_end()) throw ParseError(l, "missing endmodule");
      if (peek() == "wire") {
        next();
        do {
          std::string w = identifier();
          if (!declared.insert(w).second)
            throw ParseError(l, "net '" + w + "' declared twice");
          m.wires.push_back(std::move(w));
        } while (peek() == "," && (next(), true));
        expect(";");
        continue;
      }
      static const std::set<std::string, std::less<>> unsupported = {
          "input", "output", "inout", "assign", "reg", "always", "module"};
      if (unsupported.contains(peek()))
        throw ParseError(l, "unsupported construct '" + peek() + "'");
      VerilogInstance inst;
      inst.master = identifier();
      inst.name = identifier();
      expect("(");
      if (peek() != ")") {
        do {
          expect(".");
          std::string pin = identifier();
          expect("(");
          std::string net;
          if (peek() != ")") {
            uses.emplace_back(peek(), line());
            net = identifier();
          }
          expect(")");
          inst.ports.emplace_back(std::move(pin), std::move(net));
        } while (peek() == "," && (next(), true));
      }
      expect(")");
      expect(";");
      m.instances.push_back(std::move(inst));
    }
    expect("endmodule");
    for (const auto& [net, l] : uses)
      if (!declared.contains(net))
        throw ParseError(l, "dangling net '" + net + "'");
    return m;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string emit_verilog(const TestcellSpec& spec) {
  if (spec.nets.empty())
    throw std::invalid_argument("testcell " + spec.id + " has no nets assigned");
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> ports;
  for (const auto& n : spec.nets)
    for (const auto& t : n.terminals) ports[t.inst].emplace_back(t.pin, n.name);

  std::ostringstream os;
  os << "module " << spec.id << " ();\n";
  for (const auto& n : spec.nets) os << "  wire " << n.name << ";\n";
  for (const auto& inst : spec.instances) {
    auto p = ports[inst.name];
    std::sort(p.begin(), p.end());
    os << "  " << inst.master << ' ' << inst.name << " (";
    for (std::size_t k = 0; k < p.size(); ++k)
      os << (k ? ", " : "") << '.' << p[k].first << '(' << p[k].second << ')';
    os << ");\n";
  }
  os << "endmodule\n";
  return os.str();
}

VerilogNetlist parse_verilog(std::string_view text) {
  return VerilogParser(lex_verilog(text)).parse();
}

NetMap connectivity_of(const TestcellSpec& spec) {
  NetMap out;
  for (const auto& n : spec.nets) {
    auto& s = out[n.name];
    s.insert(n.terminals.begin(), n.terminals.end());
  }
  return out;
}

NetMap connectivity_of(const VerilogModule& module) {
  NetMap out;
  for (const auto& w : module.wires) out[w];
  for (const auto& inst : module.instances)
    for (const auto& [pin, net] : inst.ports)
      if (!net.empty()) out[net].insert({inst.name, pin});
  return out;
}

DefDocument def_from_spec(const TestcellSpec& spec, bool with_nets) {
  DefDocument d;
  d.design = spec.id;
  d.die = spec.die;
  for (const auto& i : spec.instances)
    d.components.push_back({i.name, i.master, i.origin, i.orient});
  if (with_nets)
    for (const auto& n : spec.nets) d.nets.push_back({n.name, n.terminals});
  return d;
}

std::string emit_def(const DefDocument& doc) {
  std::ostringstream os;
  os << "VERSION " << doc.version << " ;\n";
  os << "DESIGN " << doc.design << " ;\n";
  os << "UNITS DISTANCE MICRONS " << doc.dbu << " ;\n";
  os << "COMPONENTS " << doc.components.size() << " ;\n";
  for (const auto& c : doc.components)
    os << "- " << c.inst << ' ' << c.master << " + PLACED ( " << c.origin.x
       << ' ' << c.origin.y << " ) " << to_string(c.orient) << " ;\n";
  os << "END COMPONENTS\n";
  os << "DIEAREA ( " << doc.die.xl << ' ' << doc.die.yl << " ) ( " << doc.die.xh
     << ' ' << doc.die.yh << " ) ;\n";
  if (!doc.nets.empty()) {
    os << "NETS " << doc.nets.size() << " ;\n";
    for (const auto& n : doc.nets) {
      os << "- " << n.name;
      for (const auto& t : n.terminals) os << " ( " << t.inst << ' ' << t.pin << " )";
      os << " ;\n";
    }
    os << "END NETS\n";
  }
  os << "END DESIGN\n";
  return os.str();
}

std::string emit_def(const TestcellSpec& spec, bool with_nets) {
  std::map<std::string, std::pair<Coord, Coord>, std::less<>> sizes;
  for (const auto& i : spec.instances) sizes[i.master] = {i.width, i.height};
  const DefDocument doc = def_from_spec(spec, with_nets);
  const auto overlaps =
      find_overlaps(doc, [&](std::string_view m) { return sizes.find(m)->second; });
  if (!overlaps.empty())
    throw std::invalid_argument("components " + overlaps.front().first + " and " +
                                overlaps.front().second + " overlap in " + spec.id);
  return emit_def(doc);
}

namespace {

std::vector<Token> lex_def(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == ';' || c == '(' || c == ')') {
      out.push_back({std::string(1, c), line});
      ++i;
    } else {
      const std::size_t b = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != ';' && text[i] != '(' && text[i] != ')')
        ++i;
      out.push_back({std::string(text.substr(b, i - b)), line});
    }
  }
  return out;
}

class DefParser {
 public:
  explicit DefParser(std::vector<Token> t) : toks_(std::move(t)) {}

  DefDocument parse() {
    DefDocument d;
    d.version.clear();
    bool ended = false;
    while (!at_end() && !ended) {
      const int l = line();
      const std::string kw = next();
      if (kw == "VERSION") {
        d.version = next();
        expect(";");
      } else if (kw == "DESIGN") {
        d.design = next();
        expect(";");
      } else if (kw == "TECHNOLOGY") {
        next();
        expect(";");
      } else if (kw == "UNITS") {
        expect("DISTANCE");
        expect("MICRONS");
        d.dbu = integer();
        expect(";");
      } else if (kw == "COMPONENTS") {
        const Coord n = integer();
        expect(";");
        while (peek() == "-") d.components.push_back(component());
        expect("END");
        expect("COMPONENTS");
        if (n != static_cast<Coord>(d.components.size()))
          throw ParseError(l, "COMPONENTS declares " + std::to_string(n) +
                                  " but lists " +
                                  std::to_string(d.components.size()));
      } else if (kw == "DIEAREA") {
        const Point a = point();
        const Point b = point();
        expect(";");
        d.die = {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x),
                 std::max(a.y, b.y)};
      } else if (kw == "NETS") {
        const Coord n = integer();
        expect(";");
        while (peek() == "-") d.nets.push_back(net());
        expect("END");
        expect("NETS");
        if (n != static_cast<Coord>(d.nets.size()))
          throw ParseError(l, "NETS count mismatch");
      } else if (kw == "END") {
        expect("DESIGN");
        ended = true;
      } else {
        throw ParseError(l, "unknown DEF statement '" + kw + "'");
      }
    }
    if (!ended) throw ParseError(line(), "missing END DESIGN");
    if (!at_end()) throw ParseError(line(), "content after END DESIGN");
    return d;
  }

 private:
  bool at_end() const { return pos_ >= toks_.size(); }
  int line() const {
    if (toks_.empty()) return 1;
    return at_end() ? toks_.back().line : toks_[pos_].line;
  }
  const std::string& peek() const {
    static const std::string eof;
    return at_end() ? eof : toks_[pos_].text;
  }
  std::string next() {
    if (at_end()) throw ParseError(line(), "unexpected end of file");
    return toks_[pos_++].text;
  }
  void expect(std::string_view t) {
    const int l = line();
    const std::string got = at_end() ? "end of file" : next();
    if (got != t)
      throw ParseError(l, "expected '" + std::string(t) + "', got '" + got + "'");
  }
  Coord integer() {
    const int l = line();
    const std::string t = next();
    Coord v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
      throw ParseError(l, "expected integer, got '" + t + "'");
    return v;
  }
  Point point() {
    expect("(");
    const Coord x = integer();
    const Coord y = integer();
    expect(")");
    return {x, y};
  }
  DefComponent component() {
    expect("-");
    DefComponent c;
    c.inst = next();
    c.master = next();
    expect("+");
    const int l = line();
    const std::string kind = next();
    if (kind != "PLACED" && kind != "FIXED")
      throw ParseError(l, "unsupported placement status '" + kind + "'");
    c.origin = point();
    const int lo = line();
    try {
      c.orient = parse_orientation(next());
    } catch (const std::invalid_argument& e) {
      throw ParseError(lo, e.what());
    }
    expect(";");
    return c;
  }
  DefNet net() {
    expect("-");
    DefNet n;
    n.name = next();
    while (peek() == "(") {
      next();
      Terminal t;
      t.inst = next();
      t.pin = next();
      expect(")");
      n.terminals.push_back(std::move(t));
    }
    expect(";");
    return n;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

DefDocument parse_def(std::string_view text) {
  return DefParser(lex_def(text)).parse();
}

std::vector<std::pair<std::string, std::string>> find_overlaps(
    const DefDocument& doc, const SizeLookup& size) {
  std::vector<Rect> boxes;
  for (const auto& c : doc.components) {
    const auto [w, h] = size(c.master);
    boxes.push_back({c.origin.x, c.origin.y, c.origin.x + w, c.origin.y + h});
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      if (boxes[i].overlaps(boxes[j]))
        out.emplace_back(doc.components[i].inst, doc.components[j].inst);
  return out;
}

}  // namespace pinaccess
