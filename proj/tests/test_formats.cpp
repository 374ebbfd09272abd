#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "pinaccess/formats.hpp"
#include "pinaccess/random.hpp"

using namespace pinaccess;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(fixtures::data_path(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

TestcellSpec connected(const TestcellSpec& raw, Connectivity c = Connectivity::Random) {
  static const Library lib = fixtures::load("lib10.lib");
  return assign_connectivity(raw, lib, c, 11);
}

const LibraryProfile& lib10() {
  static const LibraryProfile p = profile_library(fixtures::load("lib10.lib"));
  return p;
}

}  // namespace

TEST(Verilog, AaRowModule) {
  const auto s = connected(make_aa_row(lib10().cell("INVX1")));
  const auto text = emit_verilog(s);
  EXPECT_EQ(lines(text).front(), "module scell_INVX1 ();");
  EXPECT_EQ(lines(text).back(), "endmodule");
  const auto nl = parse_verilog(text);
  ASSERT_EQ(nl.modules.size(), 1u);
  ASSERT_EQ(nl.modules[0].instances.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(nl.modules[0].instances[k].name, "U" + std::to_string(k + 1));
    EXPECT_EQ(nl.modules[0].instances[k].master, "INVX1");
  }
}

TEST(Verilog, AbRowOrder) {
  const auto s = connected(make_ab_row(lib10().cell("INVX1"), lib10().cell("NAND2X1")));
  const auto nl = parse_verilog(emit_verilog(s));
  ASSERT_EQ(nl.modules.size(), 1u);
  EXPECT_EQ(nl.modules[0].name, "scell_INVX1_NAND2X1");
  std::vector<std::string> order;
  for (const auto& i : nl.modules[0].instances) order.push_back(i.master);
  EXPECT_EQ(order, (std::vector<std::string>{"NAND2X1", "INVX1", "NAND2X1", "INVX1", "NAND2X1"}));
}

TEST(Verilog, ExactText) {
  const auto s = connected(make_aa_row(lib10().cell("INVX1")), Connectivity::Aligned);
  EXPECT_EQ(emit_verilog(s),
            "module scell_INVX1 ();\n"
            "  wire INVX1_A;\n"
            "  wire INVX1_Y;\n"
            "  INVX1 U1 (.A(INVX1_A), .Y(INVX1_Y));\n"
            "  INVX1 U2 (.A(INVX1_A), .Y(INVX1_Y));\n"
            "  INVX1 U3 (.A(INVX1_A), .Y(INVX1_Y));\n"
            "  INVX1 U4 (.A(INVX1_A), .Y(INVX1_Y));\n"
            "endmodule\n");
}

TEST(Verilog, UnassignedNetsRejected) {
  EXPECT_THROW(emit_verilog(make_aa_row(lib10().cell("INVX1"))), std::invalid_argument);
}

TEST(Verilog, DanglingNetNamed) {
  const std::string text =
      "module m ();\n  wire a;\n  INVX1 U1 (.A(a), .Y(ghost));\nendmodule\n";
  try {
    parse_verilog(text);
    FAIL() << "accepted dangling net";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos) << e.what();
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Verilog, UnsupportedConstructsRejected) {
  for (const char* bad : {"module m (a);\nendmodule\n",
                          "module m ();\n  input a;\nendmodule\n",
                          "module m ();\n  assign a = b;\nendmodule\n",
                          "module m ();\n  wire a;\n  wire a;\nendmodule\n",
                          "module m ();\n  INVX1 U1 (A(a));\nendmodule\n",
                          "module m ();\n  wire a;\n", "module m ();\n /* open\n",
                          "module m ();\n  INVX1 U1 (.A(a)) ;\n`define\nendmodule\n"})
    EXPECT_THROW(parse_verilog(bad), ParseError) << bad;
}

TEST(Verilog, TwoModuleFixture) {
  const auto nl = parse_verilog(slurp("two_modules.v"));
  const VerilogNetlist golden{{
      {"scell_INVX1",
       {"n1", "n2"},
       {{"INVX1", "U1", {{"A", "n2"}, {"Y", "n1"}}}, {"INVX1", "U2", {{"A", "n1"}, {"Y", "n2"}}}}},
      {"scell_INVX1_BUFX2",
       {"a", "y"},
       {{"BUFX2", "U1", {{"A", "a"}, {"Y", ""}}},
        {"INVX1", "U2", {{"A", "y"}, {"Y", "a"}}},
        {"BUFX2", "U3", {{"A", "a"}, {"Y", "y"}}}}},
  }};
  EXPECT_EQ(nl, golden);
  const NetMap want{{"a", {{"U1", "A"}, {"U2", "Y"}, {"U3", "A"}}},
                    {"y", {{"U2", "A"}, {"U3", "Y"}}}};
  EXPECT_EQ(connectivity_of(nl.modules[1]), want);
}

TEST(Verilog, RoundTripEveryTestcell) {
  for (Mode mode : {Mode::All, Mode::AllComboInOneCellOnly})
    for (const auto& raw : enumerate_testcells(lib10(), Method::Proposed, mode, 200))
      for (auto c : {Connectivity::Aligned, Connectivity::Random}) {
        const auto s = connected(raw, c);
        const auto text = emit_verilog(s);
        EXPECT_EQ(text, emit_verilog(s));
        const auto nl = parse_verilog(text);
        ASSERT_EQ(nl.modules.size(), 1u);
        EXPECT_EQ(connectivity_of(nl.modules[0]), connectivity_of(s)) << s.id;
        ASSERT_EQ(nl.modules[0].instances.size(), s.instances.size());
        for (std::size_t k = 0; k < s.instances.size(); ++k)
          EXPECT_EQ(nl.modules[0].instances[k].name, s.instances[k].name);
      }
}

TEST(Def, AaRowPlacements) {
  const auto s = make_aa_row(fixtures::profile("A", 2));
  const auto doc = parse_def(emit_def(s));
  ASSERT_EQ(doc.components.size(), 4u);
  const std::vector<std::pair<Point, Orientation>> want{{{0, 0}, Orientation::N},
                                                        {{200, 0}, Orientation::FN},
                                                        {{400, 0}, Orientation::FN},
                                                        {{600, 0}, Orientation::N}};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(doc.components[k].origin, want[k].first);
    EXPECT_EQ(doc.components[k].orient, want[k].second);
    EXPECT_EQ(doc.components[k].inst, "U" + std::to_string(k + 1));
  }
  EXPECT_EQ(doc.die, (Rect{0, 0, 800, 900}));
}

TEST(Def, HeaderLines) {
  const auto text = emit_def(make_aa_row(fixtures::profile("A", 2)));
  const auto l = lines(text);
  ASSERT_GE(l.size(), 4u);
  EXPECT_EQ(l[0], "VERSION 5.6 ;");
  EXPECT_EQ(l[1], "DESIGN scell_A ;");
  EXPECT_EQ(l[2], "UNITS DISTANCE MICRONS 1000 ;");
  EXPECT_EQ(l[3], "COMPONENTS 4 ;");
  EXPECT_EQ(l[4], "- U1 A + PLACED ( 0 0 ) N ;");
  EXPECT_EQ(l.back(), "END DESIGN");
}

TEST(Def, FourCellListingParsesThenFailsOverlap) {
  const auto doc = parse_def(slurp("four_cell_row.def"));
  EXPECT_EQ(doc.version, "5.6");
  EXPECT_EQ(doc.design, "TOP");
  EXPECT_EQ(doc.dbu, 1000);
  ASSERT_EQ(doc.components.size(), 4u);
  EXPECT_EQ(doc.components[3].origin, (Point{400, 0}));
  EXPECT_EQ(doc.die, (Rect{0, 0, 600, 0}));
  const auto overlaps =
      find_overlaps(doc, [](std::string_view) { return std::pair<Coord, Coord>{200, 900}; });
  ASSERT_EQ(overlaps.size(), 1u);
  EXPECT_EQ(overlaps[0].first, "sinst_<typeA>VU3");
  EXPECT_EQ(overlaps[0].second, "sinst_<typeA>VU4");
}

TEST(Def, OverlappingSpecRejected) {
  auto s = make_aa_row(fixtures::profile("A", 2));
  s.instances[3].origin = s.instances[2].origin;
  try {
    emit_def(s);
    FAIL() << "accepted overlap";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("U3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("U4"), std::string::npos);
  }
}

TEST(Def, EmptyComponents) {
  const auto doc = parse_def(
      "VERSION 5.6 ;\nDESIGN E ;\nUNITS DISTANCE MICRONS 1000 ;\nCOMPONENTS 0 ;\n"
      "END COMPONENTS\nDIEAREA ( 0 0 ) ( 100 100 ) ;\nEND DESIGN\n");
  EXPECT_TRUE(doc.components.empty());
  EXPECT_EQ(doc.design, "E");
  EXPECT_EQ(parse_def(emit_def(doc)), doc);
}

TEST(Def, RoundTripEveryTestcell) {
  for (const auto& raw : enumerate_testcells(lib10(), Method::Proposed, Mode::All, 200)) {
    const auto s = connected(raw);
    for (bool nets : {false, true}) {
      const auto doc = def_from_spec(s, nets);
      EXPECT_EQ(parse_def(emit_def(doc)), doc) << s.id;
      EXPECT_EQ(emit_def(s, nets), emit_def(doc));
    }
    const auto doc = parse_def(emit_def(s));
    for (std::size_t k = 0; k < s.instances.size(); ++k) {
      EXPECT_EQ(doc.components[k].inst, s.instances[k].name);
      EXPECT_EQ(doc.components[k].origin, s.instances[k].origin);
      EXPECT_EQ(doc.components[k].orient, s.instances[k].orient);
    }
  }
}

TEST(Def, CountMismatchAndBadTokens) {
  const std::string head = "VERSION 5.6 ;\nDESIGN E ;\n";
  EXPECT_THROW(parse_def(head + "COMPONENTS 2 ;\n- U1 A + PLACED ( 0 0 ) N ;\nEND COMPONENTS\n"
                                "END DESIGN\n"),
               ParseError);
  EXPECT_THROW(parse_def(head + "COMPONENTS 1 ;\n- U1 A + PLACED ( 0 0 ) XX ;\nEND COMPONENTS\n"
                                "END DESIGN\n"),
               ParseError);
  EXPECT_THROW(parse_def(head + "COMPONENTS 1 ;\n- U1 A + COVER ( 0 0 ) N ;\nEND COMPONENTS\n"
                                "END DESIGN\n"),
               ParseError);
  EXPECT_THROW(parse_def(head), ParseError);
  EXPECT_THROW(parse_def(head + "END DESIGN\nEXTRA\n"), ParseError);
  try {
    parse_def(head + "ROWS 3 ;\nEND DESIGN\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Fuzz, ParsersThrowParseErrorOnly) {
  const auto s = connected(make_ab_row(lib10().cell("INVX1"), lib10().cell("NAND2X1")));
  const std::string def = emit_def(s, true), v = emit_verilog(s);
  SplitMix64 rng(99);
  const std::string alphabet = "();,.-+ \n\tabcXYZ0123456789/*#";
  std::size_t accepted = 0;
  for (int t = 0; t < 3000; ++t) {
    for (const std::string* base : {&def, &v}) {
      std::string text = *base;
      const auto edits = 1 + rng.below(6);
      for (std::uint64_t e = 0; e < edits && !text.empty(); ++e) {
        const auto at = rng.below(text.size());
        switch (rng.below(3)) {
          case 0: text.erase(at, 1 + rng.below(8)); break;
          case 1: text.insert(at, 1, alphabet[rng.below(alphabet.size())]); break;
          default: text[at] = alphabet[rng.below(alphabet.size())]; break;
        }
      }
      try {
        if (base == &def)
          parse_def(text);
        else
          parse_verilog(text);
        ++accepted;
      } catch (const ParseError&) {
      }
    }
  }
  // Some mutations land in names or whitespace and stay valid.
  EXPECT_GT(accepted, 0u);
}
