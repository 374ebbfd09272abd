#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pinaccess/drc.hpp"
#include "pinaccess/report.hpp"
#include "pinaccess/router.hpp"
#include "pinaccess/techlib.hpp"
#include "pinaccess/testgen.hpp"

namespace pinaccess {

struct RunConfig {
  std::string library_path;
  Method method = Method::Proposed;
  Mode mode = Mode::CellByCellOnly;
  Connectivity connectivity = Connectivity::Random;
  std::uint64_t seed = 1;
  bool straps = false;
  Rational margin_scale{1, 1};
  int workers = 1;
  std::string out_dir = "pinaccess_out";
  std::vector<std::string> ignore_rules;
  Coord halo = -1;  // negative: one M2 pitch
  int max_iterations = 20;
  bool incremental = false;
  bool dump_routes = false;

  void validate() const;  // throws std::invalid_argument
};

// Applies `key = value` lines (keys spelled like the long CLI flags without
// the dashes; `#` starts a comment) on top of `base`.
RunConfig parse_config(std::string_view text, RunConfig base = {});
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

struct TestcellOutcome {
  std::string id;
  std::string input_hash;
  std::vector<DrcViolation> violations;  // attributed
  std::string verilog;
  std::string def;
  std::string routes;  // empty unless requested
  std::vector<NetStatus> statuses;
  bool reused = false;
};

struct RunResult {
  std::vector<TestcellOutcome> outcomes;  // sorted by id
  LibraryProfile profile;
  RunSummary summary;
  int exit_code = 0;  // 0 clean, 2 violations found
};

// Testcells a configuration produces, nets assigned, in enumeration order.
// Mode `all` appends the composed all-combo placement.
std::vector<TestcellSpec> plan_testcells(const Library& lib, const RunConfig& cfg);

// Routes, checks and attributes one testcell.
TestcellOutcome process_testcell(const TestcellSpec& spec, const Library& lib,
                                 const TechRules& rules, const RunConfig& cfg);

// Hash over everything that determines a testcell's result: the masters it
// places, the (scaled) rule deck, the configuration and its placement.
std::string input_hash(const TestcellSpec& spec, const Library& lib,
                       const TechRules& rules, const RunConfig& cfg);

using Manifest = std::map<std::string, std::string>;  // testcell id -> hash
std::string render_manifest(const std::vector<TestcellOutcome>& outcomes);
// Throws ParseError on a malformed manifest.
Manifest parse_manifest(std::string_view text);

// Ids whose hash differs from (or is missing in) the previous manifest.
std::set<std::string> incremental_scope(const std::map<std::string, std::string>& current,
                                        const Manifest* previous);

// In-memory pipeline. When `previous` is given, testcells with matching
// hashes are skipped and their violations taken from `carried`.
RunResult run_pipeline(const Library& lib, const RunConfig& cfg,
                       const Manifest* previous = nullptr,
                       const std::map<std::string, std::vector<DrcViolation>>* carried =
                           nullptr);

// Full run with file output. Returns the process exit status.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace pinaccess
