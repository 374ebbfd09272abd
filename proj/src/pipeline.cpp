#include "pinaccess/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "pinaccess/formats.hpp"
#include "pinaccess/random.hpp"

namespace pinaccess {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_int(std::string_view key, std::string_view v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw std::invalid_argument("invalid value '" + std::string(v) + "' for " +
                                std::string(key));
  return out;
}

bool parse_switch(std::string_view key, std::string_view v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("invalid value '" + std::string(v) + "' for " +
                              std::string(key));
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

Coord combo_gap(const TechRules& rules) {
  return 2 * std::max(rules.at(layer::M2).pitch, rules.at(layer::M3).pitch);
}

}  // namespace

void RunConfig::validate() const {
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (margin_scale < Rational{1, 1})
    throw std::invalid_argument("margin scale must be at least 1");
  if (max_iterations < 1) throw std::invalid_argument("max iterations must be at least 1");
  parse_ignore_list(ignore_rules);
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  if (key == "lib") {
    cfg.library_path = v;
  } else if (key == "method") {
    cfg.method = parse_method(v);
  } else if (key == "mode") {
    cfg.mode = parse_mode(v);
  } else if (key == "connectivity") {
    cfg.connectivity = parse_connectivity(v);
  } else if (key == "seed") {
    cfg.seed = parse_int<std::uint64_t>(key, v);
  } else if (key == "straps") {
    cfg.straps = parse_switch(key, v);
  } else if (key == "margin-scale") {
    cfg.margin_scale = Rational::parse(v);
  } else if (key == "workers") {
    cfg.workers = parse_int<int>(key, v);
  } else if (key == "out") {
    cfg.out_dir = v;
  } else if (key == "ignore-rule") {
    std::size_t b = 0;
    while (b <= v.size()) {
      const auto e = std::min(v.find(',', b), v.size());
      const std::string name = trim(std::string_view(v).substr(b, e - b));
      if (!name.empty()) cfg.ignore_rules.push_back(name);
      b = e + 1;
    }
  } else if (key == "halo") {
    cfg.halo = parse_int<Coord>(key, v);
  } else if (key == "max-iterations") {
    cfg.max_iterations = parse_int<int>(key, v);
  } else if (key == "incremental") {
    cfg.incremental = parse_switch(key, v);
  } else if (key == "dump-routes") {
    cfg.dump_routes = parse_switch(key, v);
  } else {
    throw std::invalid_argument("unknown setting '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(no, "expected key = value");
    try {
      apply_setting(base, trim(std::string_view(t).substr(0, eq)),
                    std::string_view(t).substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(no, e.what());
    }
  }
  return base;
}

std::vector<TestcellSpec> plan_testcells(const Library& lib, const RunConfig& cfg) {
  const auto profile = profile_library(lib);
  const Coord gap = combo_gap(lib.rules);
  std::vector<TestcellSpec> out;
  for (const auto& s : enumerate_testcells(profile, cfg.method, cfg.mode, gap))
    out.push_back(assign_connectivity(s, lib, cfg.connectivity, cfg.seed));
  if (cfg.mode == Mode::All) out.push_back(compose_combo(out, gap));
  return out;
}

TestcellOutcome process_testcell(const TestcellSpec& spec, const Library& lib,
                                 const TechRules& rules, const RunConfig& cfg) {
  TestcellOutcome o;
  o.id = spec.id;
  o.input_hash = input_hash(spec, lib, rules, cfg);
  o.verilog = emit_verilog(spec);
  o.def = emit_def(spec);
  const StrapPlan straps =
      plan_straps(spec.die, rules, derive_seed(cfg.seed, spec.id + "/straps"), cfg.straps);
  const RoutingGrid grid = build_grid(spec, lib, rules, straps);
  const RouteDB db = route(spec, lib, grid, rules, {cfg.max_iterations, 1});
  const Coord halo = cfg.halo >= 0 ? cfg.halo : rules.at(layer::M2).pitch;
  o.violations = attribute(check_drc(db, parse_ignore_list(cfg.ignore_rules)), spec, halo);
  for (const auto& n : db.nets) o.statuses.push_back(n.status);
  if (cfg.dump_routes) o.routes = dump_routes(db);
  return o;
}

std::string input_hash(const TestcellSpec& spec, const Library& lib,
                       const TechRules& rules, const RunConfig& cfg) {
  std::set<std::string> masters;
  for (const auto& i : spec.instances) masters.insert(i.master);
  std::ostringstream os;
  os << spec.id << '\n' << serialize_tech(rules);
  for (const auto& m : masters) os << serialize_cell(lib.cell(m), rules);
  os << to_string(cfg.connectivity) << ' ' << cfg.seed << ' ' << cfg.straps << ' '
     << cfg.halo << ' ' << cfg.max_iterations;
  for (const auto& r : parse_ignore_list(cfg.ignore_rules)) os << ' ' << rule_key(r);
  os << '\n' << emit_def(def_from_spec(spec, true));
  return hex(fnv1a64(os.str()));
}

std::string render_manifest(const std::vector<TestcellOutcome>& outcomes) {
  std::ostringstream os;
  os << "testcell_id,input_hash\n";
  for (const auto& o : outcomes) os << o.id << ',' << o.input_hash << "\n";
  return os.str();
}

Manifest parse_manifest(std::string_view text) {
  Manifest m;
  std::istringstream in{std::string(text)};
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (no == 1) {
      if (line != "testcell_id,input_hash") throw ParseError(no, "bad manifest header");
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || comma == 0 || line.size() - comma - 1 != 16 ||
        line.find_first_not_of("0123456789abcdef", comma + 1) != std::string::npos)
      throw ParseError(no, "malformed manifest record");
    m[line.substr(0, comma)] = line.substr(comma + 1);
  }
  if (no == 0) throw ParseError(1, "empty manifest");
  return m;
}

std::set<std::string> incremental_scope(const std::map<std::string, std::string>& current,
                                        const Manifest* previous) {
  std::set<std::string> out;
  for (const auto& [id, h] : current) {
    if (!previous) {
      out.insert(id);
      continue;
    }
    const auto it = previous->find(id);
    if (it == previous->end() || it->second != h) out.insert(id);
  }
  return out;
}

RunResult run_pipeline(const Library& lib, const RunConfig& cfg, const Manifest* previous,
                       const std::map<std::string, std::vector<DrcViolation>>* carried) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.profile = profile_library(lib);
  const TechRules rules = scale_rules(lib.rules, cfg.margin_scale);

  const auto specs = plan_testcells(lib, cfg);
  std::map<std::string, std::string> hashes;
  for (const auto& s : specs) hashes[s.id] = input_hash(s, lib, rules, cfg);
  auto scope = incremental_scope(hashes, previous);
  for (const auto& s : specs)
    if (!scope.contains(s.id) && (!carried || !carried->contains(s.id))) scope.insert(s.id);

  std::vector<TestcellOutcome> outcomes(specs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < specs.size(); k = next++) {
      try {
        const auto& s = specs[k];
        if (scope.contains(s.id)) {
          outcomes[k] = process_testcell(s, lib, rules, cfg);
        } else {
          auto& o = outcomes[k];
          o.id = s.id;
          o.input_hash = hashes.at(s.id);
          o.verilog = emit_verilog(s);
          o.def = emit_def(s);
          o.violations = carried->at(s.id);
          o.reused = true;
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(cfg.workers, static_cast<int>(specs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(outcomes.begin(), outcomes.end(),
            [](const TestcellOutcome& a, const TestcellOutcome& b) { return a.id < b.id; });
  std::vector<TestcellResult> results;
  std::uint64_t bytes = 0;
  for (const auto& o : outcomes) {
    results.push_back({o.id, o.violations});
    bytes += o.verilog.size() + o.def.size() + format_violations(o.violations).size() +
             o.routes.size();
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.summary = collect_metrics(results, wall, bytes);
  result.exit_code = std::any_of(outcomes.begin(), outcomes.end(),
                                 [](const auto& o) { return !o.violations.empty(); })
                         ? 2
                         : 0;
  result.outcomes = std::move(outcomes);
  return result;
}

int run(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.library_path.empty()) throw std::invalid_argument("no library given");
  const Library lib = read_library_file(cfg.library_path);
  const fs::path out = cfg.out_dir;

  std::optional<Manifest> previous;
  std::map<std::string, std::vector<DrcViolation>> carried;
  if (cfg.incremental) {
    const fs::path mp = out / "manifest.csv";
    if (fs::exists(mp)) {
      try {
        previous = parse_manifest(read_file(mp));
      } catch (const std::exception& e) {
        log << "warning: ignoring corrupt manifest (" << e.what() << "), full rerun\n";
      }
    }
    if (previous)
      for (const auto& [id, h] : *previous) {
        const fs::path p = out / (id + ".drc.txt");
        if (!fs::exists(p)) continue;
        try {
          carried[id] = parse_violations(read_file(p));
        } catch (const std::exception&) {
          // Unreadable records force a rerun of that testcell.
        }
      }
  }

  RunResult r = run_pipeline(lib, cfg, previous ? &*previous : nullptr, &carried);

  fs::create_directories(out);
  std::vector<TestcellResult> results;
  std::size_t rerun = 0;
  for (const auto& o : r.outcomes) {
    results.push_back({o.id, o.violations});
    write_file(out / (o.id + ".v"), o.verilog);
    write_file(out / (o.id + ".def"), o.def);
    if (o.reused) continue;
    ++rerun;
    write_file(out / (o.id + ".drc.txt"), format_violations(o.violations));
    if (cfg.dump_routes) write_file(out / (o.id + ".routes.txt"), o.routes);
  }
  write_file(out / "summary.txt", render_summary(results));
  write_file(out / "summary.csv", render_summary_csv(results));
  write_file(out / "histogram.csv", render_histogram_csv(width_histogram(r.profile)));
  write_file(out / "cells.csv", render_cells_csv(r.summary));
  write_file(out / "metrics.csv", render_metrics_csv(r.summary.metrics));
  write_file(out / "manifest.csv", render_manifest(r.outcomes));

  std::size_t dirty = 0;
  for (const auto& row : r.summary.rows) dirty += row.drc_count > 0;
  log << r.outcomes.size() << " testcells (" << rerun << " checked, "
      << r.outcomes.size() - rerun << " carried forward), " << dirty
      << " with DRC errors, " << r.summary.metrics.cells_with_violations
      << " library cells implicated\n";
  return r.exit_code;
}

}  // namespace pinaccess
