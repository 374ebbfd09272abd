// Command-line driver: library in, testcell artifacts and DRC summary out.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pinaccess/pipeline.hpp"

int main(int argc, char** argv) {
  using namespace pinaccess;

  CLI::App app{"Standard-cell pin access verification"};
  app.set_version_flag("--version", "pinaccess 0.1.0");

  std::string config_path;
  std::map<std::string, std::string> flags;
  std::vector<std::string> ignore;
  bool incremental = false, dump = false;

  app.add_option("--config", config_path, "key = value settings file");
  auto opt = [&](const char* name, const char* help) {
    const std::string key = std::string(name).substr(2);
    return app.add_option_function<std::string>(
        name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  opt("--lib", "library file");
  opt("--method", "conventional | synopsys | proposed")
      ->check(CLI::IsMember({"conventional", "synopsys", "proposed"}));
  opt("--mode",
      "single_cell_only | cell_by_cell_only | all_combo_in_one_cell_only | all")
      ->check(CLI::IsMember({"single_cell_only", "cell_by_cell_only",
                             "all_combo_in_one_cell_only", "all"}));
  opt("--connectivity", "aligned | random")
      ->check(CLI::IsMember({"aligned", "random"}));
  opt("--seed", "64-bit seed (falls back to PINACCESS_SEED)");
  opt("--straps", "on | off")->check(CLI::IsMember({"on", "off"}));
  opt("--margin-scale", "rule margin factor, e.g. 1.25");
  opt("--workers", "parallel testcells");
  opt("--out", "output directory");
  opt("--halo", "attribution halo in DBU (default one M2 pitch)");
  opt("--max-iterations", "rip-up and reroute passes");
  app.add_option("--ignore-rule", ignore, "DRC rule to suppress (repeatable)");
  app.add_flag("--incremental", incremental,
               "rerun only testcells whose inputs changed since the last run");
  app.add_flag("--dump-routes", dump, "write <id>.routes.txt per testcell");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (const char* env = std::getenv("PINACCESS_SEED")) apply_setting(cfg, "seed", env);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot read " + config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      cfg = parse_config(ss.str(), cfg);
    }
    for (const auto& [k, v] : flags) apply_setting(cfg, k, v);
    if (!ignore.empty()) cfg.ignore_rules = ignore;
    if (incremental) cfg.incremental = true;
    if (dump) cfg.dump_routes = true;
    return run(cfg, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
