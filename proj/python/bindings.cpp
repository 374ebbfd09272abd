// Python entry points. Configuration travels as a dict of the same
// key = value settings the config file accepts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pinaccess/pipeline.hpp"

namespace py = pybind11;
using namespace pinaccess;

namespace {

RunConfig make_config(const std::map<std::string, std::string>& settings) {
  RunConfig cfg;
  for (const auto& [k, v] : settings) apply_setting(cfg, k, v);
  return cfg;
}

py::dict violation_dict(const DrcViolation& v) {
  py::dict d;
  d["rule"] = std::string(rule_key(v.rule));
  d["layer"] = v.layer;
  d["marker"] = py::make_tuple(v.marker.xl, v.marker.yl, v.marker.xh, v.marker.yh);
  d["nets"] = v.nets;
  d["masters"] = v.masters;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pinaccess, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def(
      "count_instances",
      [](std::uint64_t n, const std::string& method) {
        return count_instances(n, parse_method(method));
      },
      py::arg("n"), py::arg("method"));

  m.def(
      "library_profile",
      [](const std::string& path) {
        const auto p = profile_library(read_library_file(path));
        py::list cells;
        for (const auto& c : p.cells) {
          py::dict d;
          d["name"] = c.name;
          d["width"] = c.width;
          d["height_rows"] = c.height_rows;
          d["pin_count"] = c.pin_count;
          d["normalized_width"] = c.normalized_width.str();
          cells.append(d);
        }
        return cells;
      },
      py::arg("lib"));

  m.def(
      "width_histogram",
      [](const std::string& path, std::int64_t bucket) {
        std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> out;
        for (const auto& b : width_histogram(profile_library(read_library_file(path)), bucket))
          out.emplace_back(b.bucket, b.fraction.num, b.fraction.den);
        return out;
      },
      py::arg("lib"), py::arg("bucket") = 1);

  m.def(
      "plan_testcells",
      [](const std::string& path, const std::map<std::string, std::string>& settings) {
        std::vector<std::string> ids;
        for (const auto& s : plan_testcells(read_library_file(path), make_config(settings)))
          ids.push_back(s.id);
        return ids;
      },
      py::arg("lib"), py::arg("settings") = std::map<std::string, std::string>{});

  m.def(
      "run_pipeline",
      [](const std::string& path, const std::map<std::string, std::string>& settings) {
        const Library lib = read_library_file(path);
        const RunConfig cfg = make_config(settings);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_pipeline(lib, cfg);
        }
        std::vector<TestcellResult> results;
        py::list outcomes;
        for (const auto& o : r.outcomes) {
          results.push_back({o.id, o.violations});
          py::list vs;
          for (const auto& v : o.violations) vs.append(violation_dict(v));
          py::dict d;
          d["id"] = o.id;
          d["violations"] = vs;
          d["verilog"] = o.verilog;
          d["def"] = o.def;
          outcomes.append(d);
        }
        py::dict out;
        out["exit_code"] = r.exit_code;
        out["outcomes"] = outcomes;
        out["per_master"] = r.summary.per_master;
        out["summary"] = render_summary(results);
        out["output_bytes"] = r.summary.metrics.output_bytes;
        return out;
      },
      py::arg("lib"), py::arg("settings") = std::map<std::string, std::string>{});

  m.def(
      "run",
      [](const std::map<std::string, std::string>& settings) {
        const RunConfig cfg = make_config(settings);
        std::ostringstream log;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = run(cfg, log);
        }
        return py::make_tuple(code, log.str());
      },
      py::arg("settings"));
}
