#include "pinaccess/report.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pinaccess {

namespace {

constexpr std::size_t kIdColumn = 20;
constexpr std::size_t kCountColumn = 11;
constexpr std::size_t kMasterColumn = 37;

std::string pad(const std::string& s, std::size_t width) {
  if (s.size() >= width) return s + ' ';
  return s + std::string(width - s.size(), ' ');
}

std::string rtrim(std::string s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

std::string join(const std::vector<std::string>& v, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += sep;
    out += v[k];
  }
  return out;
}

std::vector<SummaryRow> sorted_rows(const std::vector<TestcellResult>& results) {
  std::vector<SummaryRow> rows;
  for (const auto& r : results) rows.push_back(summarize(r));
  std::sort(rows.begin(), rows.end(),
            [](const SummaryRow& a, const SummaryRow& b) { return a.id < b.id; });
  return rows;
}

}  // namespace

SummaryRow summarize(const TestcellResult& result) {
  SummaryRow row;
  row.id = result.id;
  row.drc_count = result.violations.size();
  std::set<std::string> masters, types;
  for (const auto& v : result.violations) {
    masters.insert(v.masters.begin(), v.masters.end());
    types.insert(std::string(rule_display(v.rule)));
  }
  row.masters.assign(masters.begin(), masters.end());
  row.types.assign(types.begin(), types.end());
  return row;
}

std::string render_summary(const std::vector<TestcellResult>& results) {
  const auto rows = sorted_rows(results);
  std::vector<const SummaryRow*> clean, dirty;
  for (const auto& r : rows) (r.drc_count == 0 ? clean : dirty).push_back(&r);

  std::ostringstream os;
  os << "=====\n";
  os << "SCRIPT-Info: Printing DRC Summary ...\n";
  os << "=====\n";
  os << "##### " << clean.size() << " cells without DRC errors #####\n";
  os << "-----\n";
  os << rtrim(pad("Cell", kIdColumn) + pad("DRC count", kCountColumn) +
              pad("Master Cells with DRC", kMasterColumn) + "DRC Types")
     << "\n";
  os << "-----\n";
  for (const auto* r : clean) os << pad(r->id, kIdColumn) << "0\n";
  os << "##### " << dirty.size() << " cells with DRC errors #####\n";
  for (const auto* r : dirty) {
    std::vector<std::string> braced;
    for (const auto& t : r->types) braced.push_back("{" + t + "}");
    os << rtrim(pad(r->id, kIdColumn) + pad(std::to_string(r->drc_count), kCountColumn) +
                pad(join(r->masters, " "), kMasterColumn) + join(braced, " "))
       << "\n";
  }
  return os.str();
}

std::string render_summary_csv(const std::vector<TestcellResult>& results) {
  std::ostringstream os;
  os << "testcell_id,drc_count,masters,types\n";
  for (const auto& r : sorted_rows(results))
    os << r.id << ',' << r.drc_count << ',' << join(r.masters, ";") << ','
       << join(r.types, ";") << "\n";
  return os.str();
}

std::vector<HistogramBin> width_histogram(const LibraryProfile& profile,
                                          std::int64_t bucket) {
  if (profile.cells.empty()) throw std::invalid_argument("empty library");
  if (bucket < 1) throw std::invalid_argument("bucket must be at least 1");
  const Coord unit = profile.min_width * bucket;
  std::map<std::int64_t, std::int64_t> counts;
  for (const auto& c : profile.cells) {
    const std::int64_t b = (c.width + unit - 1) / unit * bucket;
    ++counts[b];
  }
  const auto total = static_cast<std::int64_t>(profile.cells.size());
  std::vector<HistogramBin> out;
  for (const auto& [b, n] : counts)
    out.push_back({b, Rational{n, total}.reduced()});
  return out;
}

std::string render_histogram_csv(const std::vector<HistogramBin>& bins) {
  std::ostringstream os;
  os << "bucket,fraction\n";
  for (const auto& b : bins) os << b.bucket << ',' << b.fraction.str() << "\n";
  return os.str();
}

RunSummary collect_metrics(const std::vector<TestcellResult>& results,
                           double wall_time_seconds, std::uint64_t output_bytes) {
  RunSummary s;
  s.rows = sorted_rows(results);
  for (const auto& r : results)
    for (const auto& v : r.violations)
      for (const auto& m : v.masters) ++s.per_master[m];
  s.metrics.wall_time_seconds = wall_time_seconds;
  s.metrics.output_bytes = output_bytes;
  s.metrics.cells_with_violations = s.per_master.size();
  return s;
}

std::string render_metrics_csv(const RunMetrics& m) {
  std::ostringstream os;
  os << "wall_time_seconds,output_bytes,cells_with_violations\n";
  os << std::fixed << std::setprecision(3) << m.wall_time_seconds << ','
     << m.output_bytes << ',' << m.cells_with_violations << "\n";
  return os.str();
}

std::string render_cells_csv(const RunSummary& s) {
  std::ostringstream os;
  os << "master,attributed_violations\n";
  for (const auto& [m, n] : s.per_master) os << m << ',' << n << "\n";
  return os.str();
}

}  // namespace pinaccess
