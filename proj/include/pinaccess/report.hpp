#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pinaccess/drc.hpp"
#include "pinaccess/techlib.hpp"

namespace pinaccess {

// Violations of one testcell after attribution.
struct TestcellResult {
  std::string id;
  std::vector<DrcViolation> violations;
  bool operator==(const TestcellResult&) const = default;
};

struct SummaryRow {
  std::string id;
  std::size_t drc_count = 0;
  std::vector<std::string> masters;  // sorted, unique
  std::vector<std::string> types;    // display names, sorted, unique
  bool operator==(const SummaryRow&) const = default;
};

SummaryRow summarize(const TestcellResult& result);

// Report in the layout of the router's cell DRC summary: clean testcells
// first, then the ones with violations, each group sorted by id.
std::string render_summary(const std::vector<TestcellResult>& results);
std::string render_summary_csv(const std::vector<TestcellResult>& results);

struct HistogramBin {
  std::int64_t bucket = 0;  // upper bound in multiples of the minimum width
  Rational fraction;
  bool operator==(const HistogramBin&) const = default;
};

// Buckets normalised widths into ranges of `bucket` minimum widths; bin b
// holds widths in ((b - bucket) * min, b * min].
std::vector<HistogramBin> width_histogram(const LibraryProfile& profile,
                                          std::int64_t bucket = 1);
std::string render_histogram_csv(const std::vector<HistogramBin>& bins);

struct RunMetrics {
  double wall_time_seconds = 0;
  std::uint64_t output_bytes = 0;
  std::size_t cells_with_violations = 0;
};

struct RunSummary {
  std::vector<SummaryRow> rows;
  // Library master -> number of violation attributions.
  std::map<std::string, std::size_t> per_master;
  RunMetrics metrics;
};

RunSummary collect_metrics(const std::vector<TestcellResult>& results,
                           double wall_time_seconds, std::uint64_t output_bytes);
std::string render_metrics_csv(const RunMetrics& m);
std::string render_cells_csv(const RunSummary& s);

}  // namespace pinaccess
