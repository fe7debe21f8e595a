#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tasbm/anomaly.hpp"
#include "tasbm/temporal_graph.hpp"

namespace tasbm::cli {

struct CountRow {
  Interval window;
  std::string motif;
  std::uint64_t count = 0;
};

struct ExpectRow {
  Interval window;
  std::string motif;
  double expected = 0;
  std::optional<double> variance;
};

struct DetectRow {
  Interval window;
  std::string motif;
  double observed = 0;
  double expected = 0;
  LogRatio log_ratio;
  bool flag = false;
};

// Rows are sorted by window start, then motif label, before writing.
std::string write_counts(std::vector<CountRow> rows);
std::string write_expectations(std::vector<ExpectRow> rows);
std::string write_detections(std::vector<DetectRow> rows);

std::vector<CountRow> read_counts(std::string_view text);
std::vector<ExpectRow> read_expectations(std::string_view text);
std::vector<DetectRow> read_detections(std::string_view text);

struct DetectOutcome {
  std::vector<DetectRow> rows;
  // Motifs whose series had fewer than 5 finite log-ratios; never flagged.
  std::vector<std::string> skipped;
};

// Joins counts and expectations on (window, motif) and flags each motif's
// log-ratio series by MAD threshold. Every count row needs a matching
// expectation and vice versa. ArgumentError when a motif has fewer than 5
// windows.
DetectOutcome detect(const std::vector<CountRow>& counts, const std::vector<ExpectRow>& expected,
                     double threshold);

// Long format: window_start,window_end,motif,metric,value with metrics
// observed, expected, variance, log_ratio, flag. Any table may be empty.
std::string write_report(const std::vector<CountRow>& counts,
                         const std::vector<ExpectRow>& expected,
                         const std::vector<DetectRow>& detections);

}  // namespace tasbm::cli
