#include "tables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "csv.hpp"
#include "tasbm/error.hpp"
#include "tasbm/text_format.hpp"

namespace tasbm::cli {

namespace {

const std::vector<std::string> kCountHeader{"window_start", "window_end", "motif_label", "count"};
const std::vector<std::string> kExpectHeader{"window_start", "window_end", "motif_label", "expected",
                                             "variance"};
const std::vector<std::string> kDetectHeader{"window_start", "window_end", "motif",   "observed",
                                             "expected",     "log_ratio",  "flag"};
const std::vector<std::string> kReportHeader{"window_start", "window_end", "motif", "metric", "value"};

template <class Row>
void sort_rows(std::vector<Row>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.window.begin, a.window.end, a.motif) <
           std::tie(b.window.begin, b.window.end, b.motif);
  });
}

std::string header_line(const std::vector<std::string>& header) { return csv_line(header); }

Interval window_of(const std::vector<std::string>& row, std::size_t line) {
  return {parse_int(row[0], line), parse_int(row[1], line)};
}

double non_negative(std::string_view text, std::size_t line) {
  const double v = parse_real(text, line);
  if (!(v >= 0)) throw ParseError(line, "expected a non-negative number");
  return v;
}

LogRatio parse_log_ratio(std::string_view text, std::size_t line) {
  if (text == "-inf") return {-std::numeric_limits<double>::infinity(), RatioStatus::zero_observed};
  if (text == "undefined") return {std::numeric_limits<double>::quiet_NaN(), RatioStatus::undefined};
  return {parse_real(text, line), RatioStatus::ok};
}

using Key = std::tuple<Timestamp, Timestamp, std::string>;

Key key_of(const Interval& w, const std::string& motif) { return {w.begin, w.end, motif}; }

}  // namespace

std::string write_counts(std::vector<CountRow> rows) {
  sort_rows(rows);
  std::string out = header_line(kCountHeader);
  for (const auto& r : rows) {
    out += csv_line({std::to_string(r.window.begin), std::to_string(r.window.end), r.motif,
                     std::to_string(r.count)});
  }
  return out;
}

std::string write_expectations(std::vector<ExpectRow> rows) {
  sort_rows(rows);
  std::string out = header_line(kExpectHeader);
  for (const auto& r : rows) {
    out += csv_line({std::to_string(r.window.begin), std::to_string(r.window.end), r.motif,
                     format_real(r.expected), r.variance ? format_real(*r.variance) : ""});
  }
  return out;
}

std::string write_detections(std::vector<DetectRow> rows) {
  sort_rows(rows);
  std::string out = header_line(kDetectHeader);
  for (const auto& r : rows) {
    out += csv_line({std::to_string(r.window.begin), std::to_string(r.window.end), r.motif,
                     format_real(r.observed), format_real(r.expected),
                     format_log_ratio(r.log_ratio), r.flag ? "1" : "0"});
  }
  return out;
}

std::vector<CountRow> read_counts(std::string_view text) {
  const auto table = parse_csv(text, kCountHeader);
  std::vector<CountRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto line = table.lines[i];
    const auto count = parse_int(row[3], line);
    if (count < 0) throw ParseError(line, "negative count");
    rows.push_back({window_of(row, line), row[2], static_cast<std::uint64_t>(count)});
  }
  return rows;
}

std::vector<ExpectRow> read_expectations(std::string_view text) {
  const auto table = parse_csv(text, kExpectHeader);
  std::vector<ExpectRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto line = table.lines[i];
    ExpectRow r{window_of(row, line), row[2], non_negative(row[3], line), std::nullopt};
    if (!row[4].empty()) r.variance = non_negative(row[4], line);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<DetectRow> read_detections(std::string_view text) {
  const auto table = parse_csv(text, kDetectHeader);
  std::vector<DetectRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto line = table.lines[i];
    if (row[6] != "0" && row[6] != "1") throw ParseError(line, "flag must be 0 or 1");
    rows.push_back({window_of(row, line), row[2], non_negative(row[3], line),
                    non_negative(row[4], line), parse_log_ratio(row[5], line), row[6] == "1"});
  }
  return rows;
}

DetectOutcome detect(const std::vector<CountRow>& counts, const std::vector<ExpectRow>& expected,
                     double threshold) {
  std::map<Key, double> model;
  for (const auto& r : expected) {
    if (!model.emplace(key_of(r.window, r.motif), r.expected).second) {
      throw ArgumentError("duplicate expectation for motif " + r.motif + " at window " +
                          std::to_string(r.window.begin));
    }
  }
  std::map<std::string, MotifSeries> series;
  for (const auto& r : counts) {
    const auto it = model.find(key_of(r.window, r.motif));
    if (it == model.end()) {
      throw ArgumentError("no expectation for motif " + r.motif + " at window " +
                          std::to_string(r.window.begin));
    }
    auto& s = series[r.motif];
    s.motif = r.motif;
    s.windows.push_back(r.window);
    s.observed.push_back(static_cast<double>(r.count));
    s.expected.push_back(it->second);
    model.erase(it);
  }
  if (!model.empty()) {
    const auto& [begin, end, motif] = model.begin()->first;
    throw ArgumentError("no count for motif " + motif + " at window " + std::to_string(begin));
  }

  DetectOutcome outcome;
  for (auto& [motif, s] : series) {
    std::vector<std::size_t> order(s.windows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return s.windows[a].begin < s.windows[b].begin; });
    MotifSeries sorted;
    sorted.motif = motif;
    for (auto i : order) {
      sorted.windows.push_back(s.windows[i]);
      sorted.observed.push_back(s.observed[i]);
      sorted.expected.push_back(s.expected[i]);
    }
    if (sorted.windows.size() < 5) {
      throw ArgumentError("motif " + motif + " has " + std::to_string(sorted.windows.size()) +
                          " windows; flagging needs at least 5");
    }
    const auto ratios = log_ratio_series(sorted);
    std::vector<bool> flagged(ratios.size(), false);
    const auto finite = std::count_if(ratios.begin(), ratios.end(),
                                      [](const LogRatio& r) { return std::isfinite(r.value); });
    if (finite >= 5) {
      for (const auto& f : flag_anomalies(sorted, threshold)) flagged[f.window_index] = true;
    } else {
      outcome.skipped.push_back(motif);
    }
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      outcome.rows.push_back({sorted.windows[i], motif, sorted.observed[i], sorted.expected[i],
                              ratios[i], flagged[i]});
    }
  }
  sort_rows(outcome.rows);
  return outcome;
}

std::string write_report(const std::vector<CountRow>& counts,
                         const std::vector<ExpectRow>& expected,
                         const std::vector<DetectRow>& detections) {
  enum Metric { observed, expectation, variance, log_ratio, flag };
  static constexpr const char* kNames[] = {"observed", "expected", "variance", "log_ratio", "flag"};
  // First source wins: counts and expectations before the detect table.
  std::map<std::tuple<Timestamp, Timestamp, std::string, int>, std::string> cells;
  const auto put = [&](const Interval& w, const std::string& motif, Metric m, std::string value) {
    cells.emplace(std::make_tuple(w.begin, w.end, motif, static_cast<int>(m)), std::move(value));
  };
  for (const auto& r : counts) put(r.window, r.motif, observed, std::to_string(r.count));
  for (const auto& r : expected) {
    put(r.window, r.motif, expectation, format_real(r.expected));
    if (r.variance) put(r.window, r.motif, variance, format_real(*r.variance));
  }
  for (const auto& r : detections) {
    put(r.window, r.motif, observed, format_real(r.observed));
    put(r.window, r.motif, expectation, format_real(r.expected));
    put(r.window, r.motif, log_ratio, format_log_ratio(r.log_ratio));
    put(r.window, r.motif, flag, r.flag ? "1" : "0");
  }
  std::string out = header_line(kReportHeader);
  for (const auto& [key, value] : cells) {
    const auto& [begin, end, motif, metric] = key;
    out += csv_line({std::to_string(begin), std::to_string(end), motif, kNames[metric], value});
  }
  return out;
}

}  // namespace tasbm::cli
