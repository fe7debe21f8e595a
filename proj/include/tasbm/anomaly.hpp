#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tasbm/temporal_graph.hpp"

namespace tasbm {

struct MsreResult {
  double value = 0;
  std::size_t used = 0;
  std::size_t excluded = 0;  // observations equal to zero
};

// Mean over observations N_i > 0 of ((N_i - N) / N_i)^2. Throws
// UndefinedResultError when no observation is positive.
MsreResult msre(std::span<const double> observed, double expected);
// Paired form: observation i is compared with expected[i].
MsreResult msre(std::span<const double> observed, std::span<const double> expected);

struct MotifSeries {
  std::string motif;
  std::vector<Interval> windows;
  std::vector<double> observed;
  std::vector<double> expected;

  // Throws ArgumentError unless lengths agree, windows strictly increase and
  // values are non-negative.
  void validate() const;
};

enum class RatioStatus {
  ok,
  zero_observed,  // value is -inf
  undefined,      // expected <= 0; value is NaN
};

struct LogRatio {
  double value = 0;
  RatioStatus status = RatioStatus::ok;
};

// ln(observed / expected) per window.
std::vector<LogRatio> log_ratio_series(const MotifSeries& series);

// "-inf", "undefined" or the number.
std::string format_log_ratio(const LogRatio& ratio);

struct Outlier {
  std::size_t index = 0;
  double value = 0;
  double score = 0;  // |value - median| / MAD
};

// Points with |x - median| > threshold * MAD, MAD the raw median absolute
// deviation. Non-finite values are ignored. Sorted by score, largest first.
// ArgumentError with fewer than 5 finite values.
std::vector<Outlier> mad_outliers(std::span<const double> values, double threshold);

struct AnomalyFlag {
  std::size_t window_index = 0;
  Interval window;
  std::string motif;
  double log_ratio = 0;
  double score = 0;
};

// mad_outliers over the finite log-ratios of a series.
std::vector<AnomalyFlag> flag_anomalies(const MotifSeries& series, double threshold = 3.0);

}  // namespace tasbm
