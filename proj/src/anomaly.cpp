#include "tasbm/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tasbm/error.hpp"
#include "tasbm/text_format.hpp"

namespace tasbm {

namespace {

double median(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2) return upper;
  return (*std::max_element(v.begin(), v.begin() + mid) + upper) / 2;
}

}  // namespace

MsreResult msre(std::span<const double> observed, double expected) {
  const std::vector<double> repeated(observed.size(), expected);
  return msre(observed, repeated);
}

MsreResult msre(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size()) throw ArgumentError("msre: length mismatch");
  MsreResult r;
  double sum = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed[i] < 0 || expected[i] < 0) throw ArgumentError("msre: negative value");
    if (observed[i] == 0) {
      ++r.excluded;
      continue;
    }
    const double rel = (observed[i] - expected[i]) / observed[i];
    sum += rel * rel;
    ++r.used;
  }
  if (r.used == 0) throw UndefinedResultError("msre: every observation is zero");
  r.value = sum / static_cast<double>(r.used);
  return r;
}

void MotifSeries::validate() const {
  if (windows.size() != observed.size() || windows.size() != expected.size()) {
    throw ArgumentError("series lengths differ");
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (i > 0 && windows[i].begin <= windows[i - 1].begin) {
      throw ArgumentError("series windows must strictly increase");
    }
    if (!(observed[i] >= 0) || !(expected[i] >= 0)) {
      throw ArgumentError("series values must be non-negative");
    }
  }
}

std::vector<LogRatio> log_ratio_series(const MotifSeries& series) {
  series.validate();
  std::vector<LogRatio> out;
  out.reserve(series.observed.size());
  for (std::size_t i = 0; i < series.observed.size(); ++i) {
    if (!(series.expected[i] > 0)) {
      out.push_back({std::numeric_limits<double>::quiet_NaN(), RatioStatus::undefined});
    } else if (series.observed[i] == 0) {
      out.push_back({-std::numeric_limits<double>::infinity(), RatioStatus::zero_observed});
    } else {
      out.push_back({std::log(series.observed[i] / series.expected[i]), RatioStatus::ok});
    }
  }
  return out;
}

std::string format_log_ratio(const LogRatio& ratio) {
  switch (ratio.status) {
    case RatioStatus::zero_observed:
      return "-inf";
    case RatioStatus::undefined:
      return "undefined";
    case RatioStatus::ok:
      break;
  }
  return format_real(ratio.value);
}

std::vector<Outlier> mad_outliers(std::span<const double> values, double threshold) {
  if (!(threshold >= 0)) throw ArgumentError("threshold must be non-negative");
  std::vector<double> finite;
  for (double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (finite.size() < 5) throw ArgumentError("need at least 5 finite values for MAD flags");
  const double med = median(finite);
  std::vector<double> dev;
  for (double v : finite) dev.push_back(std::abs(v - med));
  const double mad = median(dev);

  std::vector<Outlier> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) continue;
    const double d = std::abs(values[i] - med);
    if (d > threshold * mad) {
      const double score = mad > 0 ? d / mad : std::numeric_limits<double>::infinity();
      out.push_back({i, values[i], score});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Outlier& a, const Outlier& b) { return a.score > b.score; });
  return out;
}

std::vector<AnomalyFlag> flag_anomalies(const MotifSeries& series, double threshold) {
  std::vector<double> values;
  for (const auto& r : log_ratio_series(series)) values.push_back(r.value);
  std::vector<AnomalyFlag> flags;
  for (const auto& o : mad_outliers(values, threshold)) {
    flags.push_back({o.index, series.windows[o.index], series.motif, o.value, o.score});
  }
  return flags;
}

}  // namespace tasbm
