#include "tasbm/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tasbm/error.hpp"

namespace tasbm {

std::size_t BucketConfig::bucket_of(double rate) const {
  return static_cast<std::size_t>(std::upper_bound(boundaries.begin(), boundaries.end(), rate) -
                                  boundaries.begin());
}

void BucketConfig::validate() const {
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (!std::isfinite(boundaries[i]) || boundaries[i] <= 0) {
      throw ArgumentError("bucket boundaries must be finite and positive");
    }
    if (i > 0 && boundaries[i] <= boundaries[i - 1]) {
      throw ArgumentError("bucket boundaries must be strictly increasing");
    }
  }
}

BucketConfig BucketConfig::log_spaced(double lo, double hi, double factor) {
  if (!(lo > 0) || !std::isfinite(lo) || !(factor > 1) || !std::isfinite(factor)) {
    throw ArgumentError("log-spaced buckets need lo > 0 and factor > 1");
  }
  BucketConfig config;
  config.boundaries.push_back(lo);
  // Tolerance keeps an exact power of the factor from falling off the end.
  for (int i = 1;; ++i) {
    const double b = lo * std::pow(factor, i);
    if (b > hi * (1 + 1e-12) || !std::isfinite(b)) break;
    config.boundaries.push_back(b);
  }
  return config;
}

BucketConfig BucketConfig::largest_gaps(std::span<const double> rates, std::size_t buckets) {
  if (buckets == 0) throw ArgumentError("need at least one bucket");
  std::vector<double> values;
  for (double r : rates) {
    if (r > 0) values.push_back(r);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() < 2) return {};

  std::vector<std::size_t> order(values.size() - 1);
  std::iota(order.begin(), order.end(), 0);
  const auto gap = [&](std::size_t i) { return std::log(values[i + 1] / values[i]); };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gap(a) > gap(b); });
  order.resize(std::min(order.size(), buckets - 1));
  std::sort(order.begin(), order.end());

  BucketConfig config;
  for (std::size_t i : order) config.boundaries.push_back(std::sqrt(values[i] * values[i + 1]));
  return config;
}

Eigen::VectorXd TasbmModel::pi_out() const {
  const auto n = static_cast<double>(node_count());
  if (n == 0) return Eigen::VectorXd::Zero(out_state_count());
  return out_counts().cast<double>() / n;
}

Eigen::VectorXd TasbmModel::pi_in() const {
  const auto n = static_cast<double>(node_count());
  if (n == 0) return Eigen::VectorXd::Zero(in_state_count());
  return in_counts().cast<double>() / n;
}

TasbmModel TasbmModel::from_blocks(Interval window, CountMatrix joint_counts, RateMatrix theta) {
  TasbmModel model;
  model.window = window;
  model.joint_counts = std::move(joint_counts);
  model.theta = std::move(theta);
  model.out_state_bucket.resize(model.theta.rows());
  model.in_state_bucket.resize(model.theta.cols());
  std::iota(model.out_state_bucket.begin(), model.out_state_bucket.end(), 0);
  std::iota(model.in_state_bucket.begin(), model.in_state_bucket.end(), 0);
  model.validate();
  return model;
}

void TasbmModel::validate() const {
  if (window.length() <= 0) throw ArgumentError("model window must have positive length");
  if (joint_counts.rows() != theta.rows() || joint_counts.cols() != theta.cols()) {
    throw ArgumentError("joint counts and theta differ in shape");
  }
  if ((joint_counts.array() < 0).any()) throw ArgumentError("negative state member count");
  if (!theta.allFinite() || (theta.array() < 0).any()) {
    throw ArgumentError("theta entries must be finite and non-negative");
  }
  if (out_state_bucket.size() != out_state_count() || in_state_bucket.size() != in_state_count()) {
    throw ArgumentError("state bucket list differs from state count");
  }
  if (out_state_of.empty() && in_state_of.empty()) return;
  if (out_state_of.size() != node_count() || in_state_of.size() != node_count()) {
    throw ArgumentError("membership lists must cover every node");
  }
  CountMatrix tally = CountMatrix::Zero(joint_counts.rows(), joint_counts.cols());
  for (std::size_t u = 0; u < out_state_of.size(); ++u) {
    if (out_state_of[u] >= out_state_count() || in_state_of[u] >= in_state_count()) {
      throw ArgumentError("membership names an unknown state");
    }
    ++tally(out_state_of[u], in_state_of[u]);
  }
  if (tally != joint_counts) throw ArgumentError("memberships contradict joint counts");
}

namespace {

struct Degrees {
  std::vector<std::int64_t> out, in;
};

Degrees tally_degrees(const WindowView& window, FitCounters* counters) {
  Degrees d{std::vector<std::int64_t>(window.node_count(), 0),
            std::vector<std::int64_t>(window.node_count(), 0)};
  for (const auto& e : window.edges()) {
    ++d.out[e.src];
    ++d.in[e.dst];
  }
  if (counters) ++counters->edge_passes;
  return d;
}

// Maps used buckets to dense state ids in increasing bucket order.
std::vector<std::size_t> used_buckets(const std::vector<std::size_t>& bucket_of_node) {
  std::vector<std::size_t> used(bucket_of_node);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  return used;
}

std::uint32_t state_index(const std::vector<std::size_t>& used, std::size_t bucket) {
  return static_cast<std::uint32_t>(std::lower_bound(used.begin(), used.end(), bucket) -
                                    used.begin());
}

}  // namespace

TasbmModel fit_window_approx(const WindowView& window, const BucketPolicy& policy,
                             FitCounters* counters) {
  const Timestamp T = window.duration();
  if (T <= 0) throw ArgumentError("window must have positive length");
  const std::size_t n = window.node_count();
  const Degrees deg = tally_degrees(window, counters);
  const double Td = static_cast<double>(T);

  std::vector<double> out_rate(n), in_rate(n);
  for (std::size_t u = 0; u < n; ++u) {
    out_rate[u] = static_cast<double>(deg.out[u]) / Td;
    in_rate[u] = static_cast<double>(deg.in[u]) / Td;
  }

  TasbmModel model;
  model.window = window.interval();
  switch (policy.kind) {
    case BucketPolicy::Kind::fixed:
      policy.config.validate();
      model.out_buckets = model.in_buckets = policy.config;
      break;
    case BucketPolicy::Kind::automatic:
      if (n > 0) {
        const Timestamp span = policy.span > 0 ? policy.span : T;
        double hi = 0;
        for (std::size_t u = 0; u < n; ++u) hi = std::max({hi, out_rate[u], in_rate[u]});
        model.out_buckets = model.in_buckets =
            BucketConfig::log_spaced(1.0 / (static_cast<double>(n) * static_cast<double>(span)), hi);
      }
      break;
    case BucketPolicy::Kind::largest_gaps:
      model.out_buckets = BucketConfig::largest_gaps(out_rate, policy.buckets);
      model.in_buckets = BucketConfig::largest_gaps(in_rate, policy.buckets);
      break;
  }

  std::vector<std::size_t> out_bucket(n), in_bucket(n);
  for (std::size_t u = 0; u < n; ++u) {
    out_bucket[u] = model.out_buckets.bucket_of(out_rate[u]);
    in_bucket[u] = model.in_buckets.bucket_of(in_rate[u]);
  }
  model.out_state_bucket = used_buckets(out_bucket);
  model.in_state_bucket = used_buckets(in_bucket);
  const auto C_out = static_cast<Eigen::Index>(model.out_state_bucket.size());
  const auto C_in = static_cast<Eigen::Index>(model.in_state_bucket.size());

  model.joint_counts = CountMatrix::Zero(C_out, C_in);
  model.out_state_of.resize(n);
  model.in_state_of.resize(n);
  Eigen::VectorXd R_out = Eigen::VectorXd::Zero(C_out);
  Eigen::VectorXd R_in = Eigen::VectorXd::Zero(C_in);
  for (std::size_t u = 0; u < n; ++u) {
    const auto r = state_index(model.out_state_bucket, out_bucket[u]);
    const auto s = state_index(model.in_state_bucket, in_bucket[u]);
    model.out_state_of[u] = r;
    model.in_state_of[u] = s;
    ++model.joint_counts(r, s);
    R_out[r] += static_cast<double>(deg.out[u]);
    R_in[s] += static_cast<double>(deg.in[u]);
  }
  if (counters) ++counters->node_passes;

  model.theta = RateMatrix::Zero(C_out, C_in);
  const double total_in = R_in.sum();
  if (total_in > 0) {
    const Eigen::VectorXd n_out = model.out_counts().cast<double>();
    const Eigen::VectorXd n_in = model.in_counts().cast<double>();
    for (Eigen::Index r = 0; r < C_out; ++r) {
      for (Eigen::Index s = 0; s < C_in; ++s) {
        model.theta(r, s) = R_out[r] * R_in[s] / total_in / (n_out[r] * n_in[s] * Td);
      }
    }
  }
  return model;
}

RateMatrix fit_window_exact(const WindowView& window, const TasbmModel& model,
                            FitCounters* counters) {
  const Timestamp T = window.duration();
  if (T <= 0) throw ArgumentError("window must have positive length");
  if (model.out_state_of.size() != window.node_count() ||
      model.in_state_of.size() != window.node_count()) {
    throw ArgumentError("memberships must cover every node of the window");
  }
  const auto C_out = static_cast<Eigen::Index>(model.out_state_count());
  const auto C_in = static_cast<Eigen::Index>(model.in_state_count());
  CountMatrix m = CountMatrix::Zero(C_out, C_in);
  for (const auto& e : window.edges()) {
    ++m(model.out_state_of[e.src], model.in_state_of[e.dst]);
  }
  if (counters) ++counters->edge_passes;

  const Eigen::VectorX<std::int64_t> n_out = model.out_counts();
  const Eigen::VectorX<std::int64_t> n_in = model.in_counts();
  RateMatrix theta = RateMatrix::Zero(C_out, C_in);
  for (Eigen::Index r = 0; r < C_out; ++r) {
    for (Eigen::Index s = 0; s < C_in; ++s) {
      const std::int64_t pairs = n_out[r] * n_in[s] - model.joint_counts(r, s);
      if (pairs > 0) {
        theta(r, s) = static_cast<double>(m(r, s)) /
                      (static_cast<double>(pairs) * static_cast<double>(T));
      }
    }
  }
  return theta;
}

TasbmModel fit_window(const WindowView& window, const BucketPolicy& policy, bool exact,
                      FitCounters* counters) {
  TasbmModel model = fit_window_approx(window, policy, counters);
  if (exact) model.theta = fit_window_exact(window, model, counters);
  return model;
}

std::vector<TasbmModel> fit_series(const TemporalGraph& graph, Timestamp T,
                                   const BucketPolicy& policy, bool exact,
                                   const SliceOptions& slicing) {
  const auto windows = window_slices(graph, T, slicing);
  BucketPolicy resolved = policy;
  if (policy.kind == BucketPolicy::Kind::automatic && policy.span <= 0 && !windows.empty()) {
    // One grid for the whole series: the lower bound depends only on the
    // total span, and buckets above a window's top rate come out empty.
    resolved.span = windows.back().interval().end - windows.front().interval().begin;
  }
  std::vector<TasbmModel> models;
  models.reserve(windows.size());
  for (const auto& w : windows) models.push_back(fit_window(w, resolved, exact));
  return models;
}

}  // namespace tasbm
