#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tasbm/temporal_graph.hpp"

namespace tasbm {

// Edge rates per ordered node pair per unit time, indexed [out-state][in-state].
using RateMatrix = Eigen::MatrixXd;
// Node counts per combined (out-state, in-state) pair.
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Rate thresholds splitting [0, inf) into buckets [0,b1), [b1,b2), ..., [bk, inf).
struct BucketConfig {
  std::vector<double> boundaries;

  std::size_t bucket_count() const { return boundaries.size() + 1; }
  std::size_t bucket_of(double rate) const;
  // Throws ArgumentError unless boundaries are finite, positive and strictly
  // increasing.
  void validate() const;

  static BucketConfig single() { return {}; }
  // lo, lo*factor, lo*factor^2, ... up to and including the last value <= hi.
  static BucketConfig log_spaced(double lo, double hi, double factor = 10.0);
  // Boundaries at the geometric midpoints of the `buckets - 1` widest gaps
  // between consecutive distinct positive rates on a log scale. Zero rates
  // share the lowest bucket.
  static BucketConfig largest_gaps(std::span<const double> rates, std::size_t buckets);

  friend bool operator==(const BucketConfig&, const BucketConfig&) = default;
};

// Temporal activity state block model for one analysis window.
//
// Each node has an out-state (sending activity) and an in-state (receiving
// activity); theta(r, s) is the Poisson rate of edges from any node in
// out-state r to any distinct node in in-state s, per unit time. Only
// non-empty states are kept, in increasing bucket order.
struct TasbmModel {
  Interval window;
  // Node counts per (out-state, in-state); row sums are out-state sizes.
  CountMatrix joint_counts;
  RateMatrix theta;

  // Per-node memberships. May be empty for models built from block sizes or
  // read without member lists.
  std::vector<std::uint32_t> out_state_of;
  std::vector<std::uint32_t> in_state_of;

  // Bucket configuration used by the fit and the bucket each state came from.
  BucketConfig out_buckets;
  BucketConfig in_buckets;
  std::vector<std::size_t> out_state_bucket;
  std::vector<std::size_t> in_state_bucket;

  Timestamp T() const { return window.length(); }
  std::size_t node_count() const { return static_cast<std::size_t>(joint_counts.sum()); }
  std::size_t out_state_count() const { return static_cast<std::size_t>(theta.rows()); }
  std::size_t in_state_count() const { return static_cast<std::size_t>(theta.cols()); }

  Eigen::VectorX<std::int64_t> out_counts() const { return joint_counts.rowwise().sum(); }
  Eigen::VectorX<std::int64_t> in_counts() const { return joint_counts.colwise().sum().transpose(); }

  // Empirical state probabilities, member count / n. Stored for reference;
  // the expectation formulas use member counts directly.
  Eigen::VectorXd pi_out() const;
  Eigen::VectorXd pi_in() const;

  // Model from block sizes alone: node counts per combined state and rates.
  static TasbmModel from_blocks(Interval window, CountMatrix joint_counts, RateMatrix theta);

  // Throws ArgumentError if shapes disagree, counts are negative, rates are
  // negative or non-finite, or memberships contradict the counts.
  void validate() const;
};

void write_models(std::ostream& out, std::span<const TasbmModel> models, bool with_members = true);
std::vector<TasbmModel> read_models(std::istream& in);

}  // namespace tasbm
