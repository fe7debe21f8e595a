#pragma once

#include <cstddef>
#include <vector>

#include "tasbm/model.hpp"
#include "tasbm/temporal_graph.hpp"

namespace tasbm {

// Instrumentation: how many times a fit walked the edge list and node list.
struct FitCounters {
  std::size_t edge_passes = 0;
  std::size_t node_passes = 0;
};

// How bucket boundaries are chosen for a window.
struct BucketPolicy {
  enum class Kind {
    fixed,         // `config` for both out- and in-rates
    automatic,     // log_spaced(1 / (n * span), max rate, 10), shared
    largest_gaps,  // `buckets` buckets per direction from the window's rates
  };
  Kind kind = Kind::automatic;
  BucketConfig config;
  std::size_t buckets = 1;
  // Span used for the automatic lower bound; 0 means the window length.
  Timestamp span = 0;

  static BucketPolicy fixed(BucketConfig c) { return {Kind::fixed, std::move(c), 1, 0}; }
  static BucketPolicy automatic(Timestamp span = 0) { return {Kind::automatic, {}, 1, span}; }
  static BucketPolicy gaps(std::size_t buckets) { return {Kind::largest_gaps, {}, buckets, 0}; }
};

// One pass over the edges for per-node out/in degree, one pass over the
// nodes for bucket assignment. Theta is approximated by spreading each
// out-state's total rate across in-states in proportion to their total
// in-rates, normalized per ordered pair:
//   theta(r, s) = R_out(r) * R_in(s) / sum(R_in) / (n_r * n_s * T).
TasbmModel fit_window_approx(const WindowView& window, const BucketPolicy& policy,
                             FitCounters* counters = nullptr);

// Second edge pass: theta(r, s) = m_rs / ((n_r * n_s - overlap_rs) * T) where
// m_rs counts edges from out-state r to in-state s and overlap_rs the nodes
// in both (self-pairs carry no edges). Memberships come from `model`.
RateMatrix fit_window_exact(const WindowView& window, const TasbmModel& model,
                            FitCounters* counters = nullptr);

// Approximate memberships plus the exact second pass.
TasbmModel fit_window(const WindowView& window, const BucketPolicy& policy, bool exact,
                      FitCounters* counters = nullptr);

// Independent fit per window of length T. An automatic policy resolves one
// shared boundary grid from the whole graph (lower bound 1/(n * span)).
std::vector<TasbmModel> fit_series(const TemporalGraph& graph, Timestamp T,
                                   const BucketPolicy& policy, bool exact,
                                   const SliceOptions& slicing = {});

}  // namespace tasbm
