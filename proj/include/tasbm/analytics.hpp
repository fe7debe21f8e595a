#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tasbm/model.hpp"
#include "tasbm/motif.hpp"

namespace tasbm {

// Durations are in the model's time unit; theta is per unit time.
struct AnalysisConfig {
  double T = 0;
  double delta = 0;
  double t0 = 0;

  // T from the model's window.
  static AnalysisConfig for_model(const TasbmModel& model, double delta);
  void validate() const;
};

// Piecewise-constant time profile over [0, T): piece j lasts lengths[j] and
// scales every theta entry by multipliers[j].
struct RateSchedule {
  std::vector<double> lengths;
  std::vector<double> multipliers;

  static RateSchedule constant(double T) { return {{T}, {1.0}}; }

  double total_length() const;
  // Integral of the multiplier over the schedule.
  double mass() const;
  bool is_constant() const;
  void validate() const;
};

// Instrumentation for the assignment enumeration.
struct AnalyticsCounters {
  std::uint64_t assignments = 0;
};

// P(n, k) = n! / (n - k)!, 0 when k > n. Exact in 64-bit integers while the
// product fits; promoted to floating point beyond 2^63.
double permutations(std::int64_t n, std::int64_t k);
// The exact value, or nullopt if it does not fit in 63 bits.
std::optional<std::uint64_t> permutations_exact(std::int64_t n, std::int64_t k);

// theta(out, in) integrated over a duration or a schedule.
double expected_edges(const TasbmModel& model, std::size_t out_state, std::size_t in_state,
                      double duration);
double expected_edges(const TasbmModel& model, std::size_t out_state, std::size_t in_state,
                      const RateSchedule& schedule);

// Probability that z independent edge times, each with density proportional
// to the schedule, arrive in index order. 1/z! for constant schedules.
double ordering_probability(int z, const RateSchedule& schedule);
// General form: masses[i][j] is the (unnormalized) mass of edge i's arrival
// density in piece j; times are uniform within a piece. Exact: sums over
// non-decreasing piece assignments, with 1/c! for c edges sharing a piece.
double ordering_probability(std::span<const std::vector<double>> masses);

// Sum over assignments of combined states to motif slots: placements times
// the product of theta over motif edges, without durations. Exactly
// (C_out * C_in)^k loop iterations.
double assignment_sum(const TasbmModel& model, const TemporalMotif& motif,
                      AnalyticsCounters* counters = nullptr);

// Expected delta-instances in a window of length T <= delta, constant rates.
double expected_count_T_le_delta(const TasbmModel& model, const TemporalMotif& motif,
                                 const AnalysisConfig& config,
                                 AnalyticsCounters* counters = nullptr);
// Same with a piecewise-constant schedule whose length is T <= delta.
double expected_count_T_le_delta(const TasbmModel& model, const TemporalMotif& motif,
                                 const RateSchedule& schedule, double delta,
                                 AnalyticsCounters* counters = nullptr);
// T > delta, constant rates: the T = delta value plus the instances whose
// first edge falls in the first T - delta of the window.
double expected_count_T_gt_delta(const TasbmModel& model, const TemporalMotif& motif,
                                 const AnalysisConfig& config,
                                 AnalyticsCounters* counters = nullptr);
// Picks the formula by T versus delta.
double expected_count(const TasbmModel& model, const TemporalMotif& motif,
                      const AnalysisConfig& config, AnalyticsCounters* counters = nullptr);
// Schedules are supported for T <= delta only; UnsupportedError otherwise.
double expected_count(const TasbmModel& model, const TemporalMotif& motif,
                      const RateSchedule& schedule, double delta,
                      AnalyticsCounters* counters = nullptr);

// E[N^2] and Var[N] for T = delta and constant rates, by enumerating ordered
// pairs of instance templates: node overlaps between the two slot sets, then
// identifications of shared edges. Throws UnsupportedError when T != delta.
double second_moment(const TasbmModel& model, const TemporalMotif& motif,
                     const AnalysisConfig& config);
double variance(const TasbmModel& model, const TemporalMotif& motif, const AnalysisConfig& config);
bool variance_supported(const AnalysisConfig& config);

struct ExpectationResult {
  std::string motif;
  Interval window;
  double expected = 0;
  std::optional<double> variance;
};

// Expected count per motif; with `with_variance`, variance is attached where
// supported (T = delta) and left empty otherwise.
std::vector<ExpectationResult> expected_all(const TasbmModel& model,
                                            std::span<const TemporalMotif> motifs,
                                            const AnalysisConfig& config, bool with_variance = false,
                                            AnalyticsCounters* counters = nullptr);
// The whole catalog, in catalog order.
std::vector<ExpectationResult> expected_all(const TasbmModel& model, const AnalysisConfig& config,
                                            bool with_variance = false,
                                            AnalyticsCounters* counters = nullptr);

}  // namespace tasbm
