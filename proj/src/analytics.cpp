#include "tasbm/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "tasbm/error.hpp"
#include "tasbm/linear_extensions.hpp"

namespace tasbm {

AnalysisConfig AnalysisConfig::for_model(const TasbmModel& model, double delta) {
  return {static_cast<double>(model.T()), delta, static_cast<double>(model.window.begin)};
}

void AnalysisConfig::validate() const {
  if (!(T > 0) || !std::isfinite(T)) throw ArgumentError("T must be positive");
  if (!(delta > 0) || !std::isfinite(delta)) throw ArgumentError("delta must be positive");
}

double RateSchedule::total_length() const {
  double sum = 0;
  for (double l : lengths) sum += l;
  return sum;
}

double RateSchedule::mass() const {
  double sum = 0;
  for (std::size_t j = 0; j < lengths.size(); ++j) sum += lengths[j] * multipliers[j];
  return sum;
}

bool RateSchedule::is_constant() const {
  return std::all_of(multipliers.begin(), multipliers.end(),
                     [&](double w) { return w == multipliers.front(); });
}

void RateSchedule::validate() const {
  if (lengths.empty() || lengths.size() != multipliers.size()) {
    throw ArgumentError("schedule needs matching, non-empty length and multiplier lists");
  }
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    if (!(lengths[j] > 0) || !std::isfinite(lengths[j])) {
      throw ArgumentError("schedule piece lengths must be positive");
    }
    if (!(multipliers[j] >= 0) || !std::isfinite(multipliers[j])) {
      throw ArgumentError("schedule multipliers must be finite and non-negative");
    }
  }
}

std::optional<std::uint64_t> permutations_exact(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0) throw ArgumentError("permutations need non-negative n and k");
  if (k > n) return 0;
  std::uint64_t value = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(value, static_cast<std::uint64_t>(n - i), &value) ||
        value > (std::uint64_t{1} << 63)) {
      return std::nullopt;
    }
  }
  return value;
}

double permutations(std::int64_t n, std::int64_t k) {
  if (const auto exact = permutations_exact(n, k)) return static_cast<double>(*exact);
  double value = 1;
  for (std::int64_t i = 0; i < k; ++i) value *= static_cast<double>(n - i);
  return value;
}

namespace {

double factorial(int z) {
  double f = 1;
  for (int i = 2; i <= z; ++i) f *= i;
  return f;
}

void check_state(const TasbmModel& model, std::size_t out_state, std::size_t in_state) {
  if (out_state >= model.out_state_count() || in_state >= model.in_state_count()) {
    throw ArgumentError("unknown state (" + std::to_string(out_state) + ", " +
                        std::to_string(in_state) + ")");
  }
}

// Product over combined states of P(members, demand) for one assignment.
// Exact in 64 bits; recomputed in floating point if that overflows.
double placements(const std::vector<int>& A, const std::vector<std::int64_t>& members,
                  std::vector<std::int64_t>& demand) {
  std::fill(demand.begin(), demand.end(), 0);
  std::uint64_t exact = 1;
  bool fits = true;
  bool empty = false;
  // Walks every slot even once a state runs out, so the cost per assignment
  // does not depend on the counts.
  for (int c : A) {
    const std::int64_t room = members[c] - demand[c]++;
    empty |= room <= 0;
    if (fits && (__builtin_mul_overflow(exact, static_cast<std::uint64_t>(std::max<std::int64_t>(room, 0)),
                                        &exact) ||
                 exact > (std::uint64_t{1} << 63))) {
      fits = false;
    }
  }
  if (empty) return 0;
  if (fits) return static_cast<double>(exact);
  std::fill(demand.begin(), demand.end(), 0);
  double value = 1;
  for (int c : A) value *= static_cast<double>(members[c] - demand[c]++);
  return value;
}

// Sum over assignments of combined states to `slots` distinct nodes of the
// placement count times the theta product over `edges`.
double template_sum(const TasbmModel& model, int slots, std::span<const SlotEdge> edges,
                    AnalyticsCounters* counters) {
  const auto C_out = static_cast<int>(model.out_state_count());
  const auto C_in = static_cast<int>(model.in_state_count());
  const int C = C_out * C_in;
  if (C == 0) return 0;
  std::vector<std::int64_t> members(C);
  for (int c = 0; c < C; ++c) members[c] = model.joint_counts(c / C_in, c % C_in);

  std::vector<int> A(slots, 0);
  std::vector<std::int64_t> demand(C, 0);
  double total = 0;
  std::uint64_t iterations = 0;
  while (true) {
    ++iterations;
    double rates = 1;
    for (const auto& e : edges) rates *= model.theta(A[e.src] / C_in, A[e.dst] % C_in);
    total += placements(A, members, demand) * rates;
    int pos = slots - 1;
    while (pos >= 0 && ++A[pos] == C) A[pos--] = 0;
    if (pos < 0) break;
  }
  if (counters) counters->assignments += iterations;
  return total;
}

}  // namespace

double expected_edges(const TasbmModel& model, std::size_t out_state, std::size_t in_state,
                      double duration) {
  check_state(model, out_state, in_state);
  if (duration < 0) throw ArgumentError("duration must be non-negative");
  return model.theta(out_state, in_state) * duration;
}

double expected_edges(const TasbmModel& model, std::size_t out_state, std::size_t in_state,
                      const RateSchedule& schedule) {
  check_state(model, out_state, in_state);
  schedule.validate();
  return model.theta(out_state, in_state) * schedule.mass();
}

double ordering_probability(std::span<const std::vector<double>> masses) {
  const auto z = masses.size();
  if (z == 0) throw ArgumentError("ordering probability needs at least one edge");
  const auto pieces = masses.front().size();
  std::vector<std::vector<double>> p(z);
  for (std::size_t i = 0; i < z; ++i) {
    if (masses[i].size() != pieces) throw ArgumentError("edges disagree on piece count");
    double sum = 0;
    for (double m : masses[i]) {
      if (!(m >= 0) || !std::isfinite(m)) throw ArgumentError("piece masses must be non-negative");
      sum += m;
    }
    if (!(sum > 0)) throw ArgumentError("edge has zero arrival mass");
    for (double m : masses[i]) p[i].push_back(m / sum);
  }
  // f[i]: probability that edges 0..i-1 all fall in pieces seen so far, in order.
  std::vector<double> f(z + 1, 0.0);
  f[0] = 1;
  for (std::size_t j = 0; j < pieces; ++j) {
    std::vector<double> g(z + 1, 0.0);
    for (std::size_t i = 0; i <= z; ++i) {
      double run = 1;  // product of p[l][j] for the c edges in this piece
      for (std::size_t c = 0; c <= i; ++c) {
        if (c > 0) run *= p[i - c][j] / static_cast<double>(c);
        g[i] += f[i - c] * run;
      }
    }
    f = std::move(g);
  }
  return f[z];
}

double ordering_probability(int z, const RateSchedule& schedule) {
  if (z < 1) throw ArgumentError("ordering probability needs z >= 1");
  schedule.validate();
  std::vector<double> row(schedule.lengths.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    row[j] = schedule.lengths[j] * schedule.multipliers[j];
  }
  const std::vector<std::vector<double>> masses(z, row);
  return ordering_probability(masses);
}

double assignment_sum(const TasbmModel& model, const TemporalMotif& motif,
                      AnalyticsCounters* counters) {
  return template_sum(model, motif.node_count(), motif.edges(), counters);
}

double expected_count_T_le_delta(const TasbmModel& model, const TemporalMotif& motif,
                                 const AnalysisConfig& config, AnalyticsCounters* counters) {
  config.validate();
  if (config.T > config.delta) throw ArgumentError("expected_count_T_le_delta needs T <= delta");
  // With T <= delta every ordered tuple in the window is within delta.
  const int z = motif.edge_count();
  return assignment_sum(model, motif, counters) * std::pow(config.T, z) / factorial(z);
}

double expected_count_T_le_delta(const TasbmModel& model, const TemporalMotif& motif,
                                 const RateSchedule& schedule, double delta,
                                 AnalyticsCounters* counters) {
  schedule.validate();
  if (!(delta > 0)) throw ArgumentError("delta must be positive");
  if (schedule.total_length() > delta) {
    throw ArgumentError("expected_count_T_le_delta needs T <= delta");
  }
  const int z = motif.edge_count();
  const double sum = assignment_sum(model, motif, counters);
  const double mass = schedule.mass();
  if (sum == 0 || mass == 0) return 0;
  return sum * std::pow(mass, z) * ordering_probability(z, schedule);
}

double expected_count_T_gt_delta(const TasbmModel& model, const TemporalMotif& motif,
                                 const AnalysisConfig& config, AnalyticsCounters* counters) {
  config.validate();
  if (config.T <= config.delta) throw ArgumentError("expected_count_T_gt_delta needs T > delta");
  const int z = motif.edge_count();
  const double d = config.delta;
  // Instances starting in the last delta of the window see the T = delta
  // volume; those starting earlier have a full delta after the first edge.
  const double volume = std::pow(d, z) / factorial(z) +
                        (config.T - d) * std::pow(d, z - 1) / factorial(z - 1);
  return assignment_sum(model, motif, counters) * volume;
}

double expected_count(const TasbmModel& model, const TemporalMotif& motif,
                      const AnalysisConfig& config, AnalyticsCounters* counters) {
  config.validate();
  return config.T <= config.delta ? expected_count_T_le_delta(model, motif, config, counters)
                                  : expected_count_T_gt_delta(model, motif, config, counters);
}

double expected_count(const TasbmModel& model, const TemporalMotif& motif,
                      const RateSchedule& schedule, double delta, AnalyticsCounters* counters) {
  schedule.validate();
  if (schedule.total_length() <= delta) {
    return expected_count_T_le_delta(model, motif, schedule, delta, counters);
  }
  if (!schedule.is_constant()) {
    throw UnsupportedError("piecewise-constant schedules are supported for T <= delta only");
  }
  // A constant multiplier w is the same as theta * w.
  const int z = motif.edge_count();
  const AnalysisConfig config{schedule.total_length(), delta, 0};
  return expected_count_T_gt_delta(model, motif, config, counters) *
         std::pow(schedule.multipliers.front(), z);
}

bool variance_supported(const AnalysisConfig& config) {
  return std::abs(config.T - config.delta) <= 1e-12 * std::max(config.T, config.delta);
}

double second_moment(const TasbmModel& model, const TemporalMotif& motif,
                     const AnalysisConfig& config) {
  config.validate();
  if (!variance_supported(config)) {
    throw UnsupportedError("variance is supported for T = delta with constant rates only");
  }
  const int k = motif.node_count();
  const int z = motif.edge_count();
  if (2 * z > 24) throw UnsupportedError("variance supports motifs with at most 12 edges");
  const auto edges = motif.edges();
  const double T = config.T;

  double total = 0;
  std::vector<int> map12(k, -1);  // slot of copy 1 -> slot of copy 2 on the same node
  std::vector<char> taken2(k, 0);

  const auto evaluate_overlap = [&] {
    // Union slots: copy 1 keeps 0..k-1; unshared copy-2 slots follow.
    std::vector<int> id2(k, -1);
    for (int a = 0; a < k; ++a) {
      if (map12[a] >= 0) id2[map12[a]] = a;
    }
    int slots = k;
    for (int b = 0; b < k; ++b) {
      if (id2[b] < 0) id2[b] = slots++;
    }
    std::vector<SlotEdge> second(z);
    for (int j = 0; j < z; ++j) second[j] = {id2[edges[j].src], id2[edges[j].dst]};

    // Identify shared edges: copy-1 position i coincides with copy-2 position j.
    std::vector<int> match(z, -1);
    std::vector<char> used(z, 0);
    std::function<void(int)> identify = [&](int i) {
      if (i < z) {
        identify(i + 1);
        for (int j = 0; j < z; ++j) {
          if (!used[j] && second[j] == edges[i]) {
            used[j] = 1;
            match[i] = j;
            identify(i + 1);
            match[i] = -1;
            used[j] = 0;
          }
        }
        return;
      }
      std::vector<int> event2(z, -1);
      for (int a = 0; a < z; ++a) {
        if (match[a] >= 0) event2[match[a]] = a;
      }
      std::vector<SlotEdge> events(edges.begin(), edges.end());
      for (int j = 0; j < z; ++j) {
        if (event2[j] < 0) {
          event2[j] = static_cast<int>(events.size());
          events.push_back(second[j]);
        }
      }
      const int q = static_cast<int>(events.size());
      std::vector<std::pair<int, int>> precedes;
      for (int a = 0; a + 1 < z; ++a) {
        precedes.push_back({a, a + 1});
        precedes.push_back({event2[a], event2[a + 1]});
      }
      const auto L = count_linear_extensions(q, precedes);
      if (L == 0) return;
      const double rates = template_sum(model, slots, events, nullptr);
      total += rates * std::pow(T, q) * static_cast<double>(L) / factorial(q);
    };
    identify(0);
  };

  std::function<void(int)> overlap = [&](int a) {
    if (a == k) {
      evaluate_overlap();
      return;
    }
    overlap(a + 1);
    for (int b = 0; b < k; ++b) {
      if (taken2[b]) continue;
      taken2[b] = 1;
      map12[a] = b;
      overlap(a + 1);
      map12[a] = -1;
      taken2[b] = 0;
    }
  };
  overlap(0);
  return total;
}

double variance(const TasbmModel& model, const TemporalMotif& motif, const AnalysisConfig& config) {
  const double second = second_moment(model, motif, config);
  const double mean = expected_count(model, motif, config);
  return second - mean * mean;
}

std::vector<ExpectationResult> expected_all(const TasbmModel& model,
                                            std::span<const TemporalMotif> motifs,
                                            const AnalysisConfig& config, bool with_variance,
                                            AnalyticsCounters* counters) {
  std::vector<ExpectationResult> out;
  out.reserve(motifs.size());
  for (const auto& m : motifs) {
    ExpectationResult r{motif_name(m), model.window, expected_count(model, m, config, counters), {}};
    if (with_variance && variance_supported(config)) r.variance = variance(model, m, config);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ExpectationResult> expected_all(const TasbmModel& model, const AnalysisConfig& config,
                                            bool with_variance, AnalyticsCounters* counters) {
  std::vector<TemporalMotif> motifs;
  for (const auto& entry : catalog_36()) motifs.push_back(entry.motif);
  return expected_all(model, motifs, config, with_variance, counters);
}

}  // namespace tasbm
