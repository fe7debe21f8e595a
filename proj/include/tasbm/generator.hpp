#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "tasbm/model.hpp"
#include "tasbm/temporal_graph.hpp"

namespace tasbm {

struct GeneratorInterval {
  Interval span;
  // Rates per ordered pair per time unit, [out-group][in-group].
  RateMatrix theta;
};

struct AnomalyPlan {
  enum class Kind { reciprocated, repeated };
  Kind kind = Kind::reciprocated;
  double probability = 0;
  Timestamp lag_min = 0;
  Timestamp lag_max = 0;
  // Index into GeneratorSpec::intervals.
  std::size_t interval = 0;

  void validate() const;
};

std::string_view to_string(AnomalyPlan::Kind kind);
AnomalyPlan::Kind parse_anomaly_kind(std::string_view text);

// Nodes 0..n-1 are split into contiguous out-group blocks and, independently,
// contiguous in-group blocks; both lists must sum to n.
struct GeneratorSpec {
  std::vector<std::int64_t> out_groups;
  std::vector<std::int64_t> in_groups;
  std::vector<GeneratorInterval> intervals;
  std::uint64_t seed = 0;
  std::vector<AnomalyPlan> anomalies;

  std::size_t node_count() const;
  std::uint32_t out_group_of(NodeId node) const;
  std::uint32_t in_group_of(NodeId node) const;
  void validate() const;
};

// For every interval and ordered pair u != v, Poisson(theta * length) edges at
// uniform integer times in the interval. Timestamps are distinct within an
// interval (collisions are redrawn); ArgumentError if the draw needs more
// edges than the interval has ticks. Anomalies in the spec are not applied.
TemporalGraph sample_network(const GeneratorSpec& spec);

struct InjectedEdge {
  TemporalEdge edge;
  TemporalEdge base;
  AnomalyPlan::Kind kind = AnomalyPlan::Kind::reciprocated;
};

struct PlantResult {
  TemporalGraph graph;
  std::vector<InjectedEdge> injected;  // audit sidecar, in base-edge order
};

// For every edge of `graph` inside `target`, with probability p, adds the
// reverse (reciprocated) or a copy (repeated) at t + uniform[lag_min, lag_max].
// The new time is redrawn a few times if it collides with an existing one.
PlantResult plant_anomalies(const TemporalGraph& graph, const AnomalyPlan& plan, Interval target,
                            std::uint64_t seed);

// sample_network followed by every anomaly plan, each on its own sub-seed.
PlantResult generate(const GeneratorSpec& spec);

// Multiplies interval i's theta by scales[i].
GeneratorSpec rate_schedule_scaled(const GeneratorSpec& base, std::span<const double> scales);

// The true TASBM of one interval: groups become states, memberships are the
// spec's blocks. States keep the spec's group order.
TasbmModel model_from_spec(const GeneratorSpec& spec, std::size_t interval);

GeneratorSpec read_generator_spec(std::istream& in);
void write_generator_spec(std::ostream& out, const GeneratorSpec& spec);

// "src dst t kind base_t" per injected edge.
void write_audit(std::ostream& out, std::span<const InjectedEdge> injected);

}  // namespace tasbm
