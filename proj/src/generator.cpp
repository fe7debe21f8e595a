#include "tasbm/generator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "tasbm/error.hpp"
#include "tasbm/random.hpp"
#include "tasbm/text_format.hpp"

namespace tasbm {

void AnomalyPlan::validate() const {
  if (!(probability >= 0 && probability <= 1)) {
    throw ArgumentError("anomaly probability must lie in [0, 1]");
  }
  if (lag_min < 0 || lag_max < lag_min) throw ArgumentError("anomaly lags need 0 <= min <= max");
}

std::string_view to_string(AnomalyPlan::Kind kind) {
  return kind == AnomalyPlan::Kind::reciprocated ? "reciprocated" : "repeated";
}

AnomalyPlan::Kind parse_anomaly_kind(std::string_view text) {
  if (text == "reciprocated") return AnomalyPlan::Kind::reciprocated;
  if (text == "repeated") return AnomalyPlan::Kind::repeated;
  throw ArgumentError("unknown anomaly kind \"" + std::string(text) + "\"");
}

namespace {

std::uint32_t block_of(const std::vector<std::int64_t>& sizes, NodeId node) {
  std::int64_t end = 0;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    end += sizes[g];
    if (node < end) return static_cast<std::uint32_t>(g);
  }
  throw ArgumentError("node outside every group");
}

// Group index per node from contiguous block sizes.
std::vector<std::uint32_t> blocks(const std::vector<std::int64_t>& sizes) {
  std::vector<std::uint32_t> of;
  for (std::size_t g = 0; g < sizes.size(); ++g) of.insert(of.end(), sizes[g], g);
  return of;
}

// Streams for derive_seed: intervals use their index, anomaly plans start here.
constexpr std::uint64_t kAnomalyStream = 1ull << 32;

}  // namespace

std::size_t GeneratorSpec::node_count() const {
  return static_cast<std::size_t>(std::accumulate(out_groups.begin(), out_groups.end(),
                                                  std::int64_t{0}));
}

std::uint32_t GeneratorSpec::out_group_of(NodeId node) const { return block_of(out_groups, node); }
std::uint32_t GeneratorSpec::in_group_of(NodeId node) const { return block_of(in_groups, node); }

void GeneratorSpec::validate() const {
  if (out_groups.empty() || in_groups.empty()) throw ArgumentError("spec needs groups");
  for (auto s : out_groups) {
    if (s <= 0) throw ArgumentError("group sizes must be positive");
  }
  for (auto s : in_groups) {
    if (s <= 0) throw ArgumentError("group sizes must be positive");
  }
  if (std::accumulate(in_groups.begin(), in_groups.end(), std::int64_t{0}) !=
      static_cast<std::int64_t>(node_count())) {
    throw ArgumentError("out-group and in-group sizes must sum to the same node count");
  }
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    if (iv.span.length() <= 0) throw ArgumentError("intervals must have positive length");
    if (iv.span.begin < 0) throw ArgumentError("intervals must start at t >= 0");
    if (i > 0 && iv.span.begin != intervals[i - 1].span.end) {
      throw ArgumentError("intervals must be contiguous and increasing");
    }
    if (iv.theta.rows() != static_cast<Eigen::Index>(out_groups.size()) ||
        iv.theta.cols() != static_cast<Eigen::Index>(in_groups.size())) {
      throw ArgumentError("theta shape differs from the group counts");
    }
    if (!iv.theta.allFinite() || (iv.theta.array() < 0).any()) {
      throw ArgumentError("theta entries must be finite and non-negative");
    }
  }
  for (const auto& plan : anomalies) {
    plan.validate();
    if (plan.interval >= intervals.size()) throw ArgumentError("anomaly targets unknown interval");
  }
}

TemporalGraph sample_network(const GeneratorSpec& spec) {
  spec.validate();
  const std::size_t n = spec.node_count();
  const auto out_of = blocks(spec.out_groups);
  const auto in_of = blocks(spec.in_groups);
  std::vector<TemporalEdge> edges;
  for (std::size_t i = 0; i < spec.intervals.size(); ++i) {
    const auto& iv = spec.intervals[i];
    Rng rng(derive_seed(spec.seed, i));
    const double L = static_cast<double>(iv.span.length());
    std::unordered_set<Timestamp> used;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = 0; v < n; ++v) {
        if (u == v) continue;
        const double mean = iv.theta(out_of[u], in_of[v]) * L;
        if (mean == 0) continue;
        for (auto c = rng.poisson(mean); c > 0; --c) {
          if (used.size() >= static_cast<std::size_t>(iv.span.length())) {
            throw ArgumentError("interval has fewer ticks than sampled edges");
          }
          Timestamp t;
          do {
            t = rng.uniform_int(iv.span.begin, iv.span.end - 1);
          } while (!used.insert(t).second);
          edges.push_back({u, v, t});
        }
      }
    }
  }
  return TemporalGraph(n, std::move(edges));
}

PlantResult plant_anomalies(const TemporalGraph& graph, const AnomalyPlan& plan, Interval target,
                            std::uint64_t seed) {
  plan.validate();
  Rng rng(seed);
  std::unordered_set<Timestamp> used;
  for (const auto& e : graph.edges()) used.insert(e.t);

  PlantResult result;
  std::vector<TemporalEdge> edges(graph.edges().begin(), graph.edges().end());
  for (const auto& e : graph.edges()) {
    if (!target.contains(e.t) || !rng.bernoulli(plan.probability)) continue;
    Timestamp t = 0;
    for (int attempt = 0; attempt < 16; ++attempt) {
      t = e.t + rng.uniform_int(plan.lag_min, plan.lag_max);
      if (!used.count(t)) break;
    }
    used.insert(t);
    const TemporalEdge added = plan.kind == AnomalyPlan::Kind::reciprocated
                                   ? TemporalEdge{e.dst, e.src, t}
                                   : TemporalEdge{e.src, e.dst, t};
    edges.push_back(added);
    result.injected.push_back({added, e, plan.kind});
  }
  result.graph = TemporalGraph(graph.node_count(), std::move(edges), graph.labels());
  return result;
}

PlantResult generate(const GeneratorSpec& spec) {
  PlantResult result{sample_network(spec), {}};
  for (std::size_t a = 0; a < spec.anomalies.size(); ++a) {
    const auto& plan = spec.anomalies[a];
    auto planted = plant_anomalies(result.graph, plan, spec.intervals[plan.interval].span,
                                   derive_seed(spec.seed, kAnomalyStream + a));
    result.graph = std::move(planted.graph);
    result.injected.insert(result.injected.end(), planted.injected.begin(), planted.injected.end());
  }
  return result;
}

GeneratorSpec rate_schedule_scaled(const GeneratorSpec& base, std::span<const double> scales) {
  if (scales.size() != base.intervals.size()) {
    throw ArgumentError("need one scale factor per interval");
  }
  GeneratorSpec spec = base;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] >= 0) || !std::isfinite(scales[i])) {
      throw ArgumentError("scale factors must be finite and non-negative");
    }
    spec.intervals[i].theta *= scales[i];
  }
  return spec;
}

TasbmModel model_from_spec(const GeneratorSpec& spec, std::size_t interval) {
  spec.validate();
  if (interval >= spec.intervals.size()) throw ArgumentError("unknown interval");
  TasbmModel model;
  model.window = spec.intervals[interval].span;
  model.theta = spec.intervals[interval].theta;
  model.out_state_of = blocks(spec.out_groups);
  model.in_state_of = blocks(spec.in_groups);
  model.joint_counts = CountMatrix::Zero(model.theta.rows(), model.theta.cols());
  for (std::size_t u = 0; u < model.out_state_of.size(); ++u) {
    ++model.joint_counts(model.out_state_of[u], model.in_state_of[u]);
  }
  model.out_state_bucket.resize(model.theta.rows());
  model.in_state_bucket.resize(model.theta.cols());
  std::iota(model.out_state_bucket.begin(), model.out_state_bucket.end(), 0);
  std::iota(model.in_state_bucket.begin(), model.in_state_bucket.end(), 0);
  model.validate();
  return model;
}

GeneratorSpec read_generator_spec(std::istream& in) {
  const TextDocument doc = parse_text(in);
  GeneratorSpec spec;
  bool have_header = false;
  for (const auto& section : doc.sections) {
    if (section.name.empty()) {
      have_header = true;
      const auto& seed = section.at("seed").expect_values(1);
      if (seed.int_value() < 0) throw ParseError(seed.line, "seed must be non-negative");
      spec.seed = static_cast<std::uint64_t>(seed.int_value());
      spec.out_groups = section.at("out_groups").int_values();
      spec.in_groups = section.at("in_groups").int_values();
    } else if (section.name == "interval") {
      const auto& theta = section.at("theta");
      theta.expect_values(2);
      RateMatrix m(theta.int_value(0), theta.int_value(1));
      if (static_cast<Eigen::Index>(theta.rows.size()) != m.rows()) {
        throw ParseError(theta.line, "theta row count mismatch");
      }
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (static_cast<Eigen::Index>(theta.rows[r].size()) != m.cols()) {
          throw ParseError(theta.line + r + 1, "theta column count mismatch");
        }
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          m(r, c) = parse_real(theta.rows[r][c], theta.line + r + 1);
        }
      }
      spec.intervals.push_back({{section.at("begin").expect_values(1).int_value(),
                                 section.at("end").expect_values(1).int_value()},
                                std::move(m)});
    } else if (section.name == "anomaly") {
      AnomalyPlan plan;
      const auto& kind = section.at("kind").expect_values(1);
      try {
        plan.kind = parse_anomaly_kind(kind.values[0]);
      } catch (const ArgumentError& e) {
        throw ParseError(kind.line, e.what());
      }
      plan.probability = section.at("probability").expect_values(1).real_value();
      const auto& lag = section.at("lag").expect_values(2);
      plan.lag_min = lag.int_value(0);
      plan.lag_max = lag.int_value(1);
      const auto& iv = section.at("interval").expect_values(1);
      if (iv.int_value() < 0) throw ParseError(iv.line, "interval index must be non-negative");
      plan.interval = static_cast<std::size_t>(iv.int_value());
      spec.anomalies.push_back(plan);
    } else {
      throw ParseError(section.line, "unknown section [" + section.name + "]");
    }
  }
  if (!have_header) throw ParseError(1, "spec lacks seed and group sizes");
  try {
    spec.validate();
  } catch (const ArgumentError& e) {
    throw ParseError(0, e.what());
  }
  return spec;
}

void write_generator_spec(std::ostream& out, const GeneratorSpec& spec) {
  out << "seed " << spec.seed << '\n';
  out << "out_groups";
  for (auto s : spec.out_groups) out << ' ' << s;
  out << "\nin_groups";
  for (auto s : spec.in_groups) out << ' ' << s;
  out << '\n';
  for (const auto& iv : spec.intervals) {
    out << "\n[interval]\nbegin " << iv.span.begin << "\nend " << iv.span.end << '\n';
    out << "theta " << iv.theta.rows() << ' ' << iv.theta.cols() << '\n';
    for (Eigen::Index r = 0; r < iv.theta.rows(); ++r) {
      out << ' ';
      for (Eigen::Index c = 0; c < iv.theta.cols(); ++c) out << ' ' << format_real(iv.theta(r, c));
      out << '\n';
    }
  }
  for (const auto& plan : spec.anomalies) {
    out << "\n[anomaly]\nkind " << to_string(plan.kind) << "\nprobability "
        << format_real(plan.probability) << "\nlag " << plan.lag_min << ' ' << plan.lag_max
        << "\ninterval " << plan.interval << '\n';
  }
}

void write_audit(std::ostream& out, std::span<const InjectedEdge> injected) {
  out << "# src dst t kind base_t\n";
  for (const auto& e : injected) {
    out << e.edge.src << ' ' << e.edge.dst << ' ' << e.edge.t << ' ' << to_string(e.kind) << ' '
        << e.base.t << '\n';
  }
}

}  // namespace tasbm
