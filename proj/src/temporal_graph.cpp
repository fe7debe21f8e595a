#include "tasbm/temporal_graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "tasbm/error.hpp"

namespace tasbm {

namespace {

std::vector<std::int64_t> identity_labels(std::size_t n) {
  std::vector<std::int64_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::int64_t{0});
  return labels;
}

Timestamp floor_div(Timestamp a, Timestamp b) {
  Timestamp q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

TemporalGraph::TemporalGraph()
    : edges_(std::make_shared<const std::vector<TemporalEdge>>()),
      labels_(std::make_shared<const std::vector<std::int64_t>>()) {}

TemporalGraph::TemporalGraph(std::size_t node_count, std::vector<TemporalEdge> edges,
                             std::vector<std::int64_t> labels)
    : node_count_(node_count) {
  for (const auto& e : edges) {
    if (e.src >= node_count || e.dst >= node_count) {
      throw ArgumentError("edge endpoint outside node range");
    }
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const TemporalEdge& a, const TemporalEdge& b) { return a.t < b.t; });
  if (labels.empty()) {
    labels = identity_labels(node_count);
  } else if (labels.size() != node_count) {
    throw ArgumentError("label map size differs from node count");
  }
  edges_ = std::make_shared<const std::vector<TemporalEdge>>(std::move(edges));
  labels_ = std::make_shared<const std::vector<std::int64_t>>(std::move(labels));
}

Timestamp TemporalGraph::t_min() const { return edges_->empty() ? 0 : edges_->front().t; }
Timestamp TemporalGraph::t_max() const { return edges_->empty() ? 0 : edges_->back().t; }

std::int64_t TemporalGraph::label(NodeId node) const { return labels_->at(node); }

WindowView::WindowView(std::shared_ptr<const std::vector<TemporalEdge>> storage,
                       std::size_t first, std::size_t count, Interval interval,
                       std::size_t node_count)
    : storage_(std::move(storage)),
      first_(first),
      count_(count),
      interval_(interval),
      node_count_(node_count) {}

WindowView WindowView::whole(const TemporalGraph& graph) {
  return WindowView(graph.storage(), 0, graph.edge_count(),
                    Interval{graph.t_min(), graph.t_max() + 1}, graph.node_count());
}

WindowView WindowView::of(const TemporalGraph& graph, Interval interval) {
  const auto edges = graph.edges();
  const auto lo = std::lower_bound(edges.begin(), edges.end(), interval.begin,
                                   [](const TemporalEdge& e, Timestamp t) { return e.t < t; });
  const auto hi = std::lower_bound(lo, edges.end(), interval.end,
                                   [](const TemporalEdge& e, Timestamp t) { return e.t < t; });
  return WindowView(graph.storage(), static_cast<std::size_t>(lo - edges.begin()),
                    static_cast<std::size_t>(hi - lo), interval, graph.node_count());
}

std::span<const TemporalEdge> WindowView::edges() const {
  if (!storage_) return {};
  return std::span<const TemporalEdge>(*storage_).subspan(first_, count_);
}

TemporalGraph parse_edge_list(std::istream& in) {
  std::vector<TemporalEdge> edges;
  std::vector<std::int64_t> labels;
  std::unordered_map<std::int64_t, NodeId> compact;
  const auto intern = [&](std::int64_t label) {
    auto [it, inserted] = compact.try_emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const char* p = line.data();
    const char* end = p + line.size();
    const auto skip_ws = [&] {
      while (p != end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    };
    skip_ws();
    if (p == end || *p == '#') continue;

    std::int64_t fields[3];
    for (int i = 0; i < 3; ++i) {
      skip_ws();
      const auto [next, ec] = std::from_chars(p, end, fields[i]);
      if (ec != std::errc() || next == p) {
        throw ParseError(line_no, "expected three integers \"src dst t\"");
      }
      p = next;
      if (p != end && *p != ' ' && *p != '\t' && *p != '\r') {
        throw ParseError(line_no, "malformed integer");
      }
    }
    skip_ws();
    if (p != end) throw ParseError(line_no, "trailing characters after \"src dst t\"");
    if (fields[0] < 0 || fields[1] < 0) throw ParseError(line_no, "negative node id");
    if (fields[2] < 0) throw ParseError(line_no, "negative timestamp");

    const NodeId src = intern(fields[0]);
    const NodeId dst = intern(fields[1]);
    edges.push_back({src, dst, fields[2]});
  }
  const std::size_t n = labels.size();
  return TemporalGraph(n, std::move(edges), std::move(labels));
}

void write_edge_list(const TemporalGraph& graph, std::ostream& out, bool external_labels) {
  for (const auto& e : graph.edges()) {
    if (external_labels) {
      out << graph.label(e.src) << ' ' << graph.label(e.dst) << ' ' << e.t << '\n';
    } else {
      out << e.src << ' ' << e.dst << ' ' << e.t << '\n';
    }
  }
}

TemporalGraph preprocess(const TemporalGraph& graph, double degree_fraction,
                         bool keep_largest_component) {
  if (!(degree_fraction >= 0.0 && degree_fraction <= 1.0)) {
    throw ArgumentError("degree fraction must lie in [0, 1]");
  }
  const std::size_t n = graph.node_count();
  std::vector<TemporalEdge> kept;
  kept.reserve(graph.edge_count());
  std::vector<std::uint64_t> degree(n, 0);
  for (const auto& e : graph.edges()) {
    if (e.src == e.dst) continue;
    kept.push_back(e);
    ++degree[e.src];
    ++degree[e.dst];
  }

  const std::uint64_t max_degree = n ? *std::max_element(degree.begin(), degree.end()) : 0;
  const double threshold = degree_fraction * static_cast<double>(max_degree);
  std::vector<char> alive(n);
  for (std::size_t v = 0; v < n; ++v) alive[v] = static_cast<double>(degree[v]) >= threshold;

  std::erase_if(kept, [&](const TemporalEdge& e) { return !alive[e.src] || !alive[e.dst]; });

  if (keep_largest_component && n > 0) {
    // Union-find over the induced static graph.
    std::vector<NodeId> parent(n);
    std::iota(parent.begin(), parent.end(), NodeId{0});
    const auto find = [&](NodeId v) {
      while (parent[v] != v) {
        parent[v] = parent[parent[v]];
        v = parent[v];
      }
      return v;
    };
    for (const auto& e : kept) {
      NodeId a = find(e.src), b = find(e.dst);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> size(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (alive[v]) ++size[find(static_cast<NodeId>(v))];
    }
    // Roots are component minima, so scanning upward breaks ties toward the
    // component holding the smallest node id.
    std::size_t best = 0;
    for (std::size_t v = 1; v < n; ++v) {
      if (size[v] > size[best]) best = v;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (alive[v] && find(static_cast<NodeId>(v)) != best) alive[v] = 0;
    }
    std::erase_if(kept, [&](const TemporalEdge& e) { return !alive[e.src]; });
  }

  std::vector<NodeId> remap(n, 0);
  std::vector<std::int64_t> labels;
  for (std::size_t v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    remap[v] = static_cast<NodeId>(labels.size());
    labels.push_back(graph.label(static_cast<NodeId>(v)));
  }
  for (auto& e : kept) {
    e.src = remap[e.src];
    e.dst = remap[e.dst];
  }
  const std::size_t m = labels.size();
  return TemporalGraph(m, std::move(kept), std::move(labels));
}

bool DayMask::skips(Timestamp t) const {
  const Timestamp day = floor_div(t, day_length);
  const auto weekday = static_cast<int>(((epoch_weekday + day) % 7 + 7) % 7);
  return (skip >> weekday) & 1;
}

Timestamp effective_time(Timestamp t, const DayMask& mask) {
  if (mask.day_length <= 0) throw ArgumentError("day length must be positive");
  int unmasked_per_week = 0;
  for (int d = 0; d < 7; ++d) unmasked_per_week += !((mask.skip >> d) & 1);
  if (unmasked_per_week == 0) throw ArgumentError("day mask removes every weekday");

  const Timestamp day = floor_div(t, mask.day_length);
  const Timestamp weeks = floor_div(day, 7);
  const Timestamp rem = day - 7 * weeks;
  Timestamp before = weeks * unmasked_per_week;
  for (Timestamp i = 0; i < rem; ++i) {
    const auto weekday = static_cast<int>(((mask.epoch_weekday + i) % 7 + 7) % 7);
    before += !((mask.skip >> weekday) & 1);
  }
  const Timestamp offset = mask.skips(t) ? 0 : t - day * mask.day_length;
  return before * mask.day_length + offset;
}

TemporalGraph excise_days(const TemporalGraph& graph, const DayMask& mask) {
  std::vector<TemporalEdge> kept;
  kept.reserve(graph.edge_count());
  for (auto e : graph.edges()) {
    if (mask.skips(e.t)) continue;
    e.t = effective_time(e.t, mask);
    kept.push_back(e);
  }
  return TemporalGraph(graph.node_count(), std::move(kept), graph.labels());
}

std::vector<WindowView> window_slices(const TemporalGraph& graph, Timestamp T,
                                      const SliceOptions& options) {
  if (T <= 0) throw ArgumentError("window length T must be positive");

  const TemporalGraph source = options.day_mask ? excise_days(graph, *options.day_mask) : graph;
  Timestamp origin = options.origin;
  std::optional<Timestamp> end = options.end;
  if (options.day_mask) {
    origin = effective_time(origin, *options.day_mask);
    if (end) end = effective_time(*end, *options.day_mask);
  }
  if (!end) {
    if (source.empty()) return {};
    end = source.t_max() + 1;
  }

  std::vector<WindowView> windows;
  for (Timestamp begin = origin; begin < *end; begin += T) {
    windows.push_back(WindowView::of(source, Interval{begin, begin + T}));
  }
  return windows;
}

}  // namespace tasbm
