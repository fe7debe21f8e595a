#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace tasbm {

using NodeId = std::uint32_t;
using Timestamp = std::int64_t;

struct TemporalEdge {
  NodeId src = 0;
  NodeId dst = 0;
  Timestamp t = 0;

  friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

// Half-open time interval [begin, end).
struct Interval {
  Timestamp begin = 0;
  Timestamp end = 0;

  Timestamp length() const { return end - begin; }
  bool contains(Timestamp t) const { return begin <= t && t < end; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Time-sorted multiset of directed timestamped edges over nodes 0..n-1.
// Immutable; copies share the edge storage.
class TemporalGraph {
 public:
  TemporalGraph();

  // Edges are stable-sorted by timestamp. Every endpoint must be < node_count.
  // `labels` maps compact node ids back to external ids; empty means the
  // identity map.
  TemporalGraph(std::size_t node_count, std::vector<TemporalEdge> edges,
                std::vector<std::int64_t> labels = {});

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_->size(); }
  bool empty() const { return edges_->empty(); }

  std::span<const TemporalEdge> edges() const { return *edges_; }
  const std::shared_ptr<const std::vector<TemporalEdge>>& storage() const { return edges_; }

  // Smallest and largest timestamps; both 0 for an empty graph.
  Timestamp t_min() const;
  Timestamp t_max() const;

  // External label of a compact node id.
  std::int64_t label(NodeId node) const;
  const std::vector<std::int64_t>& labels() const { return *labels_; }

 private:
  std::size_t node_count_ = 0;
  std::shared_ptr<const std::vector<TemporalEdge>> edges_;
  std::shared_ptr<const std::vector<std::int64_t>> labels_;
};

// A contiguous, time-bounded slice of a graph's edge list. Keeps the parent's
// storage alive, so views may outlive the graph object they came from.
class WindowView {
 public:
  WindowView() = default;
  WindowView(std::shared_ptr<const std::vector<TemporalEdge>> storage, std::size_t first,
             std::size_t count, Interval interval, std::size_t node_count);

  // Whole-graph view over [t_min, t_max + 1).
  static WindowView whole(const TemporalGraph& graph);
  // View over the edges of `graph` with begin <= t < end.
  static WindowView of(const TemporalGraph& graph, Interval interval);

  std::span<const TemporalEdge> edges() const;
  std::size_t edge_count() const { return count_; }
  std::size_t node_count() const { return node_count_; }
  const Interval& interval() const { return interval_; }
  Timestamp duration() const { return interval_.length(); }

 private:
  std::shared_ptr<const std::vector<TemporalEdge>> storage_;
  std::size_t first_ = 0;
  std::size_t count_ = 0;
  Interval interval_;
  std::size_t node_count_ = 0;
};

// Reads "src dst t" lines. Node labels are compacted to 0..n-1 in order of
// first appearance; '#' starts a comment line. Throws ParseError.
TemporalGraph parse_edge_list(std::istream& in);

// Writes the canonical form: one "src dst t" line per edge, time-sorted.
// Node ids are the external labels, so parse/write round-trips; pass false
// for compact ids.
void write_edge_list(const TemporalGraph& graph, std::ostream& out, bool external_labels = true);

// Drops self-loops, then nodes whose total temporal degree is below
// `degree_fraction` times the maximum degree, then (optionally) everything
// outside the largest weakly connected component. Surviving nodes are
// renumbered in their original order; labels follow them.
TemporalGraph preprocess(const TemporalGraph& graph, double degree_fraction,
                         bool keep_largest_component);

// Days of the week removed from the time axis (bit 0 = Monday ... bit 6 =
// Sunday). `epoch_weekday` is the weekday of t = 0; 1970-01-01 was a Thursday.
struct DayMask {
  std::uint8_t skip = 0;
  Timestamp day_length = 86400;
  int epoch_weekday = 3;

  bool skips(Timestamp t) const;
};

// Maps a timestamp on an unmasked day to time measured only over unmasked
// days. Timestamps on masked days map to the start of the next unmasked day.
Timestamp effective_time(Timestamp t, const DayMask& mask);

// Removes edges on masked days and rewrites the rest into effective time.
TemporalGraph excise_days(const TemporalGraph& graph, const DayMask& mask);

struct SliceOptions {
  Timestamp origin = 0;
  // Exclusive end of the sliced range; defaults to t_max + 1.
  std::optional<Timestamp> end;
  std::optional<DayMask> day_mask;
};

// Consecutive half-open windows [origin + iT, origin + (i+1)T) covering
// [origin, end). With a day mask the graph is first moved into effective
// time, so T counts only unmasked time and the views' intervals are in
// effective time as well.
std::vector<WindowView> window_slices(const TemporalGraph& graph, Timestamp T,
                                      const SliceOptions& options = {});

}  // namespace tasbm
