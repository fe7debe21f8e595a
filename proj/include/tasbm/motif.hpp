#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tasbm/temporal_graph.hpp"

namespace tasbm {

// Directed edge between motif node slots.
struct SlotEdge {
  int src = 0;
  int dst = 0;

  friend auto operator<=>(const SlotEdge&, const SlotEdge&) = default;
};

// A k-node, z-edge directed multigraph pattern whose edge list order is the
// motif's strict total order on edges.
class TemporalMotif {
 public:
  // k is the number of slots referenced; every slot in 0..k-1 must appear in
  // some edge and no edge may be a self-loop.
  explicit TemporalMotif(std::vector<SlotEdge> edges);

  // Parses "k=3; 0>1, 1>2, 2>0". The "k=..;" prefix is optional.
  static TemporalMotif parse(std::string_view literal);
  std::string literal() const;

  int node_count() const { return k_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  std::span<const SlotEdge> edges() const { return edges_; }

  // Slots renumbered by first appearance along the edge order. Two motifs are
  // equivalent (a slot relabeling maps one onto the other while preserving
  // the edge order) exactly when their canonical forms are equal.
  TemporalMotif canonical() const;

  friend bool operator==(const TemporalMotif&, const TemporalMotif&) = default;

 private:
  int k_ = 0;
  std::vector<SlotEdge> edges_;
};

enum class MotifCategory { triangle, two_node, reciprocated, double_edge };

std::string_view to_string(MotifCategory category);

// Classification of 3-edge motifs on at most 3 nodes. Throws ArgumentError for
// any other shape.
MotifCategory category(const TemporalMotif& motif);

struct MotifLabel {
  char row = 'A';  // 'A'..'F'
  int col = 1;     // 1..6

  std::string str() const;
  static std::optional<MotifLabel> parse(std::string_view text);

  friend auto operator<=>(const MotifLabel&, const MotifLabel&) = default;
};

struct CatalogEntry {
  MotifLabel label;
  TemporalMotif motif;
  MotifCategory category;
};

// The 36 pairwise non-equivalent 3-edge motifs on 2 or 3 nodes, in label
// order A1..A6, B1..B6, ..., F6. Within a category, motifs take labels in
// lexicographic order of their canonical edge lists.
const std::vector<CatalogEntry>& catalog_36();

// Catalog position of a motif (up to equivalence), if it is a catalog motif.
std::optional<std::size_t> catalog_index(const TemporalMotif& motif);

// Catalog label for catalog motifs, the literal otherwise.
std::string motif_name(const TemporalMotif& motif);

// Resolves a label ("C3") or a motif literal.
TemporalMotif resolve_motif(std::string_view text);

// True iff `edges` (position i matched to motif edge i) is a delta-instance:
// one slot<->node bijection explains every edge, timestamps strictly
// increase, and the span t_z - t_1 is at most delta.
bool is_delta_instance(std::span<const TemporalEdge> edges, const TemporalMotif& motif,
                       Timestamp delta);

}  // namespace tasbm
