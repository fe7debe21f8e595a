#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tasbm/motif.hpp"
#include "tasbm/temporal_graph.hpp"

namespace tasbm {

struct CountResult {
  std::string motif;  // catalog label or literal
  Interval window;
  std::uint64_t count = 0;
};

// Exact number of delta-instances of `motif` among time-sorted `edges`, by
// depth-first extension from every candidate first edge. Instances are
// ordered edge tuples. Works for any k, z. Throws OverflowError rather than
// wrapping.
std::uint64_t count_instances(std::span<const TemporalEdge> edges, const TemporalMotif& motif,
                              Timestamp delta);

CountResult count_instances(const WindowView& window, const TemporalMotif& motif,
                            Timestamp delta);

using CatalogCounts = std::array<std::uint64_t, 36>;

// Counts of all 36 catalog motifs in catalog order, computed in one pass per
// static structure: per node pair for two-node motifs, per center node for
// the 3-node motifs with two node pairs, per static triangle for triangles.
// Linear in the edges for the first two, linear in the triangle-incident
// edge lists for the third; never enumerates instances. Equal to
// count_instances over the catalog.
CatalogCounts count_catalog(std::span<const TemporalEdge> edges, Timestamp delta);

// Counts every motif in `motifs`; catalog motifs (up to equivalence) share
// one count_catalog pass, others fall back to count_instances.
std::vector<CountResult> count_all(const WindowView& window, std::span<const TemporalMotif> motifs,
                                   Timestamp delta);

// The whole catalog, in catalog order.
std::vector<CountResult> count_all(const WindowView& window, Timestamp delta);

}  // namespace tasbm
