#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tasbm/motif.hpp"
#include "tasbm/random.hpp"
#include "tasbm/temporal_graph.hpp"

namespace tasbm::testing {

// Random time-sorted edges without self-loops over `nodes` nodes and times
// in [0, horizon). Small horizons force ties.
inline std::vector<TemporalEdge> random_edges(Rng& rng, std::size_t m, std::size_t nodes,
                                              Timestamp horizon) {
  std::vector<TemporalEdge> edges;
  while (edges.size() < m) {
    const auto u = static_cast<NodeId>(rng.uniform_int(0, static_cast<std::int64_t>(nodes) - 1));
    const auto v = static_cast<NodeId>(rng.uniform_int(0, static_cast<std::int64_t>(nodes) - 1));
    if (u == v) continue;
    edges.push_back({u, v, rng.uniform_int(0, horizon - 1)});
  }
  const TemporalGraph g(nodes, std::move(edges));
  return {g.edges().begin(), g.edges().end()};
}

// Oracle: tries every ordered triple of distinct edge positions against
// Brute-force checks, independent of any counter code path.
inline std::uint64_t exhaustive_count3(const std::vector<TemporalEdge>& edges,
                                       const TemporalMotif& motif, Timestamp delta) {
  std::uint64_t count = 0;
  const std::size_t m = edges.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t c = 0; c < m; ++c) {
        if (a == b || b == c || a == c) continue;
        const std::array<TemporalEdge, 3> seq{edges[a], edges[b], edges[c]};
        if (is_delta_instance(seq, motif, delta)) ++count;
      }
    }
  }
  return count;
}

}  // namespace tasbm::testing
