#include "tasbm/counter.hpp"

#include <algorithm>
#include <unordered_map>

#include "tasbm/error.hpp"

namespace tasbm {

namespace {

void checked_add(std::uint64_t& acc, std::uint64_t value) {
  if (__builtin_add_overflow(acc, value, &acc)) {
    throw OverflowError("motif count exceeds 64 bits");
  }
}

void require_positive_delta(Timestamp delta) {
  if (delta <= 0) throw ArgumentError("delta must be positive");
}

// --- brute force -----------------------------------------------------------

class InstanceSearch {
 public:
  InstanceSearch(std::span<const TemporalEdge> edges, const TemporalMotif& motif, Timestamp delta)
      : edges_(edges),
        motif_(motif.edges()),
        delta_(delta),
        slot_node_(motif.node_count(), kUnbound) {}

  std::uint64_t run() {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      if (!bind(0, e)) continue;
      horizon_ = e.t + delta_;
      extend(1, i, e.t);
      unbind(0);
    }
    return count_;
  }

 private:
  static constexpr std::int64_t kUnbound = -1;

  bool slot_free_for(NodeId node, int slot) const {
    for (std::size_t s = 0; s < slot_node_.size(); ++s) {
      if (static_cast<int>(s) != slot && slot_node_[s] == static_cast<std::int64_t>(node)) {
        return false;
      }
    }
    return true;
  }

  // Binds motif edge `pos` onto `e`, recording which slots were newly bound.
  bool bind(std::size_t pos, const TemporalEdge& e) {
    const SlotEdge& m = motif_[pos];
    newly_[pos] = {false, false};
    const auto try_slot = [&](int slot, NodeId node, bool& fresh) {
      if (slot_node_[slot] != kUnbound) return slot_node_[slot] == static_cast<std::int64_t>(node);
      if (!slot_free_for(node, slot)) return false;
      slot_node_[slot] = node;
      fresh = true;
      return true;
    };
    if (!try_slot(m.src, e.src, newly_[pos].first)) {
      unbind(pos);
      return false;
    }
    if (!try_slot(m.dst, e.dst, newly_[pos].second)) {
      unbind(pos);
      return false;
    }
    return true;
  }

  void unbind(std::size_t pos) {
    if (newly_[pos].first) slot_node_[motif_[pos].src] = kUnbound;
    if (newly_[pos].second) slot_node_[motif_[pos].dst] = kUnbound;
    newly_[pos] = {false, false};
  }

  void extend(std::size_t pos, std::size_t last, Timestamp t_prev) {
    if (pos == motif_.size()) {
      checked_add(count_, 1);
      return;
    }
    for (std::size_t j = last + 1; j < edges_.size() && edges_[j].t <= horizon_; ++j) {
      const auto& e = edges_[j];
      if (e.t <= t_prev) continue;
      if (!bind(pos, e)) continue;
      extend(pos + 1, j, e.t);
      unbind(pos);
    }
  }

  std::span<const TemporalEdge> edges_;
  std::span<const SlotEdge> motif_;
  Timestamp delta_;
  Timestamp horizon_ = 0;
  std::vector<std::int64_t> slot_node_;
  std::vector<std::pair<bool, bool>> newly_ = std::vector<std::pair<bool, bool>>(motif_.size());
  std::uint64_t count_ = 0;
};

// --- structural counting for the catalog ------------------------------------

struct LabeledEvent {
  Timestamp t;
  int label;
};

std::size_t index_of(std::vector<SlotEdge> edges) {
  const auto idx = catalog_index(TemporalMotif(std::move(edges)));
  if (!idx) throw std::logic_error("pattern outside catalog");
  return *idx;
}

// Catalog indices for each labeled pattern, built once from representative
// edge lists so the mapping never depends on label layout details.
struct PatternTables {
  // Two-node: dir bits (0: lower id -> higher id).
  std::array<std::size_t, 8> pair{};
  // Star around a center: [shape][d1 d2 d3]; shape 0 = x x y, 1 = x y x,
  // 2 = y x x; dir 0 = out of the center.
  std::array<std::array<std::size_t, 8>, 3> star{};
  // Triangle u<v<w: label = 2 * pair + dir over pairs (u,v), (v,w), (u,w).
  std::array<std::size_t, 216> triangle{};

  PatternTables() {
    for (int code = 0; code < 8; ++code) {
      std::vector<SlotEdge> edges;
      for (int i = 0; i < 3; ++i) {
        const int dir = (code >> (2 - i)) & 1;
        edges.push_back(dir ? SlotEdge{1, 0} : SlotEdge{0, 1});
      }
      pair[code] = index_of(edges);
    }
    constexpr int kCenter = 0, kX = 1, kY = 2;
    const int shapes[3][3] = {{kX, kX, kY}, {kX, kY, kX}, {kY, kX, kX}};
    for (int shape = 0; shape < 3; ++shape) {
      for (int code = 0; code < 8; ++code) {
        std::vector<SlotEdge> edges;
        for (int i = 0; i < 3; ++i) {
          const int dir = (code >> (2 - i)) & 1;
          const int nbr = shapes[shape][i];
          edges.push_back(dir ? SlotEdge{nbr, kCenter} : SlotEdge{kCenter, nbr});
        }
        star[shape][code] = index_of(edges);
      }
    }
    const SlotEdge tri_pairs[3] = {{0, 1}, {1, 2}, {0, 2}};
    const auto tri_edge = [&](int label) {
      const SlotEdge p = tri_pairs[label / 2];
      return label % 2 ? SlotEdge{p.dst, p.src} : p;
    };
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        for (int c = 0; c < 6; ++c) {
          if (a / 2 == b / 2 || a / 2 == c / 2 || b / 2 == c / 2) continue;
          triangle[(a * 6 + b) * 6 + c] = index_of({tri_edge(a), tri_edge(b), tri_edge(c)});
        }
      }
    }
  }
};

const PatternTables& tables() {
  static const PatternTables t;
  return t;
}

// Ordered triples (e1, e2, e3) of a time-sorted labeled event stream with
// t1 < t2 < t3 and t3 - t1 <= delta, tallied by label triple. Events sharing
// a timestamp are processed as one batch so no pair or triple inside a batch
// is ever formed. `Compatible(a, b)` restricts which labels may co-occur.
template <int L, typename Compatible>
void count_label_triples(std::span<const LabeledEvent> events, Timestamp delta,
                         Compatible compatible, std::array<std::uint64_t, L * L * L>& triples) {
  std::array<std::uint64_t, L> c1{};
  std::array<std::uint64_t, L * L> c2{};
  std::size_t head = 0;
  std::size_t i = 0;
  const std::size_t n = events.size();
  while (i < n) {
    const Timestamp t = events[i].t;
    std::size_t j = i;
    while (j < n && events[j].t == t) ++j;

    while (head < i && events[head].t < t - delta) {
      const Timestamp tb = events[head].t;
      std::size_t h2 = head;
      while (h2 < i && events[h2].t == tb) ++h2;
      for (std::size_t r = head; r < h2; ++r) --c1[events[r].label];
      for (std::size_t r = head; r < h2; ++r) {
        const int a = events[r].label;
        for (int b = 0; b < L; ++b) {
          if (compatible(a, b)) c2[a * L + b] -= c1[b];
        }
      }
      head = h2;
    }

    for (std::size_t r = i; r < j; ++r) {
      const int c = events[r].label;
      for (int a = 0; a < L; ++a) {
        if (!compatible(a, c)) continue;
        for (int b = 0; b < L; ++b) {
          if (!compatible(b, c) || !compatible(a, b)) continue;
          checked_add(triples[(a * L + b) * L + c], c2[a * L + b]);
        }
      }
    }
    for (std::size_t r = i; r < j; ++r) {
      const int b = events[r].label;
      for (int a = 0; a < L; ++a) {
        if (compatible(a, b)) c2[a * L + b] += c1[a];
      }
    }
    for (std::size_t r = i; r < j; ++r) ++c1[events[r].label];
    i = j;
  }
}

std::uint64_t pair_key(NodeId a, NodeId b) {
  return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
}

struct PairLists {
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  std::vector<std::pair<NodeId, NodeId>> nodes;  // (lower, higher)
  std::vector<std::vector<LabeledEvent>> events;  // label = dir, 0: lower -> higher

  explicit PairLists(std::span<const TemporalEdge> edges) {
    for (const auto& e : edges) {
      if (e.src == e.dst) continue;
      const auto [it, inserted] =
          index.try_emplace(pair_key(e.src, e.dst), static_cast<std::uint32_t>(events.size()));
      if (inserted) {
        nodes.push_back({std::min(e.src, e.dst), std::max(e.src, e.dst)});
        events.emplace_back();
      }
      events[it->second].push_back({e.t, e.src < e.dst ? 0 : 1});
    }
  }

  const std::vector<LabeledEvent>& at(NodeId a, NodeId b) const {
    return events[index.at(pair_key(a, b))];
  }
};

void count_two_node(const PairLists& pairs, Timestamp delta, CatalogCounts& out) {
  const auto& table = tables().pair;
  std::array<std::uint64_t, 8> triples{};
  for (const auto& list : pairs.events) {
    if (list.size() < 3) continue;
    count_label_triples<2>(list, delta, [](int, int) { return true; }, triples);
  }
  for (int code = 0; code < 8; ++code) checked_add(out[table[code]], triples[code]);
}

// Three-edge sequences around one center node touching exactly two distinct
// neighbors. With S12 = #(e1, e2 share a neighbor), S13, S23 likewise and S123
// = #(all three share one), the shapes x x y, x y x, y x x are S12 - S123,
// S13 - S123, S23 - S123. Per-neighbor running sums keep each event O(1).
class StarCounter {
 public:
  struct Event {
    Timestamp t;
    int dir;  // 0: center -> nbr
    std::uint32_t nbr;  // local neighbor index
  };

  void run(std::span<const Event> events, std::size_t neighbors, Timestamp delta) {
    reset(neighbors);
    before_.assign(events.size(), {});
    after_.assign(events.size(), {});
    std::size_t head = 0, i = 0;
    const std::size_t n = events.size();
    while (i < n) {
      const Timestamp t = events[i].t;
      std::size_t j = i;
      while (j < n && events[j].t == t) ++j;

      while (head < i && events[head].t < t - delta) {
        const Timestamp tb = events[head].t;
        std::size_t h2 = head;
        while (h2 < i && events[h2].t == tb) ++h2;
        for (std::size_t r = head; r < h2; ++r) {
          const auto& e = events[r];
          --c1_[e.dir];
          --c1n_[e.nbr * 2 + e.dir];
          ++removed_[e.dir];
        }
        for (std::size_t r = head; r < h2; ++r) {
          const auto& e = events[r];
          const std::size_t x = e.nbr;
          for (int b = 0; b < 2; ++b) {
            c2same_[e.dir * 2 + b] -= c1n_[x * 2 + b];
            p2n_[x * 4 + e.dir * 2 + b] -= c1n_[x * 2 + b];
            sum_b_n_[x * 4 + e.dir * 2 + b] -= after_[r][b];
          }
          for (int a = 0; a < 2; ++a) sum_a_n_[x * 4 + a * 2 + e.dir] -= before_[r][a];
        }
        head = h2;
      }

      for (std::size_t r = i; r < j; ++r) {
        const auto& e = events[r];
        const std::size_t x = e.nbr;
        const int c = e.dir;
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            const int code = (a << 2) | (b << 1) | c;
            checked_add(s12_[code], c2same_[a * 2 + b]);
            checked_add(s123_[code], p2n_[x * 4 + a * 2 + b]);
            checked_add(s23_[code], sum_a_n_[x * 4 + a * 2 + b] - removed_[a] * c1n_[x * 2 + b]);
            checked_add(s13_[code], c1n_[x * 2 + a] * cum_[b] - sum_b_n_[x * 4 + a * 2 + b]);
          }
        }
      }
      for (std::size_t r = i; r < j; ++r) {
        const auto& e = events[r];
        const std::size_t x = e.nbr;
        before_[r] = cum_;
        for (int a = 0; a < 2; ++a) {
          c2same_[a * 2 + e.dir] += c1n_[x * 2 + a];
          p2n_[x * 4 + a * 2 + e.dir] += c1n_[x * 2 + a];
          sum_a_n_[x * 4 + a * 2 + e.dir] += cum_[a];
        }
      }
      for (std::size_t r = i; r < j; ++r) {
        const auto& e = events[r];
        ++c1_[e.dir];
        ++c1n_[e.nbr * 2 + e.dir];
        ++cum_[e.dir];
      }
      for (std::size_t r = i; r < j; ++r) {
        const auto& e = events[r];
        after_[r] = cum_;
        for (int b = 0; b < 2; ++b) sum_b_n_[e.nbr * 4 + e.dir * 2 + b] += cum_[b];
      }
      i = j;
    }
  }

  void accumulate(CatalogCounts& out) const {
    const auto& star = tables().star;
    for (int code = 0; code < 8; ++code) {
      checked_add(out[star[0][code]], s12_[code] - s123_[code]);
      checked_add(out[star[1][code]], s13_[code] - s123_[code]);
      checked_add(out[star[2][code]], s23_[code] - s123_[code]);
    }
  }

 private:
  void reset(std::size_t neighbors) {
    c1_ = {};
    c2same_ = {};
    cum_ = {};
    removed_ = {};
    s12_ = s13_ = s23_ = s123_ = {};
    c1n_.assign(neighbors * 2, 0);
    p2n_.assign(neighbors * 4, 0);
    sum_a_n_.assign(neighbors * 4, 0);
    sum_b_n_.assign(neighbors * 4, 0);
  }

  std::array<std::uint64_t, 2> c1_{};
  std::array<std::uint64_t, 4> c2same_{};
  std::array<std::uint64_t, 2> cum_{};
  std::array<std::uint64_t, 2> removed_{};
  std::vector<std::uint64_t> c1n_;
  std::vector<std::uint64_t> p2n_;
  std::vector<std::uint64_t> sum_a_n_;
  std::vector<std::uint64_t> sum_b_n_;
  std::vector<std::array<std::uint64_t, 2>> before_;
  std::vector<std::array<std::uint64_t, 2>> after_;
  std::array<std::uint64_t, 8> s12_{}, s13_{}, s23_{}, s123_{};
};

void count_stars(std::span<const TemporalEdge> edges, std::size_t node_count, Timestamp delta,
                 CatalogCounts& out) {
  std::vector<std::vector<std::pair<Timestamp, std::pair<NodeId, int>>>> incident(node_count);
  for (const auto& e : edges) {
    if (e.src == e.dst) continue;
    incident[e.src].push_back({e.t, {e.dst, 0}});
    incident[e.dst].push_back({e.t, {e.src, 1}});
  }
  std::vector<std::int64_t> local(node_count, -1);
  std::vector<StarCounter::Event> events;
  StarCounter counter;
  for (std::size_t c = 0; c < node_count; ++c) {
    const auto& list = incident[c];
    if (list.size() < 3) continue;
    events.clear();
    std::vector<NodeId> touched;
    for (const auto& [t, info] : list) {
      const NodeId nbr = info.first;
      if (local[nbr] < 0) {
        local[nbr] = static_cast<std::int64_t>(touched.size());
        touched.push_back(nbr);
      }
      events.push_back({t, info.second, static_cast<std::uint32_t>(local[nbr])});
    }
    if (touched.size() >= 2) {
      counter.run(events, touched.size(), delta);
      counter.accumulate(out);
    }
    for (NodeId v : touched) local[v] = -1;
  }
}

void count_triangles(const PairLists& pairs, std::size_t node_count, Timestamp delta,
                     CatalogCounts& out) {
  std::vector<std::vector<NodeId>> adj(node_count);
  for (const auto& [u, v] : pairs.nodes) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  const auto& table = tables().triangle;
  const auto compatible = [](int a, int b) { return a / 2 != b / 2; };
  std::array<std::uint64_t, 216> triples{};
  std::vector<LabeledEvent> merged;
  for (NodeId u = 0; u < node_count; ++u) {
    const auto& nu = adj[u];
    for (auto vit = std::upper_bound(nu.begin(), nu.end(), u); vit != nu.end(); ++vit) {
      const NodeId v = *vit;
      const auto& nv = adj[v];
      // w > v in both neighborhoods
      auto a = std::upper_bound(nu.begin(), nu.end(), v);
      auto b = std::upper_bound(nv.begin(), nv.end(), v);
      while (a != nu.end() && b != nv.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          const NodeId w = *a;
          const std::array<const std::vector<LabeledEvent>*, 3> lists{
              &pairs.at(u, v), &pairs.at(v, w), &pairs.at(u, w)};
          merged.clear();
          std::size_t pos[3] = {0, 0, 0};
          for (;;) {
            int best = -1;
            for (int p = 0; p < 3; ++p) {
              if (pos[p] < lists[p]->size() &&
                  (best < 0 || (*lists[p])[pos[p]].t < (*lists[best])[pos[best]].t)) {
                best = p;
              }
            }
            if (best < 0) break;
            const auto& ev = (*lists[best])[pos[best]++];
            merged.push_back({ev.t, best * 2 + ev.label});
          }
          count_label_triples<6>(merged, delta, compatible, triples);
          ++a;
          ++b;
        }
      }
    }
  }
  for (int code = 0; code < 216; ++code) {
    const int x = code / 36, y = (code / 6) % 6, z = code % 6;
    if (!compatible(x, y) || !compatible(x, z) || !compatible(y, z)) continue;
    checked_add(out[table[code]], triples[code]);
  }
}

}  // namespace

std::uint64_t count_instances(std::span<const TemporalEdge> edges, const TemporalMotif& motif,
                              Timestamp delta) {
  require_positive_delta(delta);
  return InstanceSearch(edges, motif, delta).run();
}

CountResult count_instances(const WindowView& window, const TemporalMotif& motif,
                            Timestamp delta) {
  return {motif_name(motif), window.interval(), count_instances(window.edges(), motif, delta)};
}

CatalogCounts count_catalog(std::span<const TemporalEdge> edges, Timestamp delta) {
  require_positive_delta(delta);
  CatalogCounts counts{};
  if (edges.size() < 3) return counts;
  NodeId max_node = 0;
  for (const auto& e : edges) max_node = std::max({max_node, e.src, e.dst});
  const std::size_t node_count = static_cast<std::size_t>(max_node) + 1;

  const PairLists pairs(edges);
  count_two_node(pairs, delta, counts);
  count_stars(edges, node_count, delta, counts);
  count_triangles(pairs, node_count, delta, counts);
  return counts;
}

std::vector<CountResult> count_all(const WindowView& window, std::span<const TemporalMotif> motifs,
                                   Timestamp delta) {
  require_positive_delta(delta);
  std::optional<CatalogCounts> catalog;
  std::vector<CountResult> results;
  results.reserve(motifs.size());
  for (const auto& motif : motifs) {
    CountResult r{motif_name(motif), window.interval(), 0};
    if (const auto idx = catalog_index(motif)) {
      if (!catalog) catalog = count_catalog(window.edges(), delta);
      r.count = (*catalog)[*idx];
    } else {
      r.count = count_instances(window.edges(), motif, delta);
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<CountResult> count_all(const WindowView& window, Timestamp delta) {
  std::vector<TemporalMotif> motifs;
  for (const auto& entry : catalog_36()) motifs.push_back(entry.motif);
  return count_all(window, motifs, delta);
}

}  // namespace tasbm
