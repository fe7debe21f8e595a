#include "tasbm/motif.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tasbm/error.hpp"

namespace tasbm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

int parse_slot(std::string_view text) {
  text = trim(text);
  int value = -1;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
    throw ArgumentError("bad motif slot \"" + std::string(text) + "\"");
  }
  return value;
}

}  // namespace

TemporalMotif::TemporalMotif(std::vector<SlotEdge> edges) : edges_(std::move(edges)) {
  if (edges_.empty()) throw ArgumentError("motif needs at least one edge");
  int max_slot = -1;
  for (const auto& e : edges_) {
    if (e.src < 0 || e.dst < 0) throw ArgumentError("negative motif slot");
    if (e.src == e.dst) throw ArgumentError("motif edge is a self-loop");
    max_slot = std::max({max_slot, e.src, e.dst});
  }
  k_ = max_slot + 1;
  std::vector<char> used(k_, 0);
  for (const auto& e : edges_) used[e.src] = used[e.dst] = 1;
  if (std::find(used.begin(), used.end(), 0) != used.end()) {
    throw ArgumentError("motif has an isolated slot");
  }
}

TemporalMotif TemporalMotif::parse(std::string_view literal) {
  std::optional<int> declared_k;
  std::string_view body = trim(literal);
  if (const auto semi = body.find(';'); semi != std::string_view::npos) {
    const std::string_view head = trim(body.substr(0, semi));
    if (head.size() < 3 || head.substr(0, 2) != "k=") {
      throw ArgumentError("motif literal prefix must be \"k=<n>;\"");
    }
    declared_k = parse_slot(head.substr(2));
    body = body.substr(semi + 1);
  }
  std::vector<SlotEdge> edges;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const std::string_view item = trim(body.substr(0, comma));
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    const auto arrow = item.find('>');
    if (arrow == std::string_view::npos) {
      throw ArgumentError("motif edge \"" + std::string(item) + "\" lacks '>'");
    }
    edges.push_back({parse_slot(item.substr(0, arrow)), parse_slot(item.substr(arrow + 1))});
  }
  TemporalMotif motif(std::move(edges));
  if (declared_k && *declared_k != motif.node_count()) {
    throw ArgumentError("motif literal declares k=" + std::to_string(*declared_k) + " but uses " +
                        std::to_string(motif.node_count()) + " slots");
  }
  return motif;
}

std::string TemporalMotif::literal() const {
  std::ostringstream out;
  out << "k=" << k_ << ";";
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    out << (i ? ", " : " ") << edges_[i].src << '>' << edges_[i].dst;
  }
  return out.str();
}

TemporalMotif TemporalMotif::canonical() const {
  std::vector<int> relabel(k_, -1);
  int next = 0;
  std::vector<SlotEdge> edges;
  edges.reserve(edges_.size());
  for (const auto& e : edges_) {
    if (relabel[e.src] < 0) relabel[e.src] = next++;
    if (relabel[e.dst] < 0) relabel[e.dst] = next++;
    edges.push_back({relabel[e.src], relabel[e.dst]});
  }
  return TemporalMotif(std::move(edges));
}

std::string_view to_string(MotifCategory category) {
  switch (category) {
    case MotifCategory::triangle:
      return "triangle";
    case MotifCategory::two_node:
      return "two_node";
    case MotifCategory::reciprocated:
      return "reciprocated";
    case MotifCategory::double_edge:
      return "double_edge";
  }
  return "unknown";
}

MotifCategory category(const TemporalMotif& motif) {
  if (motif.edge_count() != 3 || motif.node_count() > 3) {
    throw ArgumentError("category is defined for 3-edge motifs on at most 3 nodes");
  }
  if (motif.node_count() == 2) return MotifCategory::two_node;
  std::set<std::pair<int, int>> unordered;
  std::set<std::pair<int, int>> ordered;
  bool repeated = false;
  for (const auto& e : motif.edges()) {
    unordered.insert({std::min(e.src, e.dst), std::max(e.src, e.dst)});
    repeated |= !ordered.insert({e.src, e.dst}).second;
  }
  if (unordered.size() == 3) return MotifCategory::triangle;
  for (const auto& [a, b] : ordered) {
    if (ordered.count({b, a})) return MotifCategory::reciprocated;
  }
  if (repeated) return MotifCategory::double_edge;
  throw ArgumentError("motif shape has no category");
}

std::string MotifLabel::str() const { return std::string(1, row) + std::to_string(col); }

std::optional<MotifLabel> MotifLabel::parse(std::string_view text) {
  text = trim(text);
  if (text.size() != 2) return std::nullopt;
  const char row = text[0];
  const int col = text[1] - '0';
  if (row < 'A' || row > 'F' || col < 1 || col > 6) return std::nullopt;
  return MotifLabel{row, col};
}

const std::vector<CatalogEntry>& catalog_36() {
  static const std::vector<CatalogEntry> catalog = [] {
    // Every 3-edge list over slots {0,1,2}; canonical forms dedupe relabelings.
    std::set<std::vector<SlotEdge>> forms;
    std::vector<SlotEdge> pairs;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (a != b) pairs.push_back({a, b});
      }
    }
    for (const auto& e1 : pairs) {
      for (const auto& e2 : pairs) {
        for (const auto& e3 : pairs) {
          // Relabel by first appearance before construction; some lists
          // skip a slot.
          std::array<int, 3> relabel{-1, -1, -1};
          int next = 0;
          std::vector<SlotEdge> form;
          for (const auto& e : {e1, e2, e3}) {
            if (relabel[e.src] < 0) relabel[e.src] = next++;
            if (relabel[e.dst] < 0) relabel[e.dst] = next++;
            form.push_back({relabel[e.src], relabel[e.dst]});
          }
          forms.insert(std::move(form));
        }
      }
    }

    std::map<MotifCategory, std::vector<TemporalMotif>> by_category;
    for (const auto& form : forms) {
      TemporalMotif m(form);
      by_category[category(m)].push_back(std::move(m));
    }

    // Label layout: triangles A1-4,B1-4; two-node A5,6,B5,6; reciprocated
    // C1-6,D1-6; double edge E1-6,F1-6.
    std::vector<CatalogEntry> entries;
    const auto place = [&](MotifCategory cat, std::span<const MotifLabel> labels) {
      const auto& motifs = by_category.at(cat);
      if (motifs.size() != labels.size()) throw std::logic_error("catalog category size");
      for (std::size_t i = 0; i < labels.size(); ++i) {
        entries.push_back({labels[i], motifs[i], cat});
      }
    };
    const std::array<MotifLabel, 8> triangle{{{'A', 1}, {'A', 2}, {'A', 3}, {'A', 4},
                                              {'B', 1}, {'B', 2}, {'B', 3}, {'B', 4}}};
    const std::array<MotifLabel, 4> two_node{{{'A', 5}, {'A', 6}, {'B', 5}, {'B', 6}}};
    std::vector<MotifLabel> recip, dbl;
    for (char row : {'C', 'D'}) {
      for (int col = 1; col <= 6; ++col) recip.push_back({row, col});
    }
    for (char row : {'E', 'F'}) {
      for (int col = 1; col <= 6; ++col) dbl.push_back({row, col});
    }
    place(MotifCategory::triangle, triangle);
    place(MotifCategory::two_node, two_node);
    place(MotifCategory::reciprocated, recip);
    place(MotifCategory::double_edge, dbl);
    std::sort(entries.begin(), entries.end(),
              [](const CatalogEntry& a, const CatalogEntry& b) { return a.label < b.label; });
    return entries;
  }();
  return catalog;
}

std::optional<std::size_t> catalog_index(const TemporalMotif& motif) {
  if (motif.edge_count() != 3 || motif.node_count() > 3) return std::nullopt;
  const TemporalMotif canon = motif.canonical();
  const auto& catalog = catalog_36();
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (catalog[i].motif == canon) return i;
  }
  return std::nullopt;
}

std::string motif_name(const TemporalMotif& motif) {
  if (const auto idx = catalog_index(motif); idx && catalog_36()[*idx].motif == motif) {
    return catalog_36()[*idx].label.str();
  }
  return motif.literal();
}

TemporalMotif resolve_motif(std::string_view text) {
  if (const auto label = MotifLabel::parse(text)) {
    for (const auto& entry : catalog_36()) {
      if (entry.label == *label) return entry.motif;
    }
  }
  return TemporalMotif::parse(text);
}

bool is_delta_instance(std::span<const TemporalEdge> edges, const TemporalMotif& motif,
                       Timestamp delta) {
  if (static_cast<int>(edges.size()) != motif.edge_count()) {
    throw ArgumentError("edge sequence length differs from motif edge count");
  }
  std::vector<std::optional<NodeId>> slot_node(motif.node_count());
  std::unordered_map<NodeId, int> node_slot;
  const auto bind = [&](int slot, NodeId node) {
    if (slot_node[slot]) return *slot_node[slot] == node;
    const auto [it, inserted] = node_slot.try_emplace(node, slot);
    if (!inserted) return false;
    slot_node[slot] = node;
    return true;
  };
  const auto motif_edges = motif.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!bind(motif_edges[i].src, edges[i].src) || !bind(motif_edges[i].dst, edges[i].dst)) {
      return false;
    }
    if (i > 0 && edges[i].t <= edges[i - 1].t) return false;
  }
  return edges.back().t - edges.front().t <= delta;
}

}  // namespace tasbm
