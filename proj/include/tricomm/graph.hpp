#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tricomm {

using NodeId = std::uint32_t;
using Weight = double;

/// Raised by the text readers; carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Edge {
  NodeId u;
  NodeId v;
  Weight w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node;
  Weight w;
};

/**
 * Undirected simple graph with strictly positive edge weights.
 *
 * Stored as a CSR adjacency with each neighbor list sorted by node id, so
 * edge lookup is a binary search. Immutable once built; concurrent readers
 * need no synchronization.
 */
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Builds a graph over nodes 0..node_count-1. Rejects self-loops,
  /// non-positive or non-finite weights, out-of-range ids and repeated pairs.
  WeightedGraph(std::size_t node_count, std::vector<Edge> edges,
                std::vector<std::string> labels = {})
      : labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != node_count)
      throw std::invalid_argument("label count does not match node count");
    for (auto& e : edges) {
      if (e.u >= node_count || e.v >= node_count)
        throw std::out_of_range("edge endpoint out of range");
      if (e.u == e.v) throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
      if (!(e.w > 0.0) || !std::isfinite(e.w))
        throw std::invalid_argument("non-positive edge weight");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
        throw std::invalid_argument("duplicate edge " + std::to_string(edges[i].u) + "-" +
                                    std::to_string(edges[i].v));
    }

    offsets_.assign(node_count + 1, 0);
    for (const auto& e : edges) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(2 * edges.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges) {
      adjacency_[cursor[e.u]++] = {e.v, e.w};
      adjacency_[cursor[e.v]++] = {e.u, e.w};
      total_weight_ += e.w;
    }
    // edges were sorted by (u,v); each list is then sorted except for the
    // interleaving of lower and higher neighbours
    for (std::size_t n = 0; n < node_count; ++n) {
      std::sort(adjacency_.begin() + offsets_[n], adjacency_.begin() + offsets_[n + 1],
                [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }
    degree_weight_.assign(node_count, 0.0);
    for (std::size_t n = 0; n < node_count; ++n) {
      for (const auto& nb : neighbors(static_cast<NodeId>(n))) degree_weight_[n] += nb.w;
    }
    edges_ = std::move(edges);
  }

  std::size_t node_count() const noexcept { return degree_weight_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Edges with u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const Neighbor> neighbors(NodeId n) const {
    check(n);
    return {adjacency_.data() + offsets_[n], adjacency_.data() + offsets_[n + 1]};
  }

  std::size_t degree(NodeId n) const {
    check(n);
    return offsets_[n + 1] - offsets_[n];
  }

  /// WD of a node: sum of incident edge weights.
  Weight weighted_degree(NodeId n) const {
    check(n);
    return degree_weight_[n];
  }

  /// m: every unordered edge counted once.
  Weight total_weight() const noexcept { return total_weight_; }

  /// Weight of edge {a,b}, or 0 when absent.
  Weight weight(NodeId a, NodeId b) const {
    auto list = neighbors(a);
    check(b);
    auto it = std::lower_bound(list.begin(), list.end(), b,
                               [](const Neighbor& nb, NodeId x) { return nb.node < x; });
    return (it != list.end() && it->node == b) ? it->w : 0.0;
  }

  bool has_edge(NodeId a, NodeId b) const { return weight(a, b) > 0.0; }

  bool has_labels() const noexcept { return !labels_.empty(); }

  /// External name of a node; the decimal id when no labels were supplied.
  std::string label(NodeId n) const {
    check(n);
    return labels_.empty() ? std::to_string(n) : labels_[n];
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  void check(NodeId n) const {
    if (n >= node_count()) throw std::out_of_range("node id " + std::to_string(n) + " out of range");
  }

  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<Edge> edges_;
  std::vector<Weight> degree_weight_;
  std::vector<std::string> labels_;
  Weight total_weight_ = 0.0;
};

inline Weight weighted_degree(const WeightedGraph& g, NodeId n) { return g.weighted_degree(n); }

inline Weight total_weight(const WeightedGraph& g) { return g.total_weight(); }

/// 0 on the diagonal, 1/w for adjacent nodes, const_val otherwise.
inline double distance(const WeightedGraph& g, NodeId i, NodeId j, double const_val) {
  if (!(const_val > 0.0)) throw std::invalid_argument("distance constant must be positive");
  if (i >= g.node_count() || j >= g.node_count()) throw std::out_of_range("node id out of range");
  if (i == j) return 0.0;
  const Weight w = g.weight(i, j);
  return w > 0.0 ? 1.0 / w : const_val;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

inline bool parse_uint(std::string_view s, std::uint64_t& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

/// Dense ids for external labels. Purely numeric label sets keep numeric
/// order, anything else keeps order of first appearance.
inline std::vector<std::string> densify_labels(const std::vector<std::string>& seen_in_order,
                                               std::unordered_map<std::string, NodeId>& index) {
  std::vector<std::string> labels = seen_in_order;
  std::vector<std::uint64_t> numeric(labels.size());
  bool all_numeric = true;
  for (std::size_t i = 0; i < labels.size() && all_numeric; ++i)
    all_numeric = parse_uint(labels[i], numeric[i]);
  if (all_numeric) {
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return numeric[a] < numeric[b]; });
    std::vector<std::string> sorted;
    sorted.reserve(labels.size());
    for (auto i : order) sorted.push_back(labels[i]);
    labels = std::move(sorted);
  }
  index.clear();
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], static_cast<NodeId>(i));
  return labels;
}

}  // namespace detail

/// Reads "u v w" lines. Blank lines and lines starting with '#' are skipped,
/// CRLF endings are accepted. Node tokens are treated as labels.
inline WeightedGraph load_edge_list(std::istream& in) {
  struct RawEdge {
    std::string u, v;
    Weight w;
    std::size_t line;
  };
  std::vector<RawEdge> raw;
  std::vector<std::string> seen;
  std::unordered_map<std::string, NodeId> first_seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tokens = detail::split_ws(body);
    if (tokens.size() != 3) throw ParseError(line_no, "expected \"u v w\"");
    double w = 0.0;
    if (!detail::parse_double(tokens[2], w) || !std::isfinite(w))
      throw ParseError(line_no, "malformed weight '" + std::string(tokens[2]) + "'");
    if (!(w > 0.0)) throw ParseError(line_no, "non-positive weight");
    if (tokens[0] == tokens[1]) throw ParseError(line_no, "self-loop");
    for (std::size_t t = 0; t < 2; ++t) {
      std::string tok(tokens[t]);
      if (first_seen.emplace(tok, static_cast<NodeId>(seen.size())).second) seen.push_back(tok);
    }
    raw.push_back({std::string(tokens[0]), std::string(tokens[1]), w, line_no});
  }

  std::unordered_map<std::string, NodeId> index;
  auto labels = detail::densify_labels(seen, index);
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  std::unordered_map<std::uint64_t, std::size_t> pair_line;
  for (const auto& r : raw) {
    NodeId a = index.at(r.u), b = index.at(r.v);
    if (a > b) std::swap(a, b);
    const auto key = (static_cast<std::uint64_t>(a) << 32) | b;
    if (auto [it, fresh] = pair_line.emplace(key, r.line); !fresh)
      throw ParseError(r.line, "duplicate edge (first listed on line " + std::to_string(it->second) + ")");
    edges.push_back({a, b, r.w});
  }
  const auto n = labels.size();
  return WeightedGraph(n, std::move(edges), std::move(labels));
}

inline WeightedGraph load_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_edge_list(in);
}

/// Writes one "u v w" line per edge using node labels, in shortest round-trip form.
inline void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  char buf[64];
  for (const auto& e : g.edges()) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, e.w);
    out << g.label(e.u) << ' ' << g.label(e.v) << ' ' << std::string_view(buf, end - buf) << '\n';
  }
}

/// Connected component index per node, numbered in order of smallest member.
inline std::vector<std::uint32_t> connected_components(const WeightedGraph& g) {
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> comp(g.node_count(), unset);
  std::vector<NodeId> stack;
  std::uint32_t next = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId n = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(n)) {
        if (comp[nb.node] == unset) {
          comp[nb.node] = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return comp;
}

/// Subgraph induced by `keep` (must be sorted ascending), ids re-densified in
/// that order, labels carried over.
inline WeightedGraph induced_subgraph(const WeightedGraph& g, const std::vector<NodeId>& keep) {
  constexpr auto unset = static_cast<NodeId>(-1);
  std::vector<NodeId> remap(g.node_count(), unset);
  std::vector<std::string> labels;
  labels.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    remap[keep[i]] = static_cast<NodeId>(i);
    labels.push_back(g.label(keep[i]));
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (remap[e.u] != unset && remap[e.v] != unset) edges.push_back({remap[e.u], remap[e.v], e.w});
  }
  return WeightedGraph(keep.size(), std::move(edges), std::move(labels));
}

struct DegreeFilterResult {
  WeightedGraph graph;
  std::vector<NodeId> original;  // new id -> id in the input graph
};

/// Keeps every connected component holding at least one node whose
/// (unweighted) degree reaches the threshold.
inline DegreeFilterResult filter_by_degree_mapped(const WeightedGraph& g, std::size_t threshold) {
  const auto comp = connected_components(g);
  const auto comp_count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<char> qualifies(comp_count, 0);
  for (NodeId n = 0; n < g.node_count(); ++n) {
    if (g.degree(n) >= threshold) qualifies[comp[n]] = 1;
  }
  DegreeFilterResult out;
  for (NodeId n = 0; n < g.node_count(); ++n) {
    if (qualifies[comp[n]]) out.original.push_back(n);
  }
  out.graph = induced_subgraph(g, out.original);
  return out;
}

inline WeightedGraph filter_by_degree(const WeightedGraph& g, std::size_t threshold) {
  return filter_by_degree_mapped(g, threshold).graph;
}

}  // namespace tricomm
