#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "tricomm/graph.hpp"

namespace tricomm {

/// A 3-clique with a < b < c; weight is the sum of its three edge weights.
struct Triangle {
  NodeId a;
  NodeId b;
  NodeId c;
  Weight weight;

  bool contains(NodeId n) const noexcept { return n == a || n == b || n == c; }

  bool shares_node(const Triangle& o) const noexcept {
    return o.contains(a) || o.contains(b) || o.contains(c);
  }

  friend bool operator==(const Triangle&, const Triangle&) = default;
};

inline bool lex_less(const Triangle& x, const Triangle& y) {
  return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
}

/// Every 3-clique once, in lexicographic (a,b,c) order.
inline std::vector<Triangle> enumerate_triangles(const WeightedGraph& g) {
  std::vector<Triangle> out;
  for (NodeId a = 0; a < g.node_count(); ++a) {
    const auto na = g.neighbors(a);
    for (const auto& ab : na) {
      if (ab.node <= a) continue;
      const auto nb = g.neighbors(ab.node);
      // merge-intersect the two sorted lists, restricted to c > b
      auto ia = std::upper_bound(na.begin(), na.end(), ab.node,
                                 [](NodeId x, const Neighbor& y) { return x < y.node; });
      auto ib = std::upper_bound(nb.begin(), nb.end(), ab.node,
                                 [](NodeId x, const Neighbor& y) { return x < y.node; });
      while (ia != na.end() && ib != nb.end()) {
        if (ia->node < ib->node) {
          ++ia;
        } else if (ib->node < ia->node) {
          ++ib;
        } else {
          out.push_back({a, ab.node, ia->node, ab.w + ia->w + ib->w});
          ++ia;
          ++ib;
        }
      }
    }
  }
  return out;
}

/// λ of one triangle: how many other triangles in the list share a node with it.
inline std::size_t overlap_degree(const std::vector<Triangle>& all, std::size_t l) {
  if (l >= all.size()) throw std::out_of_range("triangle index out of range");
  std::size_t count = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i != l && all[i].shares_node(all[l])) ++count;
  }
  return count;
}

/**
 * λ for every triangle in O(T).
 *
 * The triangles meeting l = (a,b,c) are the union of those through a, b and
 * c. Two of those sets intersect exactly in the triangles on the shared
 * edge, and all three intersect only in l, so
 *   |union| = t(a) + t(b) + t(c) - t(ab) - t(ac) - t(bc) + 1
 * and λ = |union| - 1.
 */
inline std::vector<std::size_t> overlap_degrees(const std::vector<Triangle>& all) {
  std::unordered_map<NodeId, std::size_t> per_node;
  std::unordered_map<std::uint64_t, std::size_t> per_edge;
  auto key = [](NodeId x, NodeId y) { return (static_cast<std::uint64_t>(x) << 32) | y; };
  for (const auto& t : all) {
    ++per_node[t.a];
    ++per_node[t.b];
    ++per_node[t.c];
    ++per_edge[key(t.a, t.b)];
    ++per_edge[key(t.a, t.c)];
    ++per_edge[key(t.b, t.c)];
  }
  std::vector<std::size_t> out;
  out.reserve(all.size());
  for (const auto& t : all) {
    const std::size_t through_nodes = per_node[t.a] + per_node[t.b] + per_node[t.c];
    const std::size_t through_edges =
        per_edge[key(t.a, t.b)] + per_edge[key(t.a, t.c)] + per_edge[key(t.b, t.c)];
    out.push_back(through_nodes - through_edges);
  }
  return out;
}

/// E(l): triangle weight divided by its overlap degree, or the weight itself when λ = 0.
inline double eval_score(Weight triangle_weight, std::size_t lambda) {
  if (!(triangle_weight > 0.0)) throw std::invalid_argument("triangle weight must be positive");
  return lambda == 0 ? triangle_weight : triangle_weight / static_cast<double>(lambda);
}

/// Node-disjoint triangle collection.
struct PackingResult {
  std::vector<Triangle> selected;
  Weight value = 0.0;
  /// per node: index into `selected`, if covered
  std::vector<std::optional<std::uint32_t>> node_assignment;
};

namespace detail {

inline PackingResult make_packing(std::size_t node_count, std::vector<Triangle> selected) {
  PackingResult p;
  p.node_assignment.assign(node_count, std::nullopt);
  for (std::uint32_t i = 0; i < selected.size(); ++i) {
    const auto& t = selected[i];
    for (NodeId n : {t.a, t.b, t.c}) {
      if (n >= node_count) throw std::invalid_argument("triangle node out of range");
      if (p.node_assignment[n]) throw std::invalid_argument("triangles are not node-disjoint");
      p.node_assignment[n] = i;
    }
    p.value += t.weight;
  }
  p.selected = std::move(selected);
  return p;
}

/// Walks `order` and keeps each triangle whose three nodes are still free.
inline PackingResult greedy_select(std::size_t node_count, const std::vector<Triangle>& all,
                                   const std::vector<std::size_t>& order) {
  std::vector<char> used(node_count, 0);
  std::vector<Triangle> chosen;
  for (auto i : order) {
    const auto& t = all[i];
    if (used[t.a] || used[t.b] || used[t.c]) continue;
    used[t.a] = used[t.b] = used[t.c] = 1;
    chosen.push_back(t);
  }
  return make_packing(node_count, std::move(chosen));
}

}  // namespace detail

/// Greedy packing in decreasing E order. λ is computed once against the full
/// enumeration. Ties: heavier triangle first, then lexicographic.
inline PackingResult pack_greedy_eval(const WeightedGraph& g) {
  const auto all = enumerate_triangles(g);
  const auto lambda = overlap_degrees(all);
  std::vector<double> score(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) score[i] = eval_score(all[i].weight, lambda[i]);
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (score[x] != score[y]) return score[x] > score[y];
    if (all[x].weight != all[y].weight) return all[x].weight > all[y].weight;
    return x < y;
  });
  return detail::greedy_select(g.node_count(), all, order);
}

/// Greedy packing in decreasing triangle weight (the plain baseline).
inline PackingResult pack_greedy_weight(const WeightedGraph& g) {
  const auto all = enumerate_triangles(g);
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (all[x].weight != all[y].weight) return all[x].weight > all[y].weight;
    return x < y;
  });
  return detail::greedy_select(g.node_count(), all, order);
}

struct ExactBudget {
  std::size_t max_triangles = 40;
  std::size_t max_nodes = 30;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Maximum-weight triangle packing by exhaustive depth-first search over
 * triangle subsets. Triangles are tried heaviest first; a branch is cut when
 * its weight plus every still-compatible remaining triangle cannot beat the
 * incumbent. Throws BudgetExceeded on instances larger than the budget.
 */
inline PackingResult pack_exact(const WeightedGraph& g, ExactBudget budget = {}) {
  if (g.node_count() > budget.max_nodes)
    throw BudgetExceeded("exact packing refused: " + std::to_string(g.node_count()) + " nodes");
  auto all = enumerate_triangles(g);
  if (all.size() > budget.max_triangles)
    throw BudgetExceeded("exact packing refused: " + std::to_string(all.size()) + " triangles");
  std::stable_sort(all.begin(), all.end(),
                   [](const Triangle& x, const Triangle& y) { return x.weight > y.weight; });

  std::vector<char> used(g.node_count(), 0);
  std::vector<std::size_t> current, best;
  Weight best_value = 0.0;

  auto search = [&](auto&& self, std::size_t next, Weight value) -> void {
    if (value > best_value) {
      best_value = value;
      best = current;
    }
    Weight optimistic = value;
    for (std::size_t i = next; i < all.size(); ++i) {
      const auto& t = all[i];
      if (!used[t.a] && !used[t.b] && !used[t.c]) optimistic += t.weight;
    }
    if (optimistic <= best_value) return;
    for (std::size_t i = next; i < all.size(); ++i) {
      const auto& t = all[i];
      if (used[t.a] || used[t.b] || used[t.c]) continue;
      used[t.a] = used[t.b] = used[t.c] = 1;
      current.push_back(i);
      self(self, i + 1, value + t.weight);
      current.pop_back();
      used[t.a] = used[t.b] = used[t.c] = 0;
    }
  };
  search(search, 0, 0.0);

  std::vector<Triangle> chosen;
  for (auto i : best) chosen.push_back(all[i]);
  std::sort(chosen.begin(), chosen.end(), lex_less);
  return detail::make_packing(g.node_count(), std::move(chosen));
}

inline nlohmann::json triangle_to_json(const Triangle& t) {
  return {{"nodes", {t.a, t.b, t.c}}, {"weight", t.weight}};
}

/// {"triangles": [{"nodes": [a,b,c], "weight": w}, ...], "value": v}
inline nlohmann::json packing_to_json(const PackingResult& p) {
  auto list = nlohmann::json::array();
  for (const auto& t : p.selected) list.push_back(triangle_to_json(t));
  return {{"triangles", std::move(list)}, {"value", p.value}};
}

inline PackingResult packing_from_json(const nlohmann::json& j, const WeightedGraph& g) {
  std::vector<Triangle> tri;
  for (const auto& item : j.at("triangles")) {
    const auto& nodes = item.at("nodes");
    if (nodes.size() != 3) throw std::invalid_argument("triangle must list three nodes");
    std::array<NodeId, 3> n{nodes[0].get<NodeId>(), nodes[1].get<NodeId>(), nodes[2].get<NodeId>()};
    std::sort(n.begin(), n.end());
    tri.push_back({n[0], n[1], n[2], item.at("weight").get<Weight>()});
  }
  return detail::make_packing(g.node_count(), std::move(tri));
}

}  // namespace tricomm
