#pragma once

// Brute-force references for the unit and acceptance suites. Everything here
// works from a dense weight matrix built out of the edge list and shares no
// code path with the library routine it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tricomm/graph.hpp"
#include "tricomm/metrics.hpp"
#include "tricomm/partition.hpp"
#include "tricomm/triangles.hpp"

namespace oracle {

using tricomm::Edge;
using tricomm::NodeId;
using tricomm::WeightedGraph;

using Matrix = std::vector<std::vector<double>>;

inline Matrix dense(const WeightedGraph& g) {
  Matrix m(g.node_count(), std::vector<double>(g.node_count(), 0.0));
  for (const auto& e : g.edges()) m[e.u][e.v] = m[e.v][e.u] = e.w;
  return m;
}

/// G(v, p) with weights drawn by `weight(rng)`.
template <typename WeightFn>
WeightedGraph random_graph(std::size_t v, double p, std::uint64_t seed, WeightFn&& weight) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < v; ++i)
    for (NodeId j = i + 1; j < v; ++j)
      if (coin(rng)) edges.push_back({i, j, weight(rng)});
  return WeightedGraph(v, std::move(edges));
}

inline WeightedGraph random_int_graph(std::size_t v, double p, std::uint64_t seed, int wmin = 1, int wmax = 5) {
  return random_graph(v, p, seed, [&](std::mt19937_64& r) {
    return static_cast<double>(std::uniform_int_distribution<int>(wmin, wmax)(r));
  });
}

inline WeightedGraph random_real_graph(std::size_t v, double p, std::uint64_t seed) {
  return random_graph(v, p, seed,
                      [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0.1, 3.0)(r); });
}

struct Triple {
  NodeId a, b, c;
  double w;
};

/// O(v^3) scan over every node triple.
inline std::vector<Triple> triangles(const WeightedGraph& g) {
  const auto m = dense(g);
  std::vector<Triple> out;
  const auto n = static_cast<NodeId>(g.node_count());
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (m[a][b] > 0)
        for (NodeId c = b + 1; c < n; ++c)
          if (m[a][c] > 0 && m[b][c] > 0) out.push_back({a, b, c, m[a][b] + m[a][c] + m[b][c]});
  return out;
}

inline bool share(const Triple& x, const Triple& y) {
  for (NodeId p : {x.a, x.b, x.c})
    for (NodeId q : {y.a, y.b, y.c})
      if (p == q) return true;
  return false;
}

/// Pairwise intersection scan.
inline std::vector<std::size_t> overlaps(const std::vector<Triple>& t) {
  std::vector<std::size_t> out(t.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j)
      if (i != j && share(t[i], t[j])) ++out[i];
  return out;
}

/// Empty string when the packing is valid, otherwise the first violation.
inline std::string validate_packing(const WeightedGraph& g, const tricomm::PackingResult& p) {
  const auto m = dense(g);
  std::vector<int> cover(g.node_count(), 0);
  double value = 0.0;
  for (const auto& t : p.selected) {
    if (!(t.a < t.b && t.b < t.c) || t.c >= g.node_count()) return "non-canonical triple";
    if (m[t.a][t.b] <= 0 || m[t.a][t.c] <= 0 || m[t.b][t.c] <= 0) return "not a triangle";
    if (std::abs(m[t.a][t.b] + m[t.a][t.c] + m[t.b][t.c] - t.weight) > 1e-9) return "wrong weight";
    for (NodeId n : {t.a, t.b, t.c})
      if (++cover[n] > 1) return "not node-disjoint";
    value += t.weight;
  }
  if (std::abs(value - p.value) > 1e-9 * std::max(1.0, value)) return "value mismatch";
  for (const auto& t : triangles(g)) {
    if (!cover[t.a] && !cover[t.b] && !cover[t.c]) return "not maximal";
  }
  for (NodeId n = 0; n < g.node_count(); ++n) {
    const bool assigned = n < p.node_assignment.size() && p.node_assignment[n].has_value();
    if (assigned != (cover[n] == 1)) return "assignment disagrees with selection";
  }
  return {};
}

/// Best packing value by enumerating every node-disjoint subset (no pruning).
inline double best_packing_value(const WeightedGraph& g) {
  const auto t = triangles(g);
  double best = 0.0;
  std::vector<char> used(g.node_count(), 0);
  auto rec = [&](auto&& self, std::size_t i, double value) -> void {
    if (i == t.size()) {
      best = std::max(best, value);
      return;
    }
    self(self, i + 1, value);
    const auto& x = t[i];
    if (used[x.a] || used[x.b] || used[x.c]) return;
    used[x.a] = used[x.b] = used[x.c] = 1;
    self(self, i + 1, value + x.w);
    used[x.a] = used[x.b] = used[x.c] = 0;
  };
  rec(rec, 0, 0.0);
  return best;
}

struct Ledger {
  std::map<std::uint32_t, double> iw;
  std::map<std::uint32_t, double> wd;
  std::map<std::uint32_t, std::map<std::uint32_t, double>> inw;
};

/// IW, WD and INW straight from the definitions, for an arbitrary labelling.
inline Ledger ledger(const WeightedGraph& g, const std::vector<std::uint32_t>& assignment) {
  const auto m = dense(g);
  Ledger l;
  const auto n = g.node_count();
  for (std::size_t i = 0; i < n; ++i) {
    l.iw[assignment[i]] += 0.0;
    for (std::size_t j = 0; j < n; ++j) l.wd[assignment[i]] += m[i][j];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m[i][j] <= 0) continue;
      if (assignment[i] == assignment[j]) {
        l.iw[assignment[i]] += m[i][j];
      } else {
        l.inw[assignment[i]][assignment[j]] += m[i][j];
        l.inw[assignment[j]][assignment[i]] += m[i][j];
      }
    }
  }
  return l;
}

/// φ by the full ordered-pair double sum with 2m normalization.
inline double modularity(const WeightedGraph& g, const tricomm::Partition& p) {
  const auto m = dense(g);
  const auto n = g.node_count();
  std::vector<double> wd(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      wd[i] += m[i][j];
      two_m += m[i][j];
    }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (p[static_cast<NodeId>(i)] == p[static_cast<NodeId>(j)]) q += m[i][j] - wd[i] * wd[j] / two_m;
  return q / two_m;
}

/// Every unordered pair classified directly.
inline tricomm::PairCounts pair_counts(const tricomm::Partition& a, const tricomm::Partition& b) {
  tricomm::PairCounts c;
  const auto n = static_cast<NodeId>(a.node_count());
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) {
      const bool in_a = a[i] == a[j], in_b = b[i] == b[j];
      if (in_a && in_b) ++c.m11;
      else if (!in_a && !in_b) ++c.m00;
      else if (in_a) ++c.m10;
      else ++c.m01;
    }
  return c;
}

inline tricomm::Partition random_partition(std::size_t n, std::size_t max_k, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, max_k - 1);
  std::vector<std::size_t> labels(n);
  for (auto& l : labels) l = pick(rng);
  return tricomm::Partition::from_labels(labels);
}

inline bool close(double a, double b, double rel, double abs_floor = 1e-12) {
  return std::abs(a - b) <= std::max(abs_floor, rel * std::max(std::abs(a), std::abs(b)));
}

}  // namespace oracle
