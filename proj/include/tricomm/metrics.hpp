#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "tricomm/graph.hpp"
#include "tricomm/partition.hpp"

namespace tricomm {

enum class ModularityNormalization {
  /// 2m with m the unordered edge total: the usual weighted modularity.
  kStandard,
  /// 2M with M summed over ordered pairs (i.e. M = 2m), as the formula is
  /// sometimes printed. Only useful for side-by-side comparison output.
  kOrderedPairs,
};

/**
 * Weighted modularity, computed per community as
 *   Σ_c [ 2·in_c / 2M - (tot_c / 2M)^2 ]
 * where in_c is the internal edge weight, tot_c the summed weighted degree,
 * and 2M the normalizer chosen by `norm`.
 */
inline double modularity(const WeightedGraph& g, const Partition& p,
                         ModularityNormalization norm = ModularityNormalization::kStandard) {
  if (p.node_count() != g.node_count())
    throw std::invalid_argument("partition does not cover the graph");
  const double m = g.total_weight();
  if (!(m > 0.0)) throw std::domain_error("modularity is undefined for a graph without edge weight");
  const double two_m = norm == ModularityNormalization::kStandard ? 2.0 * m : 4.0 * m;

  std::vector<double> in(p.community_count(), 0.0), tot(p.community_count(), 0.0);
  for (const auto& e : g.edges()) {
    if (p[e.u] == p[e.v]) in[p[e.u]] += e.w;
  }
  for (NodeId n = 0; n < g.node_count(); ++n) tot[p[n]] += g.weighted_degree(n);
  double q = 0.0;
  for (std::size_t c = 0; c < in.size(); ++c) {
    const double share = tot[c] / two_m;
    q += 2.0 * in[c] / two_m - share * share;
  }
  return q;
}

struct PairCounts {
  std::uint64_t m11 = 0;  // together in both
  std::uint64_t m00 = 0;  // apart in both
  std::uint64_t m10 = 0;  // together in the first only
  std::uint64_t m01 = 0;  // together in the second only

  std::uint64_t total() const noexcept { return m11 + m00 + m10 + m01; }
  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

/// Co-membership counts over all unordered node pairs, from the contingency
/// table of the two partitions.
inline PairCounts pair_counts(const Partition& p1, const Partition& p2) {
  if (p1.node_count() != p2.node_count()) throw std::invalid_argument("partitions differ in node count");
  auto pairs = [](std::uint64_t x) -> std::uint64_t { return x < 2 ? 0 : x * (x - 1) / 2; };
  std::unordered_map<std::uint64_t, std::uint64_t> cells;
  std::vector<std::uint64_t> rows(p1.community_count(), 0), cols(p2.community_count(), 0);
  for (NodeId n = 0; n < p1.node_count(); ++n) {
    ++cells[(static_cast<std::uint64_t>(p1[n]) << 32) | p2[n]];
    ++rows[p1[n]];
    ++cols[p2[n]];
  }
  std::uint64_t both = 0, first = 0, second = 0;
  for (const auto& [_, count] : cells) both += pairs(count);
  for (auto r : rows) first += pairs(r);
  for (auto c : cols) second += pairs(c);

  PairCounts out;
  out.m11 = both;
  out.m10 = first - both;
  out.m01 = second - both;
  out.m00 = pairs(p1.node_count()) - out.m11 - out.m10 - out.m01;
  return out;
}

inline double rand_index(const Partition& p1, const Partition& p2) {
  if (p1.node_count() < 2) throw std::invalid_argument("rand index needs at least two nodes");
  const auto c = pair_counts(p1, p2);
  return static_cast<double>(c.m11 + c.m00) / static_cast<double>(c.total());
}

struct CountSummary {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

inline CountSummary community_count_summary(const std::vector<Partition>& runs) {
  if (runs.empty()) throw std::invalid_argument("no runs to summarize");
  double sum = 0.0;
  for (const auto& p : runs) sum += static_cast<double>(p.community_count());
  const double mean = sum / static_cast<double>(runs.size());
  double sq = 0.0;
  for (const auto& p : runs) {
    const double d = static_cast<double>(p.community_count()) - mean;
    sq += d * d;
  }
  return {mean, std::sqrt(sq / static_cast<double>(runs.size()))};
}

struct MetricsReport {
  std::optional<double> modularity;
  std::optional<double> rand_index;
  std::size_t k = 0;
  std::int64_t elapsed_ms = 0;
};

/// Modularity is null when undefined (no edge weight); RI is null without a reference partition.
inline MetricsReport make_report(const WeightedGraph* g, const Partition& p, const Partition* truth,
                                 std::int64_t elapsed_ms) {
  MetricsReport r;
  r.k = p.community_count();
  r.elapsed_ms = elapsed_ms;
  if (g && g->total_weight() > 0.0) r.modularity = modularity(*g, p);
  if (truth && p.node_count() >= 2) r.rand_index = rand_index(p, *truth);
  return r;
}

/// {"modularity": float|null, "rand_index": float|null, "k": int, "elapsed_ms": int}
inline nlohmann::json report_to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["modularity"] = r.modularity ? nlohmann::json(*r.modularity) : nlohmann::json(nullptr);
  j["rand_index"] = r.rand_index ? nlohmann::json(*r.rand_index) : nlohmann::json(nullptr);
  j["k"] = r.k;
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

}  // namespace tricomm
