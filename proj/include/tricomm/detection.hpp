#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tricomm/graph.hpp"
#include "tricomm/partition.hpp"
#include "tricomm/random.hpp"
#include "tricomm/triangles.hpp"

namespace tricomm {

enum class SortChoice { kRandom, kByWeightedDegree, kByIntraWeight };

/// How interCompare measures the weight a community sends outside itself.
enum class ExternalWeightRule {
  /// WD - 2·IW - INW: WD counts every internal edge twice.
  kTraceConsistent,
  /// WD - IW - INW, as the formula is usually written.
  kLiteral,
};

/// How c_g walks its adjacent communities within one turn.
enum class AdjacencyScan {
  /// One sorted list per turn, compared with live IW/INW values.
  kSnapshot,
  /// Re-sort after every merge and start over.
  kRescan,
};

inline std::string_view to_string(SortChoice s) {
  switch (s) {
    case SortChoice::kRandom: return "random";
    case SortChoice::kByWeightedDegree: return "wd";
    case SortChoice::kByIntraWeight: return "iw";
  }
  return "iw";
}

inline SortChoice parse_sort_choice(std::string_view s) {
  if (s == "random") return SortChoice::kRandom;
  if (s == "wd") return SortChoice::kByWeightedDegree;
  if (s == "iw") return SortChoice::kByIntraWeight;
  throw std::invalid_argument("unknown sort choice '" + std::string(s) + "' (expected random, wd or iw)");
}

inline std::string_view to_string(AdjacencyScan s) { return s == AdjacencyScan::kRescan ? "rescan" : "snapshot"; }

inline AdjacencyScan parse_adjacency_scan(std::string_view s) {
  if (s == "snapshot") return AdjacencyScan::kSnapshot;
  if (s == "rescan") return AdjacencyScan::kRescan;
  throw std::invalid_argument("unknown adjacency scan '" + std::string(s) + "' (expected snapshot or rescan)");
}

struct DetectionConfig {
  double omega = 0.1;
  SortChoice sort_choice = SortChoice::kByIntraWeight;
  std::uint64_t seed = 0;
  ExternalWeightRule external_rule = ExternalWeightRule::kTraceConsistent;
  AdjacencyScan scan = AdjacencyScan::kSnapshot;

  void validate() const {
    if (!(omega >= 0.0 && omega <= 0.5))
      throw std::invalid_argument("omega must lie in [0, 0.5], got " + std::to_string(omega));
  }
};

/**
 * Community bookkeeping for the merge phase.
 *
 * Community ids live in the node id space: a community is named after the
 * node that founded it (the smallest node of a seed triangle, or the node
 * itself for a singleton) and keeps that id while it absorbs others.
 *
 * Alongside IW and WD per community, the state keeps the community adjacency
 * ledger: for every live community, the inter-weight INW to each adjacent
 * community. The ledger is symmetric and only holds positive entries.
 */
class MergeState {
 public:
  using Ledger = std::unordered_map<CommunityId, Weight>;

  /// Every packed triangle becomes one community, every other node a singleton.
  MergeState(const WeightedGraph& g, const PackingResult& packing) {
    const auto n = g.node_count();
    assignment_.resize(n);
    for (NodeId i = 0; i < n; ++i) assignment_[i] = i;
    std::vector<char> covered(n, 0);
    for (const auto& t : packing.selected) {
      if (t.c >= n) throw std::invalid_argument("packing references a node outside the graph");
      if (!g.has_edge(t.a, t.b) || !g.has_edge(t.a, t.c) || !g.has_edge(t.b, t.c))
        throw std::invalid_argument("packed triple is not a triangle of the graph");
      for (NodeId x : {t.a, t.b, t.c}) {
        if (covered[x]) throw std::invalid_argument("packing is not node-disjoint");
        covered[x] = 1;
        assignment_[x] = std::min({t.a, t.b, t.c});
      }
    }

    live_.assign(n, 0);
    members_.assign(n, {});
    smallest_.assign(n, 0);
    iw_.assign(n, 0.0);
    wd_.assign(n, 0.0);
    inw_.assign(n, {});
    for (NodeId i = 0; i < n; ++i) {
      const auto c = assignment_[i];
      if (!live_[c]) {
        live_[c] = 1;
        smallest_[c] = i;
        ++live_count_;
      }
      members_[c].push_back(i);
      wd_[c] += g.weighted_degree(i);
    }
    for (const auto& e : g.edges()) {
      const auto cu = assignment_[e.u], cv = assignment_[e.v];
      if (cu == cv) {
        iw_[cu] += e.w;
      } else {
        inw_[cu][cv] += e.w;
        inw_[cv][cu] += e.w;
      }
    }
  }

  std::size_t node_count() const noexcept { return assignment_.size(); }
  std::size_t live_count() const noexcept { return live_count_; }
  bool is_live(CommunityId c) const noexcept { return c < live_.size() && live_[c]; }

  /// Live community ids, ascending.
  std::vector<CommunityId> live() const {
    std::vector<CommunityId> out;
    out.reserve(live_count_);
    for (CommunityId c = 0; c < live_.size(); ++c)
      if (live_[c]) out.push_back(c);
    return out;
  }

  const std::vector<CommunityId>& assignment() const noexcept { return assignment_; }
  const std::vector<NodeId>& members(CommunityId c) const { return members_[require_live(c)]; }
  NodeId smallest_member(CommunityId c) const { return smallest_[require_live(c)]; }
  Weight iw(CommunityId c) const { return iw_[require_live(c)]; }
  Weight wd(CommunityId c) const { return wd_[require_live(c)]; }
  const Ledger& inw(CommunityId c) const { return inw_[require_live(c)]; }

  Weight inw(CommunityId c, CommunityId h) const {
    const auto& row = inw(c);
    auto it = row.find(h);
    return it == row.end() ? 0.0 : it->second;
  }

  /// h is absorbed into g: IW_g += IW_h + INW_gh, WD_g += WD_h, and h's
  /// ledger row is folded into g's.
  void merge(CommunityId g, CommunityId h) {
    require_live(g);
    require_live(h);
    if (g == h) throw std::invalid_argument("cannot merge a community with itself");

    const Weight between = inw(g, h);
    iw_[g] += iw_[h] + between;
    wd_[g] += wd_[h];

    auto& row_g = inw_[g];
    row_g.erase(h);
    for (const auto& [x, w] : inw_[h]) {
      if (x == g) continue;
      row_g[x] += w;
      auto& row_x = inw_[x];
      row_x.erase(h);
      row_x[g] += w;
    }
    Ledger{}.swap(inw_[h]);

    for (NodeId n : members_[h]) assignment_[n] = g;
    if (members_[h].size() > members_[g].size()) members_[g].swap(members_[h]);
    members_[g].insert(members_[g].end(), members_[h].begin(), members_[h].end());
    std::vector<NodeId>{}.swap(members_[h]);
    smallest_[g] = std::min(smallest_[g], smallest_[h]);

    live_[h] = 0;
    iw_[h] = wd_[h] = 0.0;
    --live_count_;
  }

 private:
  CommunityId require_live(CommunityId c) const {
    if (!is_live(c)) throw std::invalid_argument("community " + std::to_string(c) + " is not live");
    return c;
  }

  std::vector<CommunityId> assignment_;
  std::vector<char> live_;
  std::vector<std::vector<NodeId>> members_;
  std::vector<NodeId> smallest_;
  std::vector<Weight> iw_;
  std::vector<Weight> wd_;
  std::vector<Ledger> inw_;
  std::size_t live_count_ = 0;
};

inline MergeState init_state(const WeightedGraph& g, const PackingResult& packing) {
  return MergeState(g, packing);
}

inline void merge(MergeState& state, CommunityId g, CommunityId h) { state.merge(g, h); }

/// Live communities in the user's initial order. RANDOM is a seeded shuffle of
/// the smallest-member order; the other two sort decreasingly, ties by smallest member.
inline std::vector<CommunityId> sort_initial(const MergeState& state, const DetectionConfig& cfg) {
  auto order = state.live();
  auto by_smallest = [&](CommunityId x, CommunityId y) {
    return state.smallest_member(x) < state.smallest_member(y);
  };
  std::sort(order.begin(), order.end(), by_smallest);
  switch (cfg.sort_choice) {
    case SortChoice::kRandom: {
      Rng rng(cfg.seed);
      rng.shuffle(order);
      break;
    }
    case SortChoice::kByWeightedDegree:
      std::stable_sort(order.begin(), order.end(),
                       [&](CommunityId x, CommunityId y) { return state.wd(x) > state.wd(y); });
      break;
    case SortChoice::kByIntraWeight:
      std::stable_sort(order.begin(), order.end(),
                       [&](CommunityId x, CommunityId y) { return state.iw(x) > state.iw(y); });
      break;
  }
  return order;
}

/// Communities adjacent to c, by decreasing IW, ties by smallest member.
inline std::vector<CommunityId> sorted_adjacent(const MergeState& state, CommunityId c) {
  std::vector<CommunityId> out;
  const auto& row = state.inw(c);
  out.reserve(row.size());
  for (const auto& [h, w] : row)
    if (w > 0.0) out.push_back(h);
  std::sort(out.begin(), out.end(), [&](CommunityId x, CommunityId y) {
    if (state.iw(x) != state.iw(y)) return state.iw(x) > state.iw(y);
    return state.smallest_member(x) < state.smallest_member(y);
  });
  return out;
}

/// The shared inter-weight is at least the community's own intra-weight.
inline bool intra_compare(Weight inw_gh, Weight iw_c) { return inw_gh >= iw_c; }

/// The shared inter-weight is at least an Ω-fraction of what the community
/// sends to everyone else.
inline bool inter_compare(Weight inw_gh, Weight wd_c, Weight iw_c, double omega,
                          ExternalWeightRule rule = ExternalWeightRule::kTraceConsistent) {
  const Weight internal = rule == ExternalWeightRule::kTraceConsistent ? 2.0 * iw_c : iw_c;
  const Weight external = wd_c - internal - inw_gh;
  return inw_gh >= external * omega;
}

/// Merge condition for an adjacent pair: one of the two sides is dominated
/// by the other on both counts.
inline bool should_merge(const MergeState& state, CommunityId g, CommunityId h,
                         const DetectionConfig& cfg) {
  const Weight shared = state.inw(g, h);
  auto dominated = [&](CommunityId c) {
    return intra_compare(shared, state.iw(c)) &&
           inter_compare(shared, state.wd(c), state.iw(c), cfg.omega, cfg.external_rule);
  };
  return dominated(g) || dominated(h);
}

class TimeBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DetectOptions {
  /// Called after every merge with (state, absorbing id, absorbed id).
  std::function<void(const MergeState&, CommunityId, CommunityId)> on_merge;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct DetectionResult {
  Partition partition;
  MergeState state;
  PackingResult packing;
  std::size_t merges = 0;
  std::size_t passes = 0;
};

/**
 * Triangle-seeded community detection.
 *
 * Seeds communities with the greedy-E triangle packing, orders them by the
 * configured choice, then sweeps the live communities until a full pass
 * merges nothing. On its turn c_g takes its adjacent communities in
 * decreasing IW order and absorbs each one satisfying should_merge, reading
 * IW, WD and INW as they stand after earlier merges. With kRescan the list
 * is rebuilt after every merge instead. Communities absorbed earlier in the
 * pass are skipped. RANDOM keeps its initial shuffle across passes, the
 * other choices re-sort at the start of each pass.
 */
inline DetectionResult detect_full(const WeightedGraph& g, const DetectionConfig& cfg,
                                   const DetectOptions& opts = {}) {
  cfg.validate();
  auto packing = pack_greedy_eval(g);
  MergeState state(g, packing);
  auto order = sort_initial(state, cfg);

  std::size_t merges = 0, passes = 0;
  bool merged_in_pass = false;
  do {
    merged_in_pass = false;
    if (passes > 0) {
      if (cfg.sort_choice == SortChoice::kRandom) {
        std::erase_if(order, [&](CommunityId c) { return !state.is_live(c); });
      } else {
        order = sort_initial(state, cfg);
      }
    }
    ++passes;
    for (const auto cg : order) {
      if (!state.is_live(cg)) continue;
      if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
        throw TimeBudgetExceeded("community detection exceeded its time budget");
      bool rescan = true;
      while (rescan) {
        rescan = false;
        for (const auto ch : sorted_adjacent(state, cg)) {
          if (!should_merge(state, cg, ch, cfg)) continue;
          state.merge(cg, ch);
          ++merges;
          merged_in_pass = true;
          if (opts.on_merge) opts.on_merge(state, cg, ch);
          if (cfg.scan == AdjacencyScan::kRescan) {
            rescan = true;
            break;
          }
        }
      }
    }
  } while (merged_in_pass);

  auto partition = Partition::from_labels(state.assignment());
  return {std::move(partition), std::move(state), std::move(packing), merges, passes};
}

inline Partition detect(const WeightedGraph& g, const DetectionConfig& cfg = {}) {
  return detect_full(g, cfg).partition;
}

struct CommunitySummary {
  CommunityId id;  // dense partition id
  std::size_t size;
  Weight iw;
  Weight wd;
};

/// Size, IW and WD for each community of a finished run, by dense id.
inline std::vector<CommunitySummary> summarize(const DetectionResult& r) {
  std::vector<CommunitySummary> out;
  const auto members = r.partition.members();
  for (CommunityId c = 0; c < members.size(); ++c) {
    const auto root = r.state.assignment()[members[c].front()];
    out.push_back({c, members[c].size(), r.state.iw(root), r.state.wd(root)});
  }
  return out;
}

}  // namespace tricomm
