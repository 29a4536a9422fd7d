#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tricomm/graph.hpp"
#include "tricomm/partition.hpp"
#include "tricomm/random.hpp"

namespace tricomm {

/// Planted-partition instance description. mu_t is the expected fraction of
/// a node's edges leaving its community, mu_w the expected fraction of its
/// strength carried by those edges.
struct GenSpec {
  std::size_t n = 0;
  std::vector<std::size_t> community_sizes;
  double avg_degree = 20.0;
  double mu_t = 0.1;
  double mu_w = 0.1;
  double weight_scale = 1.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (community_sizes.empty()) throw std::invalid_argument("no communities requested");
    const auto total = std::accumulate(community_sizes.begin(), community_sizes.end(), std::size_t{0});
    if (total != n)
      throw std::invalid_argument("community sizes sum to " + std::to_string(total) + ", expected n = " +
                                  std::to_string(n));
    for (auto s : community_sizes)
      if (s < 3) throw std::invalid_argument("community size " + std::to_string(s) + " is below 3");
    if (!(mu_t > 0.0 && mu_t < 1.0)) throw std::invalid_argument("mu_t must lie strictly inside (0, 1)");
    if (!(mu_w > 0.0 && mu_w < 1.0)) throw std::invalid_argument("mu_w must lie strictly inside (0, 1)");
    if (!(avg_degree > 0.0)) throw std::invalid_argument("avg_degree must be positive");
    if (!(weight_scale > 0.0)) throw std::invalid_argument("weight_scale must be positive");
  }
};

inline std::vector<std::size_t> equal_sizes(std::size_t k, std::size_t size) {
  return std::vector<std::size_t>(k, size);
}

/// Community sizes summing to n, drawn from p(s) ∝ 1/s on [lo, hi]. The last
/// draws are clipped so every size stays within the bounds.
inline std::vector<std::size_t> powerlaw_sizes(std::size_t n, std::size_t lo, std::size_t hi,
                                               std::uint64_t seed) {
  if (lo < 3 || hi < 2 * lo || n < lo) throw std::invalid_argument("invalid size bounds");
  Rng rng(seed);
  std::vector<std::size_t> sizes;
  std::size_t remaining = n;
  const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
  while (remaining > 0) {
    auto s = static_cast<std::size_t>(std::floor(static_cast<double>(lo) * std::pow(ratio, rng.unit())));
    s = std::clamp(s, lo, hi);
    if (remaining - std::min(s, remaining) < lo) s = remaining <= hi ? remaining : remaining - lo;
    sizes.push_back(s);
    remaining -= s;
  }
  return sizes;
}

class InfeasibleSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GeneratedInstance {
  WeightedGraph graph;
  Partition ground_truth;
};

/**
 * Planted partition with mixing control.
 *
 * Community c of size s receives round(s·d·(1-mu_t)/2) internal edges drawn
 * uniformly without repetition among its pairs; round(n·d·mu_t/2) external
 * edges join a uniform node to a uniform node of another community. Degrees
 * are therefore binomial around their targets. Internal weights are
 * U[0.5,1.5]·scale·(1-mu_w)/(1-mu_t) and external ones
 * U[0.5,1.5]·scale·mu_w/mu_t, which puts the expected external strength
 * fraction of a node at mu_w. Node ids are a random permutation of the
 * community blocks.
 */
inline GeneratedInstance generate_planted(const GenSpec& spec) {
  spec.validate();
  if (spec.community_sizes.size() < 2) throw InfeasibleSpec("external edges need at least two communities");
  Rng rng(spec.seed);
  const auto k = spec.community_sizes.size();
  std::vector<std::size_t> start(k + 1, 0);
  for (std::size_t c = 0; c < k; ++c) start[c + 1] = start[c] + spec.community_sizes[c];
  std::vector<std::uint32_t> block(spec.n);
  for (std::size_t c = 0; c < k; ++c)
    for (auto i = start[c]; i < start[c + 1]; ++i) block[i] = static_cast<std::uint32_t>(c);

  const double w_in = spec.weight_scale * (1.0 - spec.mu_w) / (1.0 - spec.mu_t);
  const double w_out = spec.weight_scale * spec.mu_w / spec.mu_t;
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> taken;
  auto key = [](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };

  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t s = spec.community_sizes[c];
    const std::size_t pairs = s * (s - 1) / 2;
    const auto target = static_cast<std::size_t>(
        std::llround(static_cast<double>(s) * spec.avg_degree * (1.0 - spec.mu_t) / 2.0));
    if (target > pairs)
      throw InfeasibleSpec("community of size " + std::to_string(s) + " cannot hold " +
                           std::to_string(target) + " internal edges");
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    if (2 * target > pairs) {
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j) chosen.emplace_back(start[c] + i, start[c] + j);
      rng.shuffle(chosen);
      chosen.resize(target);
    } else {
      while (chosen.size() < target) {
        const auto a = start[c] + rng.below(s), b = start[c] + rng.below(s);
        if (a == b || !taken.insert(key(a, b)).second) continue;
        chosen.emplace_back(a, b);
      }
    }
    for (auto [a, b] : chosen) {
      taken.insert(key(a, b));
      edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), rng.uniform(0.5, 1.5) * w_in});
    }
  }

  std::size_t cross_pairs = 0;
  for (auto s : spec.community_sizes) cross_pairs += s * (spec.n - s);
  cross_pairs /= 2;
  const auto external = static_cast<std::size_t>(
      std::llround(static_cast<double>(spec.n) * spec.avg_degree * spec.mu_t / 2.0));
  if (2 * external > cross_pairs)
    throw InfeasibleSpec("too many external edges requested for the available community pairs");
  for (std::size_t placed = 0; placed < external;) {
    const auto a = rng.below(spec.n);
    const auto c = block[a];
    const auto size = spec.community_sizes[c];
    auto b = rng.below(spec.n - size);
    if (b >= start[c]) b += size;
    if (!taken.insert(key(a, b)).second) continue;
    edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), rng.uniform(0.5, 1.5) * w_out});
    ++placed;
  }

  std::vector<NodeId> perm(spec.n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  for (auto& e : edges) {
    e.u = perm[e.u];
    e.v = perm[e.v];
  }
  std::vector<std::uint32_t> truth(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) truth[perm[i]] = block[i];
  return {WeightedGraph(spec.n, std::move(edges)), Partition::from_labels(truth)};
}

namespace presets {

/// 1000 nodes in 25 communities of 40, mean degree 20.
inline GenSpec recovery(double mu_t, double mu_w, std::uint64_t seed) {
  return {1000, equal_sizes(25, 40), 20.0, mu_t, mu_w, 1.0, seed};
}

/// 1000 nodes, community sizes in [20, 100], mean degree 20.
inline GenSpec small(double mu_t, double mu_w, std::uint64_t seed) {
  return {1000, powerlaw_sizes(1000, 20, 100, seed), 20.0, mu_t, mu_w, 1.0, seed};
}

/// 5000 nodes, community sizes in [20, 500], about 47,600 edges.
inline GenSpec large(double mu_t, double mu_w, std::uint64_t seed) {
  return {5000, powerlaw_sizes(5000, 20, 500, seed), 2.0 * 47600.0 / 5000.0, mu_t, mu_w, 1.0, seed};
}

}  // namespace presets

/**
 * GenSpec from JSON. Either "community_sizes": [..] or "communities" plus
 * "community_size"; "preset": "recovery" | "small" | "large" fills
 * everything except mu_t, mu_w and seed.
 */
inline GenSpec genspec_from_json(const nlohmann::json& j) {
  const double mu_t = j.value("mu_t", 0.1);
  const double mu_w = j.value("mu_w", mu_t);
  const auto seed = j.value("seed", std::uint64_t{1});
  if (j.contains("preset")) {
    const auto name = j.at("preset").get<std::string>();
    if (name == "recovery") return presets::recovery(mu_t, mu_w, seed);
    if (name == "small") return presets::small(mu_t, mu_w, seed);
    if (name == "large") return presets::large(mu_t, mu_w, seed);
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  GenSpec s;
  if (j.contains("community_sizes")) {
    s.community_sizes = j.at("community_sizes").get<std::vector<std::size_t>>();
  } else {
    s.community_sizes = equal_sizes(j.at("communities").get<std::size_t>(), j.at("community_size").get<std::size_t>());
  }
  s.n = j.value("n", std::accumulate(s.community_sizes.begin(), s.community_sizes.end(), std::size_t{0}));
  s.avg_degree = j.value("avg_degree", s.avg_degree);
  s.mu_t = mu_t;
  s.mu_w = mu_w;
  s.weight_scale = j.value("weight_scale", 1.0);
  s.seed = seed;
  return s;
}

inline nlohmann::json genspec_to_json(const GenSpec& s) {
  return {{"n", s.n},          {"community_sizes", s.community_sizes}, {"avg_degree", s.avg_degree},
          {"mu_t", s.mu_t},    {"mu_w", s.mu_w},                       {"weight_scale", s.weight_scale},
          {"seed", s.seed}};
}

struct LfrInstance {
  WeightedGraph graph;
  Partition ground_truth;
};

/**
 * Reads an LFR-style pair of files. The community file ("node community"
 * per line) defines the node set; network lines are "u v w" (or "u v" for
 * unweighted output) and may list each edge in both directions, in which case
 * the weights must agree.
 */
inline LfrInstance read_lfr(std::string_view network_text, std::string_view community_text) {
  std::vector<std::string> seen;
  std::vector<std::string> community_of;
  std::unordered_map<std::string, std::size_t> row_of;
  {
    std::istringstream in{std::string(community_text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto body = detail::trim(line);
      if (body.empty() || body.front() == '#') continue;
      const auto tokens = detail::split_ws(body);
      if (tokens.size() != 2) throw ParseError(line_no, "community file: expected \"node community\"");
      std::string node(tokens[0]);
      if (!row_of.emplace(node, seen.size()).second)
        throw ParseError(line_no, "community file: node '" + node + "' listed twice");
      seen.push_back(node);
      community_of.emplace_back(tokens[1]);
    }
  }
  std::unordered_map<std::string, NodeId> index;
  auto labels = detail::densify_labels(seen, index);

  std::unordered_map<std::uint64_t, Weight> weights;
  std::vector<std::uint64_t> order;
  {
    std::istringstream in{std::string(network_text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto body = detail::trim(line);
      if (body.empty() || body.front() == '#') continue;
      const auto tokens = detail::split_ws(body);
      if (tokens.size() != 2 && tokens.size() != 3) throw ParseError(line_no, "network file: expected \"u v w\"");
      double w = 1.0;
      if (tokens.size() == 3 && (!detail::parse_double(tokens[2], w) || !(w > 0.0) || !std::isfinite(w)))
        throw ParseError(line_no, "network file: invalid weight");
      auto find = [&](std::string_view tok) {
        auto it = index.find(std::string(tok));
        if (it == index.end())
          throw ParseError(line_no, "node '" + std::string(tok) + "' is missing from the community file");
        return it->second;
      };
      NodeId a = find(tokens[0]), b = find(tokens[1]);
      if (a == b) throw ParseError(line_no, "self-loop");
      if (a > b) std::swap(a, b);
      const auto key = (static_cast<std::uint64_t>(a) << 32) | b;
      auto [it, fresh] = weights.emplace(key, w);
      if (fresh) {
        order.push_back(key);
      } else if (it->second != w) {
        throw ParseError(line_no, "conflicting weights for a repeated edge");
      }
    }
  }
  std::vector<Edge> edges;
  edges.reserve(order.size());
  for (auto key : order)
    edges.push_back({static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu), weights[key]});

  std::vector<std::string> truth(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) truth[i] = community_of[row_of.at(labels[i])];
  const auto n = labels.size();
  return {WeightedGraph(n, std::move(edges), std::move(labels)), Partition::from_labels(truth)};
}

}  // namespace tricomm
