#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "tricomm/graph.hpp"

namespace tricomm {

using CommunityId = std::uint32_t;

/// Node -> community assignment with ids densified to 0..k-1 in order of
/// first appearance, so two partitions of the same grouping compare equal.
class Partition {
 public:
  Partition() = default;

  /// Accepts arbitrary labels and densifies them.
  template <typename Label>
  static Partition from_labels(const std::vector<Label>& labels) {
    Partition p;
    std::unordered_map<Label, CommunityId> dense;
    p.assignment_.reserve(labels.size());
    for (const auto& l : labels) {
      auto [it, fresh] = dense.emplace(l, static_cast<CommunityId>(dense.size()));
      p.assignment_.push_back(it->second);
    }
    p.k_ = dense.size();
    return p;
  }

  static Partition singletons(std::size_t n) {
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = i;
    return from_labels(labels);
  }

  static Partition single_community(std::size_t n) {
    return from_labels(std::vector<int>(n, 0));
  }

  std::size_t node_count() const noexcept { return assignment_.size(); }
  std::size_t community_count() const noexcept { return k_; }
  CommunityId operator[](NodeId n) const { return assignment_.at(n); }
  const std::vector<CommunityId>& assignment() const noexcept { return assignment_; }

  std::vector<std::vector<NodeId>> members() const {
    std::vector<std::vector<NodeId>> out(k_);
    for (NodeId n = 0; n < assignment_.size(); ++n) out[assignment_[n]].push_back(n);
    return out;
  }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out(k_, 0);
    for (auto c : assignment_) ++out[c];
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<CommunityId> assignment_;
  std::size_t k_ = 0;
};

/// {"k": int, "assignment": [community per node]}
inline nlohmann::json partition_to_json(const Partition& p) {
  return {{"k", p.community_count()}, {"assignment", p.assignment()}};
}

inline Partition partition_from_json(const nlohmann::json& j) {
  auto p = Partition::from_labels(j.at("assignment").get<std::vector<std::int64_t>>());
  if (j.contains("k") && j.at("k").get<std::size_t>() != p.community_count())
    throw std::invalid_argument("partition k does not match assignment");
  return p;
}

/// Two-column "node community" lines; nodes written by label, communities 0-based.
inline void write_partition_text(std::ostream& out, const Partition& p, const WeightedGraph* g = nullptr) {
  for (NodeId n = 0; n < p.node_count(); ++n) {
    out << (g ? g->label(n) : std::to_string(n)) << ' ' << p[n] << '\n';
  }
}

/**
 * Reads "node community" lines. Node tokens are resolved through the graph's
 * labels when a graph is given, otherwise they must be 0..v-1. Every node must
 * appear exactly once.
 */
inline Partition read_partition_text(std::istream& in, const WeightedGraph* g = nullptr) {
  std::unordered_map<std::string, NodeId> by_label;
  if (g) {
    for (NodeId n = 0; n < g->node_count(); ++n) by_label.emplace(g->label(n), n);
  }
  std::vector<std::pair<NodeId, std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t max_node = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tokens = detail::split_ws(body);
    if (tokens.size() != 2) throw ParseError(line_no, "expected \"node community\"");
    NodeId node = 0;
    if (g) {
      auto it = by_label.find(std::string(tokens[0]));
      if (it == by_label.end()) throw ParseError(line_no, "unknown node '" + std::string(tokens[0]) + "'");
      node = it->second;
    } else {
      std::uint64_t raw = 0;
      if (!detail::parse_uint(tokens[0], raw)) throw ParseError(line_no, "malformed node id");
      node = static_cast<NodeId>(raw);
    }
    max_node = std::max<std::size_t>(max_node, node);
    rows.emplace_back(node, std::string(tokens[1]));
  }
  const std::size_t n = g ? g->node_count() : (rows.empty() ? 0 : max_node + 1);
  std::vector<std::string> labels(n);
  std::vector<char> seen(n, 0);
  for (const auto& [node, comm] : rows) {
    if (seen[node]) throw std::invalid_argument("node listed twice in partition: " + std::to_string(node));
    seen[node] = 1;
    labels[node] = comm;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) throw std::invalid_argument("node missing from partition: " + std::to_string(i));
  }
  return Partition::from_labels(labels);
}

inline Partition read_partition_text(std::string_view text, const WeightedGraph* g = nullptr) {
  std::istringstream in{std::string(text)};
  return read_partition_text(in, g);
}

}  // namespace tricomm
