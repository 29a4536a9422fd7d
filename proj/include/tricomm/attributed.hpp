#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tricomm/graph.hpp"

namespace tricomm {

enum class EdgeType { kRetweet, kMention };

inline std::string_view to_string(EdgeType t) { return t == EdgeType::kRetweet ? "retweet" : "mention"; }

inline EdgeType parse_edge_type(std::string_view s) {
  if (s == "retweet") return EdgeType::kRetweet;
  if (s == "mention") return EdgeType::kMention;
  throw std::invalid_argument("unknown edge type '" + std::string(s) + "' (expected retweet or mention)");
}

/// ISO-8601 calendar date.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  /// Accepts "YYYY-MM-DD", optionally followed by a "T..." time part which is ignored.
  static Date parse(std::string_view s) {
    if (auto t = s.find('T'); t != std::string_view::npos) s = s.substr(0, t);
    Date d;
    auto field = [&](std::string_view part, int& out) {
      auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
      return ec == std::errc{} && p == part.data() + part.size();
    };
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !field(s.substr(0, 4), d.year) ||
        !field(s.substr(5, 2), d.month) || !field(s.substr(8, 2), d.day) || !d.valid())
      throw std::invalid_argument("invalid ISO-8601 date '" + std::string(s) + "'");
    return d;
  }

  bool valid() const {
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12 || day < 1) return false;
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return day <= days[month - 1] + (month == 2 && leap ? 1 : 0);
  }

  std::string str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
  }
};

struct NodeAttributes {
  std::string id;  // external id as written in the dataset
  std::string label;
  std::uint64_t followers = 0;
  std::uint64_t tweet_count = 0;
  bool is_reporter = false;
};

struct AttributedEdge {
  NodeId source;
  NodeId target;
  EdgeType type;
  Weight weight;
};

struct TweetRecord {
  NodeId author;
  std::string theme;
  std::string media;
  Date date;
  /// Index of the original tweet when this record is a retweet.
  std::optional<std::size_t> retweet_of;
};

struct AttributedDataset {
  std::vector<NodeAttributes> nodes;
  std::vector<AttributedEdge> edges;
  std::vector<TweetRecord> records;
};

namespace detail {

inline std::string id_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw std::invalid_argument("node ids must be strings or integers");
}

}  // namespace detail

/**
 * Parses the attributed-graph format:
 *   {"nodes":   [{"id", "label", "followers", "tweets", "reporter"}],
 *    "edges":   [{"source", "target", "type": "retweet"|"mention", "weight"}],
 *    "records": [{"author", "theme", "media", "date", "retweet_of"?}]}
 * Edge endpoints and record authors refer to node ids. Repeated (pair, type)
 * edges are collapsed by summing their weights. When records are present,
 * each node's tweet count is the number of records it authored.
 */
inline AttributedDataset dataset_from_json(const nlohmann::json& j) {
  AttributedDataset ds;
  std::unordered_map<std::string, NodeId> index;
  for (const auto& node : j.at("nodes")) {
    NodeAttributes a;
    a.id = detail::id_string(node.at("id"));
    a.label = node.value("label", a.id);
    a.followers = node.value("followers", std::uint64_t{0});
    a.tweet_count = node.value("tweets", std::uint64_t{0});
    a.is_reporter = node.value("reporter", false);
    if (!index.emplace(a.id, static_cast<NodeId>(ds.nodes.size())).second)
      throw std::invalid_argument("duplicate node id '" + a.id + "'");
    ds.nodes.push_back(std::move(a));
  }
  auto lookup = [&](const nlohmann::json& v) {
    auto it = index.find(detail::id_string(v));
    if (it == index.end()) throw std::invalid_argument("unknown node id '" + detail::id_string(v) + "'");
    return it->second;
  };

  std::map<std::tuple<NodeId, NodeId, EdgeType>, std::size_t> slot;
  for (const auto& e : j.value("edges", nlohmann::json::array())) {
    NodeId s = lookup(e.at("source")), t = lookup(e.at("target"));
    if (s == t) throw std::invalid_argument("self-loop on node '" + ds.nodes[s].id + "'");
    if (s > t) std::swap(s, t);
    const auto type = parse_edge_type(e.at("type").get<std::string>());
    const auto w = e.value("weight", 1.0);
    if (!(w > 0.0)) throw std::invalid_argument("edge weights must be positive");
    auto [it, fresh] = slot.emplace(std::make_tuple(s, t, type), ds.edges.size());
    if (fresh) {
      ds.edges.push_back({s, t, type, w});
    } else {
      ds.edges[it->second].weight += w;
    }
  }

  if (j.contains("records")) {
    for (const auto& r : j.at("records")) {
      TweetRecord rec;
      rec.author = lookup(r.at("author"));
      rec.theme = r.value("theme", "");
      rec.media = r.value("media", "");
      rec.date = Date::parse(r.at("date").get<std::string>());
      if (r.contains("retweet_of") && !r.at("retweet_of").is_null())
        rec.retweet_of = r.at("retweet_of").get<std::size_t>();
      ds.records.push_back(std::move(rec));
    }
    for (const auto& rec : ds.records) {
      if (rec.retweet_of && *rec.retweet_of >= ds.records.size())
        throw std::invalid_argument("retweet_of points past the record list");
    }
    for (auto& n : ds.nodes) n.tweet_count = 0;
    for (const auto& rec : ds.records) ++ds.nodes[rec.author].tweet_count;
  }
  return ds;
}

inline nlohmann::json dataset_to_json(const AttributedDataset& ds) {
  auto nodes = nlohmann::json::array();
  for (const auto& n : ds.nodes) {
    nodes.push_back({{"id", n.id},
                     {"label", n.label},
                     {"followers", n.followers},
                     {"tweets", n.tweet_count},
                     {"reporter", n.is_reporter}});
  }
  auto edges = nlohmann::json::array();
  for (const auto& e : ds.edges) {
    edges.push_back({{"source", ds.nodes[e.source].id},
                     {"target", ds.nodes[e.target].id},
                     {"type", to_string(e.type)},
                     {"weight", e.weight}});
  }
  auto records = nlohmann::json::array();
  for (const auto& r : ds.records) {
    nlohmann::json item{{"author", ds.nodes[r.author].id},
                        {"theme", r.theme},
                        {"media", r.media},
                        {"date", r.date.str()}};
    if (r.retweet_of) item["retweet_of"] = *r.retweet_of;
    records.push_back(std::move(item));
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"records", std::move(records)}};
}

/// Graph over all dataset nodes built from one edge type, or from both with
/// weights of the two types summed per pair. Labels are the dataset ids.
inline WeightedGraph select_edges(const AttributedDataset& ds, std::optional<EdgeType> type) {
  std::map<std::pair<NodeId, NodeId>, Weight> merged;
  for (const auto& e : ds.edges) {
    if (type && e.type != *type) continue;
    merged[{e.source, e.target}] += e.weight;
  }
  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto& [pair, w] : merged) edges.push_back({pair.first, pair.second, w});
  std::vector<std::string> labels;
  labels.reserve(ds.nodes.size());
  for (const auto& n : ds.nodes) labels.push_back(n.id);
  return WeightedGraph(ds.nodes.size(), std::move(edges), std::move(labels));
}

struct RecordFilter {
  std::optional<std::set<std::string>> themes;
  std::optional<std::set<std::string>> medias;
  std::optional<Date> date_from;  // inclusive
  std::optional<Date> date_to;    // inclusive

  bool empty() const { return !themes && !medias && !date_from && !date_to; }
};

/**
 * Records matching every supplied predicate. Theme and media are judged on
 * the initial tweet only: a retweet is kept whenever the tweet it retweets
 * passes them, whatever its own theme or media. Dates apply to each record.
 * retweet_of indices are rewritten to the filtered list.
 */
inline std::vector<TweetRecord> filter_records(const std::vector<TweetRecord>& records, const RecordFilter& f) {
  auto initial = [&](std::size_t i) {
    std::size_t hops = 0;
    while (records[i].retweet_of && hops++ <= records.size()) i = *records[i].retweet_of;
    return i;
  };
  std::vector<std::optional<std::size_t>> new_index(records.size());
  std::vector<TweetRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto& origin = records[initial(i)];
    if (f.themes && !f.themes->contains(origin.theme)) continue;
    if (f.medias && !f.medias->contains(origin.media)) continue;
    if (f.date_from && r.date < *f.date_from) continue;
    if (f.date_to && *f.date_to < r.date) continue;
    new_index[i] = out.size();
    out.push_back(r);
  }
  for (auto& r : out) {
    if (r.retweet_of) r.retweet_of = new_index[*r.retweet_of];
  }
  return out;
}

}  // namespace tricomm
