#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tricomm/attributed.hpp"
#include "tricomm/partition.hpp"

namespace tricomm {

/// Theme and/or media a member's tweets are measured against. A tweet
/// matches when it agrees with every field that is set.
struct Selection {
  std::optional<std::string> theme;
  std::optional<std::string> media;

  bool empty() const { return !theme && !media; }

  bool matches(const TweetRecord& r) const {
    return (!theme || r.theme == *theme) && (!media || r.media == *media);
  }
};

struct CommunityStats {
  CommunityId community = 0;
  std::size_t member_count = 0;
  std::size_t tweet_count = 0;
  /// share of the community's tweets per theme / media
  std::map<std::string, double> theme_share;
  std::map<std::string, double> media_share;
  /// fraction of members with at least one tweet per theme / media
  std::map<std::string, double> theme_coverage;
  std::map<std::string, double> media_coverage;
  /// per member with tweets: fraction of its tweets matching the selection
  std::map<NodeId, double> member_share;
};

/// Statistics of one community over `records` (authors are partition node ids).
/// A community without tweets yields empty maps.
inline CommunityStats community_stats(const Partition& p, const std::vector<TweetRecord>& records,
                                      CommunityId c, const Selection& sel = {}) {
  if (c >= p.community_count()) throw std::out_of_range("community " + std::to_string(c) + " out of range");
  CommunityStats s;
  s.community = c;
  for (auto a : p.assignment()) s.member_count += (a == c);

  std::map<std::string, std::size_t> theme_tweets, media_tweets;
  std::map<std::string, std::set<NodeId>> theme_members, media_members;
  std::map<NodeId, std::pair<std::size_t, std::size_t>> per_member;  // (matching, total)
  for (const auto& r : records) {
    if (r.author >= p.node_count()) throw std::out_of_range("record author outside the partition");
    if (p[r.author] != c) continue;
    ++s.tweet_count;
    ++theme_tweets[r.theme];
    ++media_tweets[r.media];
    theme_members[r.theme].insert(r.author);
    media_members[r.media].insert(r.author);
    auto& [hit, total] = per_member[r.author];
    ++total;
    if (sel.matches(r)) ++hit;
  }
  if (s.tweet_count == 0) return s;

  const auto tweets = static_cast<double>(s.tweet_count);
  const auto members = static_cast<double>(s.member_count);
  for (const auto& [k, v] : theme_tweets) s.theme_share[k] = static_cast<double>(v) / tweets;
  for (const auto& [k, v] : media_tweets) s.media_share[k] = static_cast<double>(v) / tweets;
  for (const auto& [k, v] : theme_members) s.theme_coverage[k] = static_cast<double>(v.size()) / members;
  for (const auto& [k, v] : media_members) s.media_coverage[k] = static_cast<double>(v.size()) / members;
  if (!sel.empty()) {
    for (const auto& [node, counts] : per_member)
      s.member_share[node] = static_cast<double>(counts.first) / static_cast<double>(counts.second);
  }
  return s;
}

/// Member keys are written through `label_of` when given, as decimal ids otherwise.
template <typename LabelFn>
nlohmann::json stats_to_json(const CommunityStats& s, LabelFn&& label_of) {
  nlohmann::json members = nlohmann::json::object();
  for (const auto& [node, share] : s.member_share) members[label_of(node)] = share;
  return {{"community", s.community},
          {"members", s.member_count},
          {"tweets", s.tweet_count},
          {"tweet_share", {{"theme", s.theme_share}, {"media", s.media_share}}},
          {"member_coverage", {{"theme", s.theme_coverage}, {"media", s.media_coverage}}},
          {"member_share", std::move(members)}};
}

inline nlohmann::json stats_to_json(const CommunityStats& s) {
  return stats_to_json(s, [](NodeId n) { return std::to_string(n); });
}

}  // namespace tricomm
