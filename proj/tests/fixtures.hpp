#pragma once

#include <string>

#include <nlohmann/json.hpp>

// Attributed dataset shared by the stats, session, HTTP and CLI tests.
//
//   u0..u9  unit-weight retweet clique, 50 tweets, 44 of them on media "m";
//           u0 writes 4 tweets, all on theme "x"
//   v0..v3  unit-weight mention clique, no tweets
//   w0      isolated, no tweets
namespace fixture {

inline nlohmann::json dataset() {
  using nlohmann::json;
  json nodes = json::array(), edges = json::array(), records = json::array();
  for (int i = 0; i < 10; ++i)
    nodes.push_back({{"id", "u" + std::to_string(i)}, {"followers", 100 * i}, {"reporter", i == 3}});
  for (int i = 0; i < 4; ++i) nodes.push_back({{"id", "v" + std::to_string(i)}});
  nodes.push_back({{"id", "w0"}});

  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j)
      edges.push_back({{"source", "u" + std::to_string(i)}, {"target", "u" + std::to_string(j)}, {"type", "retweet"}});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      edges.push_back({{"source", "v" + std::to_string(i)}, {"target", "v" + std::to_string(j)}, {"type", "mention"}});

  for (int k = 0; k < 4; ++k)
    records.push_back({{"author", "u0"}, {"theme", "x"}, {"media", "m"}, {"date", "2016-03-0" + std::to_string(k + 1)}});
  // 46 more tweets from u1..u9 (u1 writes six); the first six are on "n"
  int written = 0;
  for (int i = 1; i < 10; ++i) {
    const int count = i == 1 ? 6 : 5;
    for (int k = 0; k < count; ++k, ++written)
      records.push_back({{"author", "u" + std::to_string(i)},
                         {"theme", written % 3 == 0 ? "x" : "y"},
                         {"media", written < 6 ? "n" : "m"},
                         {"date", "2016-04-1" + std::to_string(k)}});
  }
  return {{"nodes", nodes}, {"edges", edges}, {"records", records}};
}

}  // namespace fixture
