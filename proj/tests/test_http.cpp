#include <gtest/gtest.h>

#include <thread>

#include "fixtures.hpp"
#include "tricomm/http_api.hpp"

using namespace tricomm;
using nlohmann::json;

namespace {

class HttpApi : public ::testing::Test {
 protected:
  void SetUp() override {
    register_routes(server_, session_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(30, 0);
    return c;
  }

  std::pair<int, json> post(const std::string& path, const json& body) {
    auto res = client().Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res) << path;
    if (!res) return {0, {}};
    return {res->status, json::parse(res->body)};
  }

  std::pair<int, json> get(const std::string& path) {
    auto res = client().Get(path);
    EXPECT_TRUE(res) << path;
    if (!res) return {0, {}};
    return {res->status, json::parse(res->body)};
  }

  // community id of node `id` in a /detect response
  static std::size_t community_of(const json& detected, const std::string& id) {
    const auto& nodes = detected.at("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i] == id) return detected.at("partition").at("assignment")[i].get<std::size_t>();
    throw std::out_of_range(id);
  }

  httplib::Server server_;
  Session session_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace

TEST_F(HttpApi, ConflictsBeforeState) {
  EXPECT_EQ(post("/detect", json::object()).first, 409);
  EXPECT_EQ(get("/graph").first, 409);
  EXPECT_EQ(post("/filter", json::object()).first, 409);
  ASSERT_EQ(post("/load", fixture::dataset()).first, 200);
  const auto [status, body] = get("/communities");
  EXPECT_EQ(status, 409);
  EXPECT_TRUE(body.contains("error"));
  EXPECT_EQ(get("/communities/0/stats").first, 409);
}

TEST_F(HttpApi, LoadReportsSummary) {
  const auto [status, body] = post("/load", fixture::dataset());
  ASSERT_EQ(status, 200);
  EXPECT_EQ(body.at("nodes"), 15);
  EXPECT_EQ(body.at("edges"), 51);
  EXPECT_EQ(body.at("records"), 50);
  EXPECT_EQ(post("/load", json{{"nodes", {{{"id", "a"}}, {{"id", "a"}}}}}).first, 400);
  auto res = client().Post("/load", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST_F(HttpApi, RejectsBadDetectionConfig) {
  ASSERT_EQ(post("/load", fixture::dataset()).first, 200);
  EXPECT_EQ(post("/detect", {{"omega", 0.7}}).first, 400);
  EXPECT_EQ(post("/detect", {{"sort_choice", "BY_SIZE"}}).first, 400);
  EXPECT_EQ(post("/detect", {{"scan", "sideways"}}).first, 400);
  EXPECT_EQ(post("/filter", {{"edge_type", "like"}}).first, 400);
}

TEST_F(HttpApi, DetectAndCommunities) {
  ASSERT_EQ(post("/load", fixture::dataset()).first, 200);
  const auto [status, detected] = post("/detect", {{"omega", 0.1}, {"sort_choice", "wd"}, {"seed", 3}});
  ASSERT_EQ(status, 200);
  EXPECT_EQ(detected.at("config").at("sort_choice"), "wd");
  EXPECT_EQ(detected.at("config").at("scan"), "snapshot");
  EXPECT_EQ(detected.at("metrics").at("k"), 3);
  EXPECT_EQ(community_of(detected, "u0"), community_of(detected, "u9"));
  EXPECT_NE(community_of(detected, "u0"), community_of(detected, "v0"));

  const auto [cs, communities] = get("/communities");
  ASSERT_EQ(cs, 200);
  EXPECT_EQ(communities.at("k"), 3);
  std::size_t total = 0;
  for (const auto& c : communities.at("communities")) total += c.at("size").get<std::size_t>();
  EXPECT_EQ(total, 15u);
}

TEST_F(HttpApi, CommunityStats) {
  ASSERT_EQ(post("/load", fixture::dataset()).first, 200);
  const auto detected = post("/detect", json::object()).second;
  const auto u = community_of(detected, "u0"), w = community_of(detected, "w0");

  auto [status, stats] = get("/communities/" + std::to_string(u) + "/stats");
  ASSERT_EQ(status, 200);
  EXPECT_EQ(stats.at("tweet_share").at("media").at("m"), 0.88);
  EXPECT_EQ(stats.at("members"), 10);

  std::tie(status, stats) = get("/communities/" + std::to_string(u) + "/stats?theme=x");
  ASSERT_EQ(status, 200);
  EXPECT_EQ(stats.at("member_share").at("u0"), 1.0);

  std::tie(status, stats) = get("/communities/" + std::to_string(w) + "/stats?theme=x&media=m");
  ASSERT_EQ(status, 200);
  EXPECT_EQ(stats.at("tweets"), 0);
  EXPECT_TRUE(stats.at("tweet_share").at("theme").empty());
  EXPECT_TRUE(stats.at("tweet_share").at("media").empty());
  EXPECT_TRUE(stats.at("member_share").empty());

  EXPECT_EQ(get("/communities/3/stats").first, 404);
  EXPECT_EQ(get("/communities/999/stats").first, 404);
}

TEST_F(HttpApi, FilterReshapesGraph) {
  ASSERT_EQ(post("/load", fixture::dataset()).first, 200);
  const auto before = get("/graph").second;
  auto [status, summary] = post("/filter", json::object());
  ASSERT_EQ(status, 200);
  EXPECT_EQ(get("/graph").second, before);

  ASSERT_EQ(post("/detect", json::object()).first, 200);
  std::tie(status, summary) = post("/filter", {{"edge_type", "mention"}, {"min_degree", 3}});
  ASSERT_EQ(status, 200);
  EXPECT_EQ(summary.at("nodes"), 4);
  EXPECT_EQ(summary.at("edges"), 6);
  EXPECT_EQ(get("/communities").first, 409);

  const auto graph = get("/graph").second;
  EXPECT_EQ(graph.at("nodes").size(), 4u);
  EXPECT_EQ(graph.at("edges").size(), 6u);
  for (const auto& e : graph.at("edges")) EXPECT_EQ(e.at("type"), "mention");

  const auto [ds, detected] = post("/detect", json::object());
  ASSERT_EQ(ds, 200);
  EXPECT_EQ(detected.at("metrics").at("k"), 1);
}
