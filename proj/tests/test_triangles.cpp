#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tricomm/triangles.hpp"

using namespace tricomm;

namespace {

// two triangles sharing node 3, loaded from labels 1..5
WeightedGraph bowtie() { return load_edge_list("1 2 2\n2 3 3\n1 3 1\n3 4 2\n4 5 2\n3 5 2\n"); }

WeightedGraph unit_k4() {
  return WeightedGraph(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
}

WeightedGraph disjoint_pair(double w1, double w2) {
  return WeightedGraph(6, {{0, 1, w1 / 3}, {1, 2, w1 / 3}, {0, 2, w1 / 3},
                           {3, 4, w2 / 3}, {4, 5, w2 / 3}, {3, 5, w2 / 3}});
}

std::vector<std::string> labels_of(const WeightedGraph& g, const Triangle& t) {
  return {g.label(t.a), g.label(t.b), g.label(t.c)};
}

}  // namespace

TEST(EnumerateTriangles, PathHasNone) {
  EXPECT_TRUE(enumerate_triangles(WeightedGraph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}})).empty());
}

TEST(EnumerateTriangles, UnitK4) {
  const auto g = unit_k4();
  const auto t = enumerate_triangles(g);
  const auto brute = oracle::triangles(g);
  ASSERT_EQ(t.size(), 4u);
  ASSERT_EQ(brute.size(), 4u);
  for (const auto& x : t) EXPECT_DOUBLE_EQ(x.weight, 3.0);
}

TEST(EnumerateTriangles, TwoTrianglesSharingANode) {
  const auto g = bowtie();
  const auto t = enumerate_triangles(g);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(labels_of(g, t[0]), (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_EQ(labels_of(g, t[1]), (std::vector<std::string>{"3", "4", "5"}));
  EXPECT_DOUBLE_EQ(t[0].weight, 6.0);
  EXPECT_DOUBLE_EQ(t[1].weight, 6.0);
}

TEST(EnumerateTriangles, MatchesTripleScanOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = oracle::random_real_graph(5 + seed % 20, 0.1 + 0.01 * static_cast<double>(seed), seed);
    const auto t = enumerate_triangles(g);
    const auto brute = oracle::triangles(g);
    ASSERT_EQ(t.size(), brute.size()) << "seed " << seed;
    for (std::size_t i = 0; i < t.size(); ++i) {
      EXPECT_EQ(t[i].a, brute[i].a);
      EXPECT_EQ(t[i].b, brute[i].b);
      EXPECT_EQ(t[i].c, brute[i].c);
      EXPECT_NEAR(t[i].weight, brute[i].w, 1e-12);
    }
  }
}

TEST(OverlapDegree, Examples) {
  const auto single = enumerate_triangles(WeightedGraph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}));
  EXPECT_EQ(overlap_degree(single, 0), 0u);

  const auto bow = enumerate_triangles(bowtie());
  EXPECT_EQ(overlap_degree(bow, 0), 1u);
  EXPECT_EQ(overlap_degree(bow, 1), 1u);
  EXPECT_THROW(overlap_degree(bow, 2), std::out_of_range);

  const auto k4 = enumerate_triangles(unit_k4());
  for (std::size_t l = 0; l < k4.size(); ++l) EXPECT_EQ(overlap_degree(k4, l), 3u);
}

TEST(OverlapDegree, BatchMatchesPairwiseScan) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = oracle::random_int_graph(8 + seed % 15, 0.45, seed);
    const auto t = enumerate_triangles(g);
    const auto batch = overlap_degrees(t);
    const auto brute = oracle::overlaps(oracle::triangles(g));
    ASSERT_EQ(batch, brute) << "seed " << seed;
    for (std::size_t l = 0; l < t.size(); ++l) EXPECT_EQ(overlap_degree(t, l), brute[l]);
  }
}

TEST(EvalScore, Fixtures) {
  EXPECT_EQ(eval_score(7, 4), 1.75);
  EXPECT_EQ(eval_score(7, 6), 7.0 / 6.0);
  EXPECT_EQ(eval_score(8, 8), 1.0);
  EXPECT_EQ(eval_score(7, 0), 7.0);
  EXPECT_THROW(eval_score(0, 1), std::invalid_argument);
  EXPECT_THROW(eval_score(-1, 1), std::invalid_argument);
}

TEST(EvalScore, HomogeneousInWeight) {
  for (double t : {0.5, 1.0, 7.0, 13.25})
    for (std::size_t lambda : {0u, 1u, 4u, 9u})
      for (double k : {0.25, 2.0, 10.0})
        EXPECT_NEAR(eval_score(k * t, lambda), k * eval_score(t, lambda), 1e-12 * k * t);
}

TEST(PackGreedyEval, Examples) {
  const auto empty = pack_greedy_eval(WeightedGraph(4, {{0, 1, 1}, {1, 2, 1}}));
  EXPECT_TRUE(empty.selected.empty());
  EXPECT_EQ(empty.value, 0.0);

  const auto g = bowtie();
  const auto p = pack_greedy_eval(g);
  ASSERT_EQ(p.selected.size(), 1u);
  EXPECT_EQ(labels_of(g, p.selected[0]), (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_DOUBLE_EQ(p.value, 6.0);

  const auto pair = disjoint_pair(3, 3);
  const auto both = pack_greedy_eval(pair);
  EXPECT_EQ(both.selected.size(), 2u);
  EXPECT_DOUBLE_EQ(both.value, 6.0);
  EXPECT_DOUBLE_EQ(both.value, pack_exact(pair).value);
}

TEST(PackGreedyWeight, Examples) {
  EXPECT_EQ(pack_greedy_weight(WeightedGraph(3, {{0, 1, 1}})).value, 0.0);
  const auto pair = pack_greedy_weight(disjoint_pair(9, 6));
  EXPECT_EQ(pair.selected.size(), 2u);
  EXPECT_DOUBLE_EQ(pair.value, 15.0);
  const auto k4 = pack_greedy_weight(unit_k4());
  EXPECT_EQ(k4.selected.size(), 1u);
  EXPECT_DOUBLE_EQ(k4.value, 3.0);
}

TEST(PackGreedyEval, PrefersLowOverlap) {
  // centre triangle (0,1,2) of weight 9 touches three outer triangles of
  // weight 6 each; E ranks the outer ones first and wins 18 against 9
  const WeightedGraph g(9, {{0, 1, 3}, {1, 2, 3}, {0, 2, 3},
                            {0, 3, 2}, {3, 4, 2}, {0, 4, 2},
                            {1, 5, 2}, {5, 6, 2}, {1, 6, 2},
                            {2, 7, 2}, {7, 8, 2}, {2, 8, 2}});
  EXPECT_DOUBLE_EQ(pack_greedy_weight(g).value, 9.0);
  EXPECT_DOUBLE_EQ(pack_greedy_eval(g).value, 18.0);
  EXPECT_DOUBLE_EQ(pack_exact(g).value, 18.0);
}

TEST(PackExact, Examples) {
  EXPECT_EQ(pack_exact(WeightedGraph(3, {{0, 1, 1}})).value, 0.0);
  EXPECT_DOUBLE_EQ(pack_exact(bowtie()).value, 6.0);
  EXPECT_DOUBLE_EQ(pack_exact(disjoint_pair(9, 6)).value, 15.0);
}

TEST(PackExact, RefusesOverBudget) {
  EXPECT_THROW(pack_exact(WeightedGraph(31, {})), BudgetExceeded);
  const auto dense = oracle::random_int_graph(12, 1.0, 1);  // K12: 220 triangles
  EXPECT_THROW(pack_exact(dense), BudgetExceeded);
  EXPECT_NO_THROW(pack_exact(dense, {300, 30}));
}

TEST(Packing, ValidAndBoundedByExhaustiveOptimum) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const auto g = oracle::random_int_graph(6 + seed % 7, 0.5, seed);
    const auto eval = pack_greedy_eval(g);
    const auto weight = pack_greedy_weight(g);
    const auto exact = pack_exact(g, {1000, 30});
    EXPECT_EQ(oracle::validate_packing(g, eval), "") << "seed " << seed;
    EXPECT_EQ(oracle::validate_packing(g, weight), "") << "seed " << seed;
    const auto best = oracle::best_packing_value(g);
    EXPECT_NEAR(exact.value, best, 1e-9) << "seed " << seed;
    EXPECT_LE(eval.value, exact.value + 1e-9);
    EXPECT_LE(weight.value, exact.value + 1e-9);
    // exact result is a valid packing except possibly for maximality, which a
    // maximum-weight packing satisfies anyway since weights are positive
    EXPECT_EQ(oracle::validate_packing(g, exact), "") << "seed " << seed;
  }
}

TEST(Packing, ValidatorCatchesBrokenPackings) {
  const auto g = bowtie();
  auto p = pack_greedy_eval(g);
  auto overlap = p;
  overlap.selected.push_back(enumerate_triangles(g)[1]);
  overlap.value += 6;
  EXPECT_NE(oracle::validate_packing(g, overlap), "");
  EXPECT_NE(oracle::validate_packing(g, detail::make_packing(g.node_count(), {})), "");
}

TEST(Packing, Deterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = oracle::random_int_graph(25, 0.3, seed, 1, 2);
    const auto a = pack_greedy_eval(g), b = pack_greedy_eval(g);
    EXPECT_EQ(a.selected, b.selected);
    EXPECT_EQ(a.node_assignment, b.node_assignment);
  }
}

TEST(Packing, UniformScalingKeepsEvalSelection) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = oracle::random_int_graph(20, 0.35, seed);
    std::vector<Edge> scaled;
    for (auto e : g.edges()) scaled.push_back({e.u, e.v, e.w * 4});
    const auto a = pack_greedy_eval(g);
    const auto b = pack_greedy_eval(WeightedGraph(g.node_count(), scaled));
    ASSERT_EQ(a.selected.size(), b.selected.size());
    for (std::size_t i = 0; i < a.selected.size(); ++i) {
      EXPECT_EQ(a.selected[i].a, b.selected[i].a);
      EXPECT_EQ(a.selected[i].b, b.selected[i].b);
      EXPECT_EQ(a.selected[i].c, b.selected[i].c);
    }
  }
}

TEST(PackingJson, RoundTrip) {
  const auto g = oracle::random_int_graph(15, 0.4, 3);
  const auto p = pack_greedy_eval(g);
  const auto j = packing_to_json(p);
  EXPECT_EQ(j.at("triangles").size(), p.selected.size());
  const auto back = packing_from_json(j, g);
  EXPECT_EQ(back.selected, p.selected);
  EXPECT_DOUBLE_EQ(back.value, p.value);
}
