#include <gtest/gtest.h>

#include <random>

#include "mbsp/signed_graph.hpp"
#include "oracles.hpp"

using namespace mbsp;

namespace {

SignedGraph one_negative_triangle()
{
    return SignedGraph(3, {{0, 1, Sign::Negative}, {1, 2, Sign::Positive}, {0, 2, Sign::Positive}});
}

} // namespace

TEST(SignedGraph, BuildTriangle)
{
    SignedGraph g(3, {{0, 1, Sign::Positive}, {1, 2, Sign::Positive}, {0, 2, Sign::Positive}});
    EXPECT_EQ(g.num_edges(), 3);
    EXPECT_EQ(g.num_parallel(), 0);
    EXPECT_EQ(g.pair(2, 0), PairKind::Positive);
}

TEST(SignedGraph, BuildParallelPair)
{
    SignedGraph g(2, {{0, 1, Sign::Positive}, {1, 0, Sign::Negative}});
    ASSERT_EQ(g.num_parallel(), 1);
    EXPECT_EQ(g.parallel_pairs()[0], std::make_pair(0, 1));
    EXPECT_TRUE(g.is_parallel(1, 0));
    EXPECT_EQ(g.num_positive(), 1);
    EXPECT_EQ(g.num_negative(), 1);
}

TEST(SignedGraph, RejectsLoopAndRange)
{
    EXPECT_THROW(SignedGraph(2, {{0, 0, Sign::Positive}}), std::invalid_argument);
    EXPECT_THROW(SignedGraph(2, {{0, 2, Sign::Positive}}), std::invalid_argument);
    EXPECT_THROW(SignedGraph(-1, {}), std::invalid_argument);
}

TEST(SignedGraph, DeduplicatesSameSign)
{
    SignedGraph g(3, {{0, 1, Sign::Negative}, {1, 0, Sign::Negative}, {1, 2, Sign::Positive}});
    EXPECT_EQ(g.num_edges(), 2);
    EXPECT_EQ(g.edges()[0], (SignedEdge{0, 1, Sign::Negative}));
}

TEST(SignedGraph, SwitchExamples)
{
    const auto g = one_negative_triangle();
    EXPECT_EQ(switched(g, {}), g);
    EXPECT_EQ(switched(g, {{0, 1, 2}}), g);
    SignedGraph path(2, {{0, 1, Sign::Negative}});
    EXPECT_EQ(switched(path, {{1}}).pair(0, 1), PairKind::Positive);
}

TEST(SignedGraph, SwitchKeepsParallelPairs)
{
    SignedGraph g(3, {{0, 1, Sign::Positive}, {0, 1, Sign::Negative}, {1, 2, Sign::Negative}});
    const auto s = switched(g, {{1}});
    EXPECT_TRUE(s.is_parallel(0, 1));
    EXPECT_EQ(s.pair(1, 2), PairKind::Positive);
}

TEST(SignedGraph, InducedExamples)
{
    const auto g = one_negative_triangle();
    EXPECT_EQ(induced(g, {0, 1, 2}).graph, g);
    const auto empty = induced(g, {});
    EXPECT_EQ(empty.graph.num_vertices(), 0);
    const auto edge = induced(g, {1, 0});
    EXPECT_EQ(edge.graph.num_edges(), 1);
    EXPECT_EQ(edge.graph.pair(0, 1), PairKind::Negative);
    EXPECT_EQ(edge.original, (std::vector<int>{0, 1}));
}

TEST(SignedGraph, NegativePartExamples)
{
    SignedGraph pos(3, {{0, 1, Sign::Positive}, {1, 2, Sign::Positive}});
    EXPECT_EQ(negative_part(pos).num_edges(), 0);
    SignedGraph k3(3, {{0, 1, Sign::Negative}, {1, 2, Sign::Negative}, {0, 2, Sign::Negative}});
    EXPECT_EQ(negative_part(k3), k3);
    SignedGraph par(2, {{0, 1, Sign::Positive}, {0, 1, Sign::Negative}});
    const auto np = negative_part(par);
    EXPECT_EQ(np.num_edges(), 1);
    EXPECT_EQ(np.pair(0, 1), PairKind::Negative);
}

TEST(SignedGraph, BalanceExamples)
{
    SignedGraph pos(3, {{0, 1, Sign::Positive}, {1, 2, Sign::Positive}, {0, 2, Sign::Positive}});
    ASSERT_TRUE(is_balanced(pos));
    EXPECT_TRUE(is_balanced(pos)->vertices.empty());
    EXPECT_FALSE(is_balanced(one_negative_triangle()));
    SignedGraph two_neg(3, {{0, 1, Sign::Negative}, {0, 2, Sign::Negative}, {1, 2, Sign::Positive}});
    const auto w = is_balanced(two_neg);
    ASSERT_TRUE(w);
    // lowest vertex of each component stays outside W
    EXPECT_EQ(w->vertices, (std::vector<int>{1, 2}));
    EXPECT_EQ(negative_part(switched(two_neg, *w)).num_edges(), 0);
}

TEST(SignedGraph, ParallelPairIsUnbalanced)
{
    SignedGraph g(2, {{0, 1, Sign::Positive}, {0, 1, Sign::Negative}});
    EXPECT_FALSE(is_balanced(g));
}

TEST(SignedGraph, BalanceOnDisconnectedGraph)
{
    SignedGraph g(5, {{0, 1, Sign::Negative}, {2, 3, Sign::Negative}, {3, 4, Sign::Negative}});
    const auto w = is_balanced(g);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->vertices, (std::vector<int>{1, 3}));
}

TEST(SignedGraph, FeasibilityExamples)
{
    const auto g = one_negative_triangle();
    EXPECT_TRUE(is_feasible(g, {}));
    EXPECT_TRUE(is_feasible(g, {{0, 2}, {}}));
    EXPECT_TRUE(is_feasible(g, {{0}, {1}}));
    EXPECT_FALSE(is_feasible(g, {{0, 1}, {}}));
    EXPECT_FALSE(is_feasible(g, {{0, 2}, {1}}));
    SignedGraph par(2, {{0, 1, Sign::Positive}, {0, 1, Sign::Negative}});
    EXPECT_FALSE(is_feasible(par, {{0}, {1}}));
    EXPECT_FALSE(is_feasible(par, {{0, 1}, {}}));
    EXPECT_TRUE(is_feasible(par, {{0}, {}}));
}

TEST(SignedGraph, FeasibilityRejectsOverlapAndRange)
{
    const auto g = one_negative_triangle();
    EXPECT_FALSE(is_feasible(g, {{0}, {0}}));
    EXPECT_FALSE(is_feasible(g, {{3}, {}}));
}

TEST(SignedGraphProperty, SwitchingIsInvolutionAndPreservesBalance)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t)
    {
        const int n = 1 + static_cast<int>(rng() % 9);
        const auto g = oracle::random_graph(n, 0.5, 0.1, 0.4, rng);
        SwitchSet w;
        for (int v = 0; v < n; ++v)
            if (rng() & 1)
                w.vertices.push_back(v);
        const auto s = switched(g, w);
        EXPECT_EQ(switched(s, w), g);
        EXPECT_EQ(is_balanced(g).has_value(), is_balanced(s).has_value());
    }
}

TEST(SignedGraphProperty, BalanceMatchesCycleOracle)
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 300; ++t)
    {
        const int n = 1 + static_cast<int>(rng() % 10);
        const double p_par = t % 3 == 0 ? 0.05 : 0.0;
        const auto g = oracle::random_graph(n, 0.2 + 0.6 * (t % 5) / 4.0, p_par, 0.3, rng);
        const auto odd = oracle::odd_cycle_masks(g);
        const bool oracle_balanced = g.num_parallel() == 0 && std::none_of(odd.begin(), odd.end(), [](bool b) { return b; });
        const auto w = is_balanced(g);
        ASSERT_EQ(w.has_value(), oracle_balanced) << "trial " << t;
        if (w)
        {
            const auto in = membership(n, w->vertices);
            VertexSet out_w;
            for (int v = 0; v < n; ++v)
                if (!in[v])
                    out_w.push_back(v);
            EXPECT_TRUE(is_feasible(g, {out_w, w->vertices}));
        }
    }
}

TEST(SignedGraphProperty, FeasibleSetsMatchTernaryOracle)
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 60; ++t)
    {
        const int n = 2 + static_cast<int>(rng() % 7);
        const auto g = oracle::random_graph(n, 0.6, 0.15, 0.4, rng);
        const auto masks = oracle::balanced_masks(g);
        for (std::uint32_t m = 0; m < masks.size(); ++m)
        {
            VertexSet s;
            for (int v = 0; v < n; ++v)
                if (m >> v & 1)
                    s.push_back(v);
            EXPECT_EQ(is_balanced(induced(g, s).graph).has_value(), static_cast<bool>(masks[m]));
        }
    }
}

TEST(SignedGraph, BipartitionFromSwitch)
{
    const auto p = bipartition_from_switch({0, 2, 3}, {{2, 4}});
    EXPECT_EQ(p.v1, (VertexSet{0, 3}));
    EXPECT_EQ(p.v2, (VertexSet{2}));
}
