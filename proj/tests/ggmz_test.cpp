#include <gtest/gtest.h>

#include <random>

#include "mbsp/ggmz.hpp"
#include "mbsp/instances.hpp"
#include "oracles.hpp"

using namespace mbsp;

namespace {

bool is_stable(const SignedGraph& h, const VertexSet& s)
{
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            if (h.pair(s[a], s[b]) != PairKind::None)
                return false;
    return true;
}

bool is_maximal_stable(const SignedGraph& h, const VertexSet& s)
{
    const auto in = membership(h.num_vertices(), s);
    for (int v = 0; v < h.num_vertices(); ++v)
    {
        if (in[v])
            continue;
        bool blocked = false;
        for (int u : h.neighbors(v))
            blocked = blocked || in[u];
        if (!blocked)
            return false;
    }
    return true;
}

SignedGraph cycle_graph(int n)
{
    std::vector<SignedEdge> e;
    for (int i = 0; i < n; ++i)
        e.push_back({i, (i + 1) % n, Sign::Negative});
    return SignedGraph(n, e);
}

} // namespace

TEST(SwitchSetFromForest, Examples)
{
    SignedGraph pos(3, {{0, 1, Sign::Positive}, {1, 2, Sign::Positive}});
    EXPECT_TRUE(switch_set_from_forest(pos).vertices.empty());
    SignedGraph edge(2, {{0, 1, Sign::Negative}});
    EXPECT_EQ(switch_set_from_forest(edge).vertices, (VertexSet{1}));
    SignedGraph path(3, {{0, 1, Sign::Negative}, {1, 2, Sign::Negative}});
    EXPECT_EQ(switch_set_from_forest(path).vertices, (VertexSet{1}));
}

TEST(SwitchSetFromForest, RejectsCycles)
{
    EXPECT_THROW(switch_set_from_forest(cycle_graph(3)), std::invalid_argument);
    SignedGraph par(2, {{0, 1, Sign::Positive}, {0, 1, Sign::Negative}});
    EXPECT_THROW(switch_set_from_forest(par), std::invalid_argument);
}

TEST(SwitchSetFromForest, LongPathNeedsNoRecursion)
{
    const int n = 200000;
    std::vector<SignedEdge> e;
    for (int i = 0; i + 1 < n; ++i)
        e.push_back({i, i + 1, Sign::Negative});
    const auto w = switch_set_from_forest(SignedGraph(n, e));
    EXPECT_EQ(w.vertices.size(), static_cast<std::size_t>(n / 2));
}

TEST(SwitchSetFromForestProperty, SwitchedForestIsPositive)
{
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t)
    {
        const int n = static_cast<int>(rng() % 15);
        const auto g = oracle::random_graph(n, 0.4, 0.2, 0.5, rng);
        for (auto s : all_tree_strategies)
        {
            std::mt19937_64 tree_rng(t);
            const auto forest = spanning_forest(g, s, tree_rng);
            EXPECT_EQ(switched(forest, switch_set_from_forest(forest)).num_negative(), 0);
        }
    }
}

TEST(StableSetGrasp, Examples)
{
    StableSetParams params;
    params.seed = 1;
    EXPECT_EQ(stable_set_grasp(SignedGraph(5, {}), params).size(), 5u);
    const auto k3 = stable_set_grasp(cycle_graph(3), params);
    EXPECT_EQ(k3.size(), 1u);
    const auto c5 = stable_set_grasp(cycle_graph(5), params);
    EXPECT_EQ(c5.size(), 2u);
    EXPECT_TRUE(is_stable(cycle_graph(5), c5));
    EXPECT_TRUE(stable_set_grasp(SignedGraph(0, {}), params).empty());
}

TEST(StableSetGrasp, RejectsBadLimits)
{
    StableSetParams params;
    params.max_stall_iterations = 0;
    EXPECT_THROW(stable_set_grasp(cycle_graph(3), params), std::invalid_argument);
    params.max_stall_iterations = 10;
    params.time_limit_seconds = 0;
    EXPECT_THROW(stable_set_grasp(cycle_graph(3), params), std::invalid_argument);
}

TEST(StableSetGraspProperty, StableAndMaximal)
{
    std::mt19937_64 rng(32);
    for (int t = 0; t < 100; ++t)
    {
        const int n = static_cast<int>(rng() % 30);
        const auto h = oracle::random_graph(n, 0.2 + 0.1 * (t % 6), 0.1, 0.5, rng);
        StableSetParams params;
        params.seed = t;
        params.max_stall_iterations = 20;
        const auto s = stable_set_grasp(h, params);
        EXPECT_TRUE(is_stable(h, s));
        EXPECT_TRUE(is_maximal_stable(h, s));
    }
}

TEST(Ggmz, Examples)
{
    SignedGraph tri(3, {{0, 1, Sign::Negative}, {1, 2, Sign::Positive}, {0, 2, Sign::Positive}});
    for (auto s : all_tree_strategies)
    {
        const auto p = ggmz(tri, s, {});
        EXPECT_EQ(p.size(), 2u) << to_string(s);
        EXPECT_TRUE(is_feasible(tri, p));
    }
    const auto empty = ggmz(SignedGraph(0, {}), TreeStrategy::BFS, {});
    EXPECT_EQ(empty.size(), 0u);
}

TEST(Ggmz, BalancedGraphsAreSolvedCompletely)
{
    for (int seed = 0; seed < 10; ++seed)
    {
        const auto g = generate_balanced(20 + seed, 0.3, seed);
        for (auto s : all_tree_strategies)
            EXPECT_EQ(static_cast<int>(ggmz(g, s, {.seed = static_cast<std::uint64_t>(seed)}).size()), g.num_vertices());
    }
}

TEST(GgmzProperty, FeasibleAndBoundedByOptimum)
{
    std::mt19937_64 rng(33);
    for (int t = 0; t < 60; ++t)
    {
        const int n = 1 + static_cast<int>(rng() % 10);
        const auto g = oracle::random_graph(n, 0.5, t % 2 ? 0.25 : 0.0, 0.5, rng);
        const int opt = oracle::max_balanced(oracle::balanced_masks(g));
        for (auto s : all_tree_strategies)
        {
            const auto p = ggmz(g, s, {.max_stall_iterations = 10, .seed = static_cast<std::uint64_t>(t)});
            EXPECT_TRUE(is_feasible(g, p));
            EXPECT_LE(static_cast<int>(p.size()), opt);
        }
    }
}

TEST(GgmzProperty, DeterministicPerSeed)
{
    std::mt19937_64 rng(34);
    const auto g = oracle::random_graph(30, 0.3, 0.2, 0.5, rng);
    for (auto s : all_tree_strategies)
        EXPECT_EQ(ggmz(g, s, {.seed = 5}), ggmz(g, s, {.seed = 5}));
}
