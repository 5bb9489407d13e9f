#include <gtest/gtest.h>

#include <random>

#include "mbsp/branch_and_cut.hpp"
#include "mbsp/instances.hpp"
#include "oracles.hpp"

using namespace mbsp;

namespace {

SignedGraph one_negative_triangle()
{
    return SignedGraph(3, {{0, 1, Sign::Negative}, {1, 2, Sign::Positive}, {0, 2, Sign::Positive}});
}

SearchNode root_node(int n)
{
    SearchNode s;
    s.fixings.assign(n, Fixing::Free);
    s.bound = n;
    return s;
}

// Balanced vertex sets that respect a node's fixings and extra rows.
std::vector<std::uint32_t> node_sets(const std::vector<bool>& masks, const SearchNode& node)
{
    std::vector<std::uint32_t> out;
    const int n = static_cast<int>(node.fixings.size());
    for (std::uint32_t m = 0; m < masks.size(); ++m)
    {
        if (!masks[m])
            continue;
        bool ok = true;
        std::vector<double> y(n);
        for (int v = 0; v < n; ++v)
        {
            y[v] = m >> v & 1;
            if (node.fixings[v] == Fixing::Zero && y[v] == 1.0)
                ok = false;
            if (node.fixings[v] == Fixing::One && y[v] == 0.0)
                ok = false;
        }
        for (const auto& r : node.extra_rows)
            ok = ok && r.satisfied(y, 1e-9);
        if (ok)
            out.push_back(m);
    }
    return out;
}

} // namespace

TEST(InitialFormulation, Examples)
{
    SignedGraph par(3, {{0, 1, Sign::Positive}, {0, 1, Sign::Negative}, {1, 2, Sign::Positive}});
    const auto f = initial_formulation(par);
    ASSERT_EQ(f.cuts.size(), 1u);
    EXPECT_EQ(f.cuts[0].kind, CutKind::ParallelEdge);
    EXPECT_EQ(f.cuts[0].rhs, 1);
    EXPECT_EQ(f.lp.rows.size(), f.cuts.size());
    EXPECT_EQ(f.lp.num_vars(), 3);

    std::vector<SignedEdge> e;
    for (auto [u, v] : {std::pair{0, 1}, {1, 2}, {0, 2}})
    {
        e.push_back({u, v, Sign::Positive});
        e.push_back({u, v, Sign::Negative});
    }
    const auto clique = initial_formulation(SignedGraph(3, e));
    ASSERT_EQ(clique.cuts.size(), 1u);
    EXPECT_EQ(clique.cuts[0].kind, CutKind::Clique);
    EXPECT_EQ(clique.cuts[0].terms.size(), 3u);

    const auto tri = initial_formulation(one_negative_triangle());
    ASSERT_EQ(tri.cuts.size(), 1u);
    EXPECT_EQ(tri.cuts[0].kind, CutKind::OddNegativeCycle);
    EXPECT_EQ(tri.cuts[0].rhs, 2);

    // K4 of negative edges: four odd triangles exist, plus one negative clique row
    std::vector<SignedEdge> k4;
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v)
            k4.push_back({u, v, Sign::Negative});
    const auto neg = initial_formulation(SignedGraph(4, k4));
    EXPECT_TRUE(std::any_of(neg.cuts.begin(), neg.cuts.end(), [](const Cut& c) {
        return c.kind == CutKind::NegativeClique && c.terms.size() == 4 && c.rhs == 2;
    }));
    EXPECT_LE(std::count_if(neg.cuts.begin(), neg.cuts.end(), [](const Cut& c) { return c.kind == CutKind::OddNegativeCycle; }), 8);
}

TEST(InitialFormulation, BalancedGraphRootLpIsN)
{
    for (int seed = 0; seed < 5; ++seed)
    {
        const auto g = generate_balanced(25, 0.4, seed);
        const auto f = initial_formulation(g);
        EXPECT_TRUE(f.cuts.empty());
        const auto s = lp::solve(f.lp);
        ASSERT_EQ(s.status, lp::LpStatus::Optimal);
        EXPECT_NEAR(s.objective_value, 25.0, 1e-9);
    }
}

TEST(InitialFormulationProperty, RowsAreValid)
{
    std::mt19937_64 rng(71);
    for (int t = 0; t < 60; ++t)
    {
        const int n = 3 + static_cast<int>(rng() % 9);
        const auto g = oracle::random_graph(n, 0.6, 0.25, 0.5, rng);
        const auto masks = oracle::balanced_masks(g);
        const auto f = initial_formulation(g);
        EXPECT_LE(std::count_if(f.cuts.begin(), f.cuts.end(), [](const Cut& c) { return c.kind == CutKind::OddNegativeCycle; }),
                  2 * n);
        for (std::uint32_t m = 0; m < masks.size(); ++m)
        {
            if (!masks[m])
                continue;
            std::vector<double> y(n);
            for (int v = 0; v < n; ++v)
                y[v] = m >> v & 1;
            for (const auto& c : f.cuts)
                EXPECT_LE(c.lhs(y), c.rhs + 1e-9);
        }
    }
}

TEST(Rounding, Examples)
{
    const auto tri = one_negative_triangle();
    const auto p = rounding_heuristic(tri, {1.0, 1.0, 1.0});
    EXPECT_EQ(p.size(), 2u);
    EXPECT_TRUE(is_feasible(tri, p));
    // highest value goes first
    const auto q = rounding_heuristic(tri, {0.2, 0.9, 0.8});
    EXPECT_EQ(q.vertices(), (VertexSet{1, 2}));
    SignedGraph edgeless(4, {});
    EXPECT_EQ(rounding_heuristic(edgeless, {0, 0, 0, 0}).size(), 4u);
}

TEST(RoundingProperty, AlwaysFeasibleAndMaximal)
{
    std::mt19937_64 rng(72);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t)
    {
        const int n = 1 + static_cast<int>(rng() % 20);
        const auto g = oracle::random_graph(n, 0.4, 0.2, 0.5, rng);
        std::vector<double> y(n);
        for (auto& v : y)
            v = u(rng);
        const auto p = rounding_heuristic(g, y);
        EXPECT_TRUE(is_feasible(g, p));
        EXPECT_TRUE(candidates(g, p, Side::First).empty());
        EXPECT_TRUE(candidates(g, p, Side::Second).empty());
    }
}

TEST(Branch, FallsBackToMostFractional)
{
    SignedGraph g(5, {{0, 1, Sign::Positive}});
    const auto kids = branch(g, root_node(5), {}, {1, 1, 1, 0.3, 0.5});
    ASSERT_EQ(kids.size(), 2u);
    EXPECT_EQ(kids[0].fixings[4], Fixing::Zero);
    EXPECT_EQ(kids[1].fixings[4], Fixing::One);
    EXPECT_EQ(kids[0].fixings[3], Fixing::Free);
    EXPECT_EQ(kids[0].depth, 1);
    EXPECT_THROW(branch(g, root_node(5), {}, {1, 0, 1, 0, 1}), std::invalid_argument);
}

TEST(Branch, BindingTriangle)
{
    const auto g = one_negative_triangle();
    const Cut tri = cycle_cut({0, 1, 2});
    const std::vector<double> y{1.0, 0.5, 0.5};
    const auto kids = branch(g, root_node(3), {&tri}, y);
    ASSERT_EQ(kids.size(), 3u);
    // most fractional tie goes to the first of {1, 2}: i = 1, D = {0, 2}
    EXPECT_EQ(kids[0].fixings, (std::vector<Fixing>{Fixing::One, Fixing::Zero, Fixing::One}));
    EXPECT_TRUE(kids[0].extra_rows.empty());
    EXPECT_EQ(kids[1].fixings[1], Fixing::One);
    ASSERT_EQ(kids[1].extra_rows.size(), 1u);
    EXPECT_DOUBLE_EQ(kids[1].extra_rows[0].rhs, 1.0);
    EXPECT_EQ(kids[1].extra_rows[0].terms.size(), 2u);
    EXPECT_EQ(kids[2].fixings[1], Fixing::Zero);
    EXPECT_EQ(kids[2].extra_rows.size(), 1u);

    const auto standard = branch(g, root_node(3), {&tri}, y, Branching::Standard);
    EXPECT_EQ(standard.size(), 2u);
    // slack cycle is ignored
    const auto slack = branch(g, root_node(3), {&tri}, {0.5, 0.5, 0.5});
    EXPECT_EQ(slack.size(), 2u);
}

TEST(Branch, PrefersSmallestCycleThenLexicographic)
{
    SignedGraph g(6, {{0, 1, Sign::Negative}, {1, 2, Sign::Positive}, {0, 2, Sign::Positive}, {3, 4, Sign::Negative},
                      {4, 5, Sign::Positive}, {3, 5, Sign::Positive}});
    const Cut late = cycle_cut({3, 4, 5}), early = cycle_cut({2, 0, 1});
    const std::vector<double> y{0.5, 1, 0.5, 0.5, 1, 0.5};
    const auto kids = branch(g, root_node(6), {&late, &early}, y);
    ASSERT_EQ(kids.size(), 3u);
    EXPECT_EQ(kids[0].fixings[0], Fixing::Zero);
    EXPECT_EQ(kids[0].fixings[3], Fixing::Free);
}

TEST(Solve, Examples)
{
    const auto tri = solve(one_negative_triangle());
    EXPECT_EQ(tri.lower_bound, 2);
    EXPECT_EQ(tri.upper_bound, 2.0);
    EXPECT_EQ(tri.status, SolveStatus::Optimal);
    EXPECT_DOUBLE_EQ(tri.gap_pct(), 0.0);

    const auto bal = generate_balanced(30, 0.5, 3);
    const auto r = solve(bal);
    EXPECT_EQ(r.lower_bound, 30);
    EXPECT_EQ(r.stats.nodes, 1);

    EXPECT_EQ(solve(SignedGraph(0, {})).lower_bound, 0);
    EXPECT_THROW(solve(one_negative_triangle(), {.time_limit_seconds = 0}), std::invalid_argument);
}

TEST(SolveProperty, MatchesBruteForceInBothModes)
{
    std::mt19937_64 rng(73);
    for (int t = 0; t < 60; ++t)
    {
        const int n = 4 + static_cast<int>(rng() % 9);
        const auto g = oracle::random_graph(n, 0.3 + 0.1 * (t % 5), t % 2 ? 0.3 : 0.0, 0.5, rng);
        const int opt = oracle::max_balanced(oracle::balanced_masks(g));
        for (auto mode : {Branching::Cycle, Branching::Standard})
        {
            const auto r = solve(g, {.branching = mode});
            EXPECT_EQ(r.lower_bound, opt) << "trial " << t;
            EXPECT_EQ(r.status, SolveStatus::Optimal);
            EXPECT_TRUE(is_feasible(g, r.best));
            EXPECT_EQ(static_cast<int>(r.best.size()), r.lower_bound);
        }
    }
}

TEST(SolveProperty, BranchingPartitionsFeasibleSets)
{
    std::mt19937_64 rng(74);
    int checked = 0;
    for (int t = 0; t < 80; ++t)
    {
        const int n = 6 + static_cast<int>(rng() % 3);
        const auto g = oracle::random_graph(n, 0.8, t % 2 ? 0.3 : 0.0, 0.5, rng);
        const auto masks = oracle::balanced_masks(g);
        SolveParams params;
        // without cut rounds the root stays fractional more often
        params.max_cut_rounds = static_cast<int>(t % 2);
        params.branching = t % 4 == 3 ? Branching::Standard : Branching::Cycle;
        params.on_branch = [&](const SearchNode& parent, const std::vector<SearchNode>& kids) {
            ++checked;
            const auto whole = node_sets(masks, parent);
            std::vector<std::uint32_t> joined;
            for (const auto& k : kids)
            {
                const auto part = node_sets(masks, k);
                joined.insert(joined.end(), part.begin(), part.end());
            }
            std::sort(joined.begin(), joined.end());
            EXPECT_TRUE(std::adjacent_find(joined.begin(), joined.end()) == joined.end()) << "children overlap";
            EXPECT_EQ(joined, whole);
        };
        solve(g, params);
    }
    EXPECT_GT(checked, 10);
}

TEST(BranchProperty, ChildrenPartitionParentOnBindingCycles)
{
    std::mt19937_64 rng(76);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int three_way = 0;
    for (int t = 0; t < 300; ++t)
    {
        const int n = 4 + static_cast<int>(rng() % 5);
        const auto g = oracle::random_graph(n, 0.7, t % 2 ? 0.2 : 0.0, 0.5, rng);
        const auto masks = oracle::balanced_masks(g);
        const auto odd = oracle::odd_cycle_masks(g);
        std::vector<std::uint32_t> cycles;
        for (std::uint32_t m = 0; m < odd.size(); ++m)
            if (odd[m])
                cycles.push_back(m);
        SearchNode parent = root_node(n);
        for (int v = 0; v < n; ++v)
            if (u(rng) < 0.2)
                parent.fixings[v] = u(rng) < 0.5 ? Fixing::Zero : Fixing::One;
        std::vector<double> y(n);
        for (auto& v : y)
            v = u(rng);
        std::vector<Cut> cuts;
        if (!cycles.empty())
        {
            // make one cycle binding with two half-integral members
            const auto m = cycles[rng() % cycles.size()];
            std::vector<int> c;
            for (int v = 0; v < n; ++v)
                if (m >> v & 1)
                {
                    c.push_back(v);
                    y[v] = 1.0;
                }
            y[c[rng() % c.size()]] = 0.5;
            for (int v : c)
                if (y[v] == 1.0)
                {
                    y[v] = 0.5;
                    break;
                }
            if (u(rng) < 0.5)
                parent.extra_rows.push_back(cycle_cut(c).to_row());
            cuts.push_back(cycle_cut(c));
        }
        else
            y[rng() % n] = 0.5;
        // fixings must agree with the LP point, as they do inside the solver
        for (int v = 0; v < n; ++v)
            if (parent.fixings[v] != Fixing::Free && y[v] != 1.0 && y[v] != 0.5)
                y[v] = parent.fixings[v] == Fixing::One ? 1.0 : 0.0;
            else
                parent.fixings[v] = Fixing::Free;
        if (is_integral(y))
            continue;
        std::vector<const Cut*> ptrs;
        for (const auto& c : cuts)
            ptrs.push_back(&c);
        const auto kids = branch(g, parent, ptrs, y, t % 5 == 4 ? Branching::Standard : Branching::Cycle);
        three_way += kids.size() == 3;
        std::vector<std::uint32_t> joined;
        for (const auto& k : kids)
        {
            const auto part = node_sets(masks, k);
            joined.insert(joined.end(), part.begin(), part.end());
        }
        std::sort(joined.begin(), joined.end());
        EXPECT_TRUE(std::adjacent_find(joined.begin(), joined.end()) == joined.end()) << "trial " << t;
        EXPECT_EQ(joined, node_sets(masks, parent)) << "trial " << t;
    }
    EXPECT_GT(three_way, 50);
}

TEST(SolveProperty, NodeBoundsNeverRise)
{
    for (int t = 0; t < 20; ++t)
    {
        const auto g = generate({.n = 18, .density = 0.5, .neg_ratio = 1.0, .seed = static_cast<std::uint64_t>(t)});
        SolveParams params;
        params.max_cut_rounds = 1;
        params.on_node = [&](const NodeEvent& e) {
            if (!e.infeasible)
            {
                EXPECT_LE(e.lp_bound, e.parent_bound + 1e-6);
            }
        };
        std::size_t last = 0;
        params.on_incumbent = [&](const Bipartition& p) {
            EXPECT_TRUE(is_feasible(g, p));
            EXPECT_GT(p.size(), last);
            last = p.size();
        };
        const auto r = solve(g, params);
        EXPECT_EQ(last, r.best.size());
        EXPECT_EQ(r.lower_bound, brute_force(g).optimum);
    }
}

TEST(SolveProperty, Deterministic)
{
    const auto g = generate({.n = 30, .density = 0.5, .parallel_frac = 0.5, .seed = 4});
    const auto a = solve(g), b = solve(g);
    EXPECT_EQ(a.best, b.best);
    EXPECT_EQ(a.stats.nodes, b.stats.nodes);
    EXPECT_EQ(a.stats.cuts_by_kind, b.stats.cuts_by_kind);
}

TEST(Solve, TimeLimitKeepsValidBounds)
{
    const auto g = generate({.n = 70, .density = 0.5, .neg_ratio = 1.0, .seed = 1});
    const auto r = solve(g, {.time_limit_seconds = 0.05});
    EXPECT_TRUE(is_feasible(g, r.best));
    EXPECT_LE(r.lower_bound, r.upper_bound);
    EXPECT_LE(r.upper_bound, 70.0);
    EXPECT_EQ(r.upper_bound, std::floor(r.upper_bound));
    if (r.status == SolveStatus::TimeLimit)
    {
        EXPECT_GT(r.gap_pct(), 0.0);
    }
}
