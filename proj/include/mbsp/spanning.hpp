#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "signed_graph.hpp"

namespace mbsp {

enum class TreeStrategy { BFS, DFS, KruskalF1, KruskalF2, KruskalF3, KruskalRandom, KruskalAdaptive };

inline constexpr std::array<TreeStrategy, 7> all_tree_strategies = {
    TreeStrategy::BFS,       TreeStrategy::DFS,           TreeStrategy::KruskalF1,      TreeStrategy::KruskalF2,
    TreeStrategy::KruskalF3, TreeStrategy::KruskalRandom, TreeStrategy::KruskalAdaptive};

inline std::string_view to_string(TreeStrategy s)
{
    switch (s)
    {
    case TreeStrategy::BFS: return "bfs";
    case TreeStrategy::DFS: return "dfs";
    case TreeStrategy::KruskalF1: return "f1";
    case TreeStrategy::KruskalF2: return "f2";
    case TreeStrategy::KruskalF3: return "f3";
    case TreeStrategy::KruskalRandom: return "random";
    case TreeStrategy::KruskalAdaptive: return "adaptive";
    }
    return "?";
}

inline std::optional<TreeStrategy> parse_tree_strategy(std::string_view token)
{
    for (auto s : all_tree_strategies)
        if (to_string(s) == token)
            return s;
    return std::nullopt;
}

class UnionFind
{
public:
    explicit UnionFind(int n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    int find(int x)
    {
        while (parent_[x] != x)
        {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Returns false when a and b were already joined.
    bool unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        if (rank_[a] < rank_[b])
            std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b])
            ++rank_[a];
        return true;
    }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

namespace detail {

// Costs indexed (positive-only, negative-only, parallel).
inline int table_cost(const SignedGraph& g, const SignedEdge& e, std::array<int, 3> costs)
{
    switch (g.pair(e.u, e.v))
    {
    case PairKind::Positive: return costs[0];
    case PairKind::Negative: return costs[1];
    case PairKind::Parallel: return costs[2];
    case PairKind::None: break;
    }
    throw std::invalid_argument("edge not in graph");
}

} // namespace detail

// Kruskal cost of one signed edge. The random strategy draws from rng.
template <class Rng>
int edge_cost(const SignedGraph& g, const SignedEdge& e, TreeStrategy strategy, Rng& rng)
{
    switch (strategy)
    {
    case TreeStrategy::KruskalF1: return detail::table_cost(g, e, {3, 1, 2});
    case TreeStrategy::KruskalF2: return detail::table_cost(g, e, {1, 2, 3});
    case TreeStrategy::KruskalF3: return detail::table_cost(g, e, {2, 1, 3});
    case TreeStrategy::KruskalRandom: return std::uniform_int_distribution<int>(0, 1000)(rng);
    case TreeStrategy::KruskalAdaptive:
        // |E-|/|E+| < 1, with an empty E+ counting as ratio >= 1
        if (g.num_negative() < g.num_positive())
            return edge_cost(g, e, TreeStrategy::KruskalF1, rng);
        return edge_cost(g, e, TreeStrategy::KruskalF2, rng);
    case TreeStrategy::BFS:
    case TreeStrategy::DFS: break;
    }
    throw std::invalid_argument("edge_cost: strategy " + std::string(to_string(strategy)) + " has no cost function");
}

namespace detail {

// Sign of the tree edge taken for pair (u, v): positive wins on a parallel pair.
inline Sign traversal_sign(const SignedGraph& g, int u, int v)
{
    return g.pair(u, v) == PairKind::Negative ? Sign::Negative : Sign::Positive;
}

inline SignedGraph bfs_forest(const SignedGraph& g)
{
    const int n = g.num_vertices();
    std::vector<bool> seen(n, false);
    std::vector<SignedEdge> tree;
    std::vector<int> queue;
    for (int root = 0; root < n; ++root)
    {
        if (seen[root])
            continue;
        seen[root] = true;
        queue.assign(1, root);
        for (std::size_t head = 0; head < queue.size(); ++head)
        {
            const int u = queue[head];
            for (int v : g.neighbors(u))
            {
                if (seen[v])
                    continue;
                seen[v] = true;
                tree.push_back({std::min(u, v), std::max(u, v), traversal_sign(g, u, v)});
                queue.push_back(v);
            }
        }
    }
    return SignedGraph(n, tree);
}

// Iterative form of recursive DFS; tree edges are discovery edges.
inline SignedGraph dfs_forest(const SignedGraph& g)
{
    const int n = g.num_vertices();
    std::vector<bool> seen(n, false);
    std::vector<SignedEdge> tree;
    std::vector<std::pair<int, std::size_t>> stack;
    for (int root = 0; root < n; ++root)
    {
        if (seen[root])
            continue;
        seen[root] = true;
        stack.assign(1, {root, 0});
        while (!stack.empty())
        {
            auto& [u, next] = stack.back();
            const auto& nbrs = g.neighbors(u);
            while (next < nbrs.size() && seen[nbrs[next]])
                ++next;
            if (next == nbrs.size())
            {
                stack.pop_back();
                continue;
            }
            const int v = nbrs[next++];
            seen[v] = true;
            tree.push_back({std::min(u, v), std::max(u, v), traversal_sign(g, u, v)});
            stack.emplace_back(v, 0);
        }
    }
    return SignedGraph(n, tree);
}

template <class Rng>
SignedGraph kruskal_forest(const SignedGraph& g, TreeStrategy strategy, Rng& rng)
{
    const auto& edges = g.edges();
    std::vector<int> cost(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i)
        cost[i] = edge_cost(g, edges[i], strategy, rng);
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
    UnionFind components(g.num_vertices());
    std::vector<SignedEdge> tree;
    for (auto i : order)
        if (components.unite(edges[i].u, edges[i].v))
            tree.push_back(edges[i]);
    return SignedGraph(g.num_vertices(), tree);
}

} // namespace detail

/**
 * Spanning forest of g, one tree per connected component.
 *
 * BFS and DFS start from the lowest unvisited vertex and scan neighbors in
 * index order. Kruskal variants return a minimum-cost forest; ties go to the
 * earlier edge. Each signed copy of a parallel pair is its own candidate.
 */
template <class Rng>
SignedGraph spanning_forest(const SignedGraph& g, TreeStrategy strategy, Rng& rng)
{
    switch (strategy)
    {
    case TreeStrategy::BFS: return detail::bfs_forest(g);
    case TreeStrategy::DFS: return detail::dfs_forest(g);
    default: return detail::kruskal_forest(g, strategy, rng);
    }
}

inline int count_components(const SignedGraph& g)
{
    UnionFind uf(g.num_vertices());
    int components = g.num_vertices();
    for (const auto& e : g.edges())
        if (uf.unite(e.u, e.v))
            --components;
    return components;
}

} // namespace mbsp
