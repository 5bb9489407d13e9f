#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <unordered_map>
#include <vector>

namespace mbsp {

enum class Sign : std::int8_t { Positive = 1, Negative = -1 };

inline Sign flip(Sign s) { return s == Sign::Positive ? Sign::Negative : Sign::Positive; }
inline char to_char(Sign s) { return s == Sign::Positive ? '+' : '-'; }

// What connects an unordered vertex pair.
enum class PairKind : std::uint8_t { None = 0, Positive = 1, Negative = 2, Parallel = 3 };

struct SignedEdge
{
    int u = 0;
    int v = 0;
    Sign sign = Sign::Positive;

    friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

using VertexSet = std::vector<int>;

/**
 * Undirected signed multigraph on vertices 0..n-1.
 *
 * A vertex pair carries at most one positive and one negative edge; a pair
 * carrying both is a parallel pair. Immutable after construction.
 */
class SignedGraph
{
public:
    SignedGraph() = default;

    // Throws std::invalid_argument on loops or out-of-range endpoints.
    // Repeated (pair, sign) entries are dropped; the first occurrence keeps its position.
    SignedGraph(int n, const std::vector<SignedEdge>& edge_list) : n_(n)
    {
        if (n < 0)
            throw std::invalid_argument("negative vertex count");
        std::unordered_map<std::uint64_t, std::uint8_t> seen;
        for (const auto& e : edge_list)
        {
            if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
                throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
            if (e.u == e.v)
                throw std::invalid_argument("loop edge at vertex " + std::to_string(e.u));
            const int a = std::min(e.u, e.v), b = std::max(e.u, e.v);
            const auto bit = static_cast<std::uint8_t>(e.sign == Sign::Positive ? PairKind::Positive : PairKind::Negative);
            auto& cell = seen[static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(b)];
            if (cell & bit)
                continue;
            cell |= bit;
            edges_.push_back({a, b, e.sign});
            if (e.sign == Sign::Positive)
                ++num_positive_;
            else
                ++num_negative_;
        }
        std::vector<std::vector<std::pair<int, PairKind>>> lists(n);
        for (const auto& [key, bits] : seen)
        {
            const int a = static_cast<int>(key / static_cast<std::uint64_t>(n)), b = static_cast<int>(key % static_cast<std::uint64_t>(n));
            lists[a].emplace_back(b, static_cast<PairKind>(bits));
            lists[b].emplace_back(a, static_cast<PairKind>(bits));
        }
        adjacency_.resize(n);
        kinds_.resize(n);
        for (int u = 0; u < n; ++u)
        {
            std::sort(lists[u].begin(), lists[u].end(), [](const auto& x, const auto& y) { return x.first < y.first; });
            for (const auto& [v, k] : lists[u])
            {
                adjacency_[u].push_back(v);
                kinds_[u].push_back(k);
                if (u < v && k == PairKind::Parallel)
                    parallel_pairs_.emplace_back(u, v);
            }
        }
        std::sort(parallel_pairs_.begin(), parallel_pairs_.end());
    }

    int num_vertices() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_positive() const { return num_positive_; }
    int num_negative() const { return num_negative_; }
    int num_parallel() const { return static_cast<int>(parallel_pairs_.size()); }

    // Edges in construction order, normalized to u < v.
    const std::vector<SignedEdge>& edges() const { return edges_; }

    // Sorted neighbor list; each adjacent pair appears once even when parallel.
    const std::vector<int>& neighbors(int v) const { return adjacency_[v]; }

    PairKind pair(int u, int v) const
    {
        const auto& list = adjacency_[u];
        const auto it = std::lower_bound(list.begin(), list.end(), v);
        return it != list.end() && *it == v ? kinds_[u][static_cast<std::size_t>(it - list.begin())] : PairKind::None;
    }

    bool has_edge(int u, int v, Sign s) const
    {
        const auto bit = s == Sign::Positive ? PairKind::Positive : PairKind::Negative;
        return (static_cast<std::uint8_t>(pair(u, v)) & static_cast<std::uint8_t>(bit)) != 0;
    }

    bool is_parallel(int u, int v) const { return pair(u, v) == PairKind::Parallel; }

    // Unordered pairs (u < v) present with both signs.
    const std::vector<std::pair<int, int>>& parallel_pairs() const { return parallel_pairs_; }

    friend bool operator==(const SignedGraph& a, const SignedGraph& b)
    {
        return a.n_ == b.n_ && a.adjacency_ == b.adjacency_ && a.kinds_ == b.kinds_;
    }

private:
    int n_ = 0;
    int num_positive_ = 0;
    int num_negative_ = 0;
    std::vector<SignedEdge> edges_;
    std::vector<std::vector<int>> adjacency_;
    // kinds_[u][i] is the pair kind of (u, adjacency_[u][i]).
    std::vector<std::vector<PairKind>> kinds_;
    std::vector<std::pair<int, int>> parallel_pairs_;
};

struct SwitchSet
{
    VertexSet vertices;

    friend bool operator==(const SwitchSet&, const SwitchSet&) = default;
};

// Solution object: two disjoint vertex sets (sorted) witnessing balance.
struct Bipartition
{
    VertexSet v1;
    VertexSet v2;

    std::size_t size() const { return v1.size() + v2.size(); }

    VertexSet vertices() const
    {
        VertexSet all;
        all.reserve(size());
        std::merge(v1.begin(), v1.end(), v2.begin(), v2.end(), std::back_inserter(all));
        return all;
    }

    void normalize()
    {
        std::sort(v1.begin(), v1.end());
        std::sort(v2.begin(), v2.end());
    }

    friend bool operator==(const Bipartition&, const Bipartition&) = default;
};

inline SignedGraph make_graph(int n, const std::vector<SignedEdge>& edges) { return SignedGraph(n, edges); }

inline std::vector<bool> membership(int n, const VertexSet& s)
{
    std::vector<bool> in(n, false);
    for (int v : s)
        in[v] = true;
    return in;
}

// Flips the sign of every edge with exactly one endpoint in w.
inline SignedGraph switched(const SignedGraph& g, const SwitchSet& w)
{
    const auto in = membership(g.num_vertices(), w.vertices);
    std::vector<SignedEdge> edges = g.edges();
    for (auto& e : edges)
        if (in[e.u] != in[e.v])
            e.sign = flip(e.sign);
    return SignedGraph(g.num_vertices(), edges);
}

struct InducedSubgraph
{
    SignedGraph graph;
    // original[i] is the vertex of the parent graph relabeled to i.
    std::vector<int> original;
};

inline InducedSubgraph induced(const SignedGraph& g, const VertexSet& s)
{
    InducedSubgraph result;
    result.original = s;
    std::sort(result.original.begin(), result.original.end());
    std::vector<int> local(g.num_vertices(), -1);
    for (std::size_t i = 0; i < result.original.size(); ++i)
        local[result.original[i]] = static_cast<int>(i);
    std::vector<SignedEdge> edges;
    for (const auto& e : g.edges())
        if (local[e.u] >= 0 && local[e.v] >= 0)
            edges.push_back({local[e.u], local[e.v], e.sign});
    result.graph = SignedGraph(static_cast<int>(result.original.size()), edges);
    return result;
}

// Keeps exactly the negative edges.
inline SignedGraph negative_part(const SignedGraph& g)
{
    std::vector<SignedEdge> edges;
    for (const auto& e : g.edges())
        if (e.sign == Sign::Negative)
            edges.push_back(e);
    return SignedGraph(g.num_vertices(), edges);
}

/**
 * Balance test in O(n + m).
 *
 * Returns a switch set W such that switching g at W leaves no negative edge,
 * or nothing when g has a parallel pair or a cycle with an odd number of
 * negative edges. Each component is labeled by BFS from its lowest vertex,
 * which stays outside W.
 */
inline std::optional<SwitchSet> is_balanced(const SignedGraph& g)
{
    if (g.num_parallel() > 0)
        return std::nullopt;
    const int n = g.num_vertices();
    std::vector<int> label(n, -1);
    std::queue<int> queue;
    for (int root = 0; root < n; ++root)
    {
        if (label[root] >= 0)
            continue;
        label[root] = 0;
        queue.push(root);
        while (!queue.empty())
        {
            const int u = queue.front();
            queue.pop();
            for (int v : g.neighbors(u))
            {
                const int expected = label[u] ^ (g.pair(u, v) == PairKind::Negative ? 1 : 0);
                if (label[v] < 0)
                {
                    label[v] = expected;
                    queue.push(v);
                }
                else if (label[v] != expected)
                    return std::nullopt;
            }
        }
    }
    SwitchSet w;
    for (int v = 0; v < n; ++v)
        if (label[v] == 1)
            w.vertices.push_back(v);
    return w;
}

// Same-side pairs must be positive only, cross pairs negative only.
inline bool is_feasible(const SignedGraph& g, const Bipartition& p)
{
    const int n = g.num_vertices();
    std::vector<int> side(n, 0);
    for (int v : p.v1)
    {
        if (v < 0 || v >= n || side[v] != 0)
            return false;
        side[v] = 1;
    }
    for (int v : p.v2)
    {
        if (v < 0 || v >= n || side[v] != 0)
            return false;
        side[v] = 2;
    }
    for (int u = 0; u < n; ++u)
    {
        if (side[u] == 0)
            continue;
        for (int v : g.neighbors(u))
        {
            if (v < u || side[v] == 0)
                continue;
            const auto kind = g.pair(u, v);
            const auto required = side[u] == side[v] ? PairKind::Positive : PairKind::Negative;
            if (kind != required)
                return false;
        }
    }
    return true;
}

// Turns a switch set of a balanced vertex subset into the matching bipartition.
inline Bipartition bipartition_from_switch(const VertexSet& selected, const SwitchSet& w)
{
    std::vector<int> in_w = w.vertices;
    std::sort(in_w.begin(), in_w.end());
    Bipartition p;
    for (int v : selected)
    {
        if (std::binary_search(in_w.begin(), in_w.end(), v))
            p.v2.push_back(v);
        else
            p.v1.push_back(v);
    }
    p.normalize();
    return p;
}

} // namespace mbsp
