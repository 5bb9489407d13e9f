#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "lp.hpp"
#include "signed_graph.hpp"

namespace mbsp {

enum class CutKind { ParallelEdge, OddNegativeCycle, Clique, NegativeClique, LiftedOddHole, LiftedCycle };

inline constexpr std::array<CutKind, 6> all_cut_kinds = {CutKind::ParallelEdge, CutKind::OddNegativeCycle, CutKind::Clique,
                                                         CutKind::NegativeClique, CutKind::LiftedOddHole, CutKind::LiftedCycle};

inline std::string_view to_string(CutKind k)
{
    switch (k)
    {
    case CutKind::ParallelEdge: return "parallel_edge";
    case CutKind::OddNegativeCycle: return "odd_neg_cycle";
    case CutKind::Clique: return "clique";
    case CutKind::NegativeClique: return "neg_clique";
    case CutKind::LiftedOddHole: return "lifted_odd_hole";
    case CutKind::LiftedCycle: return "lifted_cycle";
    }
    return "?";
}

// Minimum violation for a cut to count as violated.
inline constexpr double violation_tolerance = 1e-4;

struct CutTerm
{
    int vertex;
    int coeff;

    friend bool operator==(const CutTerm&, const CutTerm&) = default;
};

/**
 * Inequality sum coeff * y_vertex <= rhs over vertex variables.
 * Terms are sorted by vertex. Cycle-based kinds keep the cycle in traversal
 * order for branching.
 */
struct Cut
{
    std::vector<CutTerm> terms;
    int rhs = 0;
    CutKind kind = CutKind::OddNegativeCycle;
    std::vector<int> support_cycle;

    double lhs(const std::vector<double>& y) const
    {
        double sum = 0.0;
        for (const auto& t : terms)
            sum += t.coeff * y[t.vertex];
        return sum;
    }

    double violation(const std::vector<double>& y) const { return lhs(y) - rhs; }

    lp::Row to_row() const
    {
        lp::Row row;
        row.relation = lp::Relation::LessEqual;
        row.rhs = rhs;
        for (const auto& t : terms)
            row.terms.push_back({t.vertex, static_cast<double>(t.coeff)});
        return row;
    }

    // Dedup key: (vertex, coeff) pairs then rhs.
    std::vector<int> key() const
    {
        std::vector<int> k;
        k.reserve(2 * terms.size() + 1);
        for (const auto& t : terms)
        {
            k.push_back(t.vertex);
            k.push_back(t.coeff);
        }
        k.push_back(rhs);
        return k;
    }
};

// y(S) <= rhs with unit coefficients.
inline Cut unit_cut(std::vector<int> vertices, int rhs, CutKind kind)
{
    std::sort(vertices.begin(), vertices.end());
    Cut c;
    c.rhs = rhs;
    c.kind = kind;
    for (int v : vertices)
        c.terms.push_back({v, 1});
    return c;
}

// Cycle inequality y(C) <= |C| - 1 for an odd negative cycle given in traversal order.
inline Cut cycle_cut(const std::vector<int>& cycle)
{
    Cut c = unit_cut(cycle, static_cast<int>(cycle.size()) - 1,
                     cycle.size() == 2 ? CutKind::ParallelEdge : CutKind::OddNegativeCycle);
    if (cycle.size() > 2)
        c.support_cycle = cycle;
    return c;
}

/**
 * Deduplicated store of generated cuts with FIFO eviction at capacity.
 */
class CutPool
{
public:
    explicit CutPool(std::size_t capacity = 50000) : capacity_(capacity) {}

    // False when an equal cut is already stored.
    bool insert(const Cut& cut)
    {
        auto key = cut.key();
        if (keys_.count(key))
            return false;
        if (capacity_ == 0)
            return false;
        if (cuts_.size() == capacity_)
        {
            keys_.erase(cuts_.front().key());
            cuts_.pop_front();
        }
        keys_.insert(std::move(key));
        cuts_.push_back(cut);
        return true;
    }

    bool contains(const Cut& cut) const { return keys_.count(cut.key()) > 0; }
    std::size_t size() const { return cuts_.size(); }
    std::size_t capacity() const { return capacity_; }
    const std::deque<Cut>& cuts() const { return cuts_; }

    // Up to `limit` stored cuts violated by at least the tolerance, most violated first.
    std::vector<Cut> scan(const std::vector<double>& y, std::size_t limit = 100) const
    {
        std::vector<std::pair<double, std::size_t>> hits;
        for (std::size_t i = 0; i < cuts_.size(); ++i)
        {
            const double v = cuts_[i].violation(y);
            if (v >= violation_tolerance)
                hits.emplace_back(v, i);
        }
        std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        if (hits.size() > limit)
            hits.resize(limit);
        std::vector<Cut> out;
        out.reserve(hits.size());
        for (const auto& h : hits)
            out.push_back(cuts_[h.second]);
        return out;
    }

private:
    std::size_t capacity_;
    std::deque<Cut> cuts_;
    std::set<std::vector<int>> keys_;
};

inline std::vector<Cut> scan_pool(const CutPool& pool, const std::vector<double>& y, std::size_t limit = 100)
{
    return pool.scan(y, limit);
}

namespace detail {

/**
 * Reduces a closed walk with an odd number of negative steps to a simple
 * cycle with the same property. walk[t] -> walk[t+1 mod k] is step t and
 * negative[t] marks its sign. At a repeated vertex the walk splits into two
 * closed walks whose parities add up, so one of them stays odd.
 */
inline std::vector<int> odd_simple_cycle(std::vector<int> walk, std::vector<bool> negative)
{
    while (true)
    {
        int i = -1, j = -1;
        {
            std::vector<std::pair<int, int>> first;
            for (int t = 0; t < static_cast<int>(walk.size()) && j < 0; ++t)
            {
                for (const auto& [vertex, pos] : first)
                    if (vertex == walk[t])
                    {
                        i = pos;
                        j = t;
                        break;
                    }
                first.emplace_back(walk[t], t);
            }
        }
        if (j < 0)
            return walk;
        std::vector<int> inner_walk(walk.begin() + i, walk.begin() + j);
        std::vector<bool> inner_neg(negative.begin() + i, negative.begin() + j);
        const bool inner_odd = std::count(inner_neg.begin(), inner_neg.end(), true) % 2 == 1;
        if (inner_odd)
        {
            walk = std::move(inner_walk);
            negative = std::move(inner_neg);
            continue;
        }
        std::vector<int> outer_walk(walk.begin() + j, walk.end());
        outer_walk.insert(outer_walk.end(), walk.begin(), walk.begin() + i);
        std::vector<bool> outer_neg(negative.begin() + j, negative.end());
        outer_neg.insert(outer_neg.end(), negative.begin(), negative.begin() + i);
        walk = std::move(outer_walk);
        negative = std::move(outer_neg);
    }
}

struct Arc
{
    int to;
    double weight;
    bool flips;
};

// Shortest path from (source, 0) to (source, 1) in a two-layer graph; node id = 2 * vertex + layer.
class LayeredGraph
{
public:
    explicit LayeredGraph(int n) : arcs_(2 * n) {}

    // Edge u-v; `flips` edges connect opposite layers.
    void add_edge(int u, int v, double weight, bool flips)
    {
        for (int layer = 0; layer < 2; ++layer)
        {
            const int from = 2 * u + layer;
            const int to = 2 * v + (flips ? 1 - layer : layer);
            arcs_[from].push_back({to, weight, flips});
            arcs_[to].push_back({from, weight, flips});
        }
    }

    // Closed walk (vertices, negative flags) through source with an odd number of flips,
    // if one lighter than `cutoff` exists.
    std::optional<std::pair<std::vector<int>, std::vector<bool>>> shortest_odd_walk(int source, double cutoff) const
    {
        const int nodes = static_cast<int>(arcs_.size());
        std::vector<double> dist(nodes, std::numeric_limits<double>::infinity());
        std::vector<int> pred(nodes, -1);
        std::vector<bool> pred_flip(nodes, false);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        const int start = 2 * source, target = 2 * source + 1;
        dist[start] = 0.0;
        heap.emplace(0.0, start);
        while (!heap.empty())
        {
            const auto [d, x] = heap.top();
            heap.pop();
            if (d > dist[x])
                continue;
            if (d >= cutoff)
                return std::nullopt;
            if (x == target)
                break;
            for (const auto& a : arcs_[x])
            {
                const double nd = d + a.weight;
                if (nd < dist[a.to] - 1e-15)
                {
                    dist[a.to] = nd;
                    pred[a.to] = x;
                    pred_flip[a.to] = a.flips;
                    heap.emplace(nd, a.to);
                }
            }
        }
        if (!(dist[target] < cutoff))
            return std::nullopt;
        std::vector<int> nodes_rev;
        std::vector<bool> flips_rev;
        for (int x = target; x != start; x = pred[x])
        {
            nodes_rev.push_back(x);
            flips_rev.push_back(pred_flip[x]);
        }
        // walk: source, ..., last vertex before returning to source
        std::vector<int> walk{source};
        std::vector<bool> negative;
        for (int k = static_cast<int>(nodes_rev.size()) - 1; k >= 0; --k)
        {
            negative.push_back(flips_rev[k]);
            if (k > 0)
                walk.push_back(nodes_rev[k] / 2);
        }
        return std::make_pair(std::move(walk), std::move(negative));
    }

private:
    std::vector<std::vector<Arc>> arcs_;
};

inline void push_unique(std::vector<Cut>& out, std::set<std::vector<int>>& keys, Cut cut)
{
    if (keys.insert(cut.key()).second)
        out.push_back(std::move(cut));
}

inline void sort_and_cap(std::vector<Cut>& cuts, const std::vector<double>& y, std::size_t limit)
{
    std::stable_sort(cuts.begin(), cuts.end(), [&](const Cut& a, const Cut& b) { return a.violation(y) > b.violation(y); });
    if (cuts.size() > limit)
        cuts.resize(limit);
}

} // namespace detail

/**
 * Exact separation of odd negative cycle inequalities y(C) <= |C| - 1.
 *
 * Edges of parallel pairs are left out: a cycle through a parallel pair is
 * implied by that pair's row. A non-parallel edge u-v weighs
 * (2 - y_u - y_v) / 2, so a cycle weighs |C| - y(C) and is violated exactly
 * when it weighs less than 1. Positive edges stay in a layer, negative edges
 * cross layers; a path v -> v' is an odd negative closed walk through v.
 */
inline std::vector<Cut> separate_odd_negative_cycle(const SignedGraph& g, const std::vector<double>& y, std::size_t limit = 100)
{
    const int n = g.num_vertices();
    detail::LayeredGraph layered(n);
    for (const auto& e : g.edges())
    {
        if (g.is_parallel(e.u, e.v))
            continue;
        const double w = std::max(0.0, (2.0 - y[e.u] - y[e.v]) / 2.0);
        layered.add_edge(e.u, e.v, w, e.sign == Sign::Negative);
    }
    const double cutoff = 1.0 - violation_tolerance + 1e-12;
    std::vector<Cut> out;
    std::set<std::vector<int>> keys;
    for (int v = 0; v < n; ++v)
    {
        if (1.0 - y[v] >= cutoff)
            continue;
        auto walk = layered.shortest_odd_walk(v, cutoff);
        if (!walk)
            continue;
        const auto cycle = detail::odd_simple_cycle(std::move(walk->first), std::move(walk->second));
        Cut cut = cycle_cut(cycle);
        if (cut.violation(y) >= violation_tolerance - 1e-12)
            detail::push_unique(out, keys, std::move(cut));
    }
    detail::sort_and_cap(out, y, limit);
    return out;
}

// Graph of parallel pairs: two vertices conflict when both signs join them.
class ConflictGraph
{
public:
    explicit ConflictGraph(const SignedGraph& g) : n_(g.num_vertices()), adj_(g.num_vertices())
    {
        for (const auto& [u, v] : g.parallel_pairs())
        {
            adj_[u].push_back(v);
            adj_[v].push_back(u);
        }
        for (auto& a : adj_)
            std::sort(a.begin(), a.end());
        g_ = &g;
    }

    int num_vertices() const { return n_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    bool adjacent(int u, int v) const { return g_->is_parallel(u, v); }
    bool empty() const { return g_->num_parallel() == 0; }

private:
    int n_;
    std::vector<std::vector<int>> adj_;
    const SignedGraph* g_;
};

/**
 * Clique inequalities y(K) <= 1 over the conflict graph. From each seed in
 * decreasing y order, grows a clique by the largest-y common neighbor.
 */
inline std::vector<Cut> separate_clique(const SignedGraph& g, const std::vector<double>& y, std::size_t limit = 100)
{
    const ConflictGraph h(g);
    std::vector<Cut> out;
    if (h.empty())
        return out;
    std::set<std::vector<int>> keys;
    const int n = g.num_vertices();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return y[a] > y[b]; });
    for (int seed : order)
    {
        if (y[seed] <= 1e-9)
            break;
        std::vector<int> clique{seed};
        std::vector<int> common = h.neighbors(seed);
        double sum = y[seed];
        while (!common.empty())
        {
            int pick = common.front();
            for (int c : common)
                if (y[c] > y[pick])
                    pick = c;
            clique.push_back(pick);
            sum += y[pick];
            std::vector<int> next;
            for (int c : common)
                if (c != pick && h.adjacent(c, pick))
                    next.push_back(c);
            common = std::move(next);
        }
        if (sum > 1.0 + violation_tolerance)
            detail::push_unique(out, keys, unit_cut(clique, 1, clique.size() == 2 ? CutKind::ParallelEdge : CutKind::Clique));
    }
    detail::sort_and_cap(out, y, limit);
    return out;
}

enum class LiftMode { Balanced, Stable };

/**
 * max sum weight[u] * [u in S] over vertex sets S of `vertices` that contain
 * `forced`, where S is balanced in g (Balanced) or has no parallel pair
 * (Stable). Depth-first enumeration with a bound; gives up after `budget`
 * search nodes. Stops early once `ceiling` is reached.
 */
inline std::optional<int> max_weight_containing(const SignedGraph& g, const std::vector<int>& vertices, const std::vector<int>& weight,
                                                int forced, LiftMode mode, long budget = 1L << 18,
                                                int ceiling = std::numeric_limits<int>::max())
{
    std::vector<int> order;
    std::vector<int> w;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] != forced && weight[i] > 0)
        {
            order.push_back(vertices[i]);
            w.push_back(weight[i]);
        }
    std::vector<std::size_t> idx(order.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
    std::vector<int> ov, ow;
    for (auto i : idx)
    {
        ov.push_back(order[i]);
        ow.push_back(w[i]);
    }
    std::vector<int> suffix(ov.size() + 1, 0);
    for (int i = static_cast<int>(ov.size()) - 1; i >= 0; --i)
        suffix[i] = suffix[i + 1] + ow[i];

    std::vector<std::pair<int, int>> chosen{{forced, 0}};  // (vertex, label)
    int best = -1;
    long visited = 0;
    bool exhausted = false;

    auto compatible = [&](int v, int label) {
        for (const auto& [u, lu] : chosen)
        {
            const auto kind = g.pair(u, v);
            if (kind == PairKind::None)
                continue;
            if (kind == PairKind::Parallel)
                return false;
            if (mode == LiftMode::Balanced && (kind == PairKind::Positive) != (lu == label))
                return false;
        }
        return true;
    };

    std::function<void(std::size_t, int)> dfs = [&](std::size_t i, int value) {
        if (exhausted || best >= ceiling)
            return;
        if (++visited > budget)
        {
            exhausted = true;
            return;
        }
        if (value + suffix[i] <= best)
            return;
        if (i == ov.size())
        {
            best = value;
            return;
        }
        const int labels = mode == LiftMode::Balanced ? 2 : 1;
        for (int label = 0; label < labels; ++label)
        {
            if (!compatible(ov[i], label))
                continue;
            chosen.emplace_back(ov[i], label);
            dfs(i + 1, value + ow[i]);
            chosen.pop_back();
        }
        dfs(i + 1, value);
    };
    dfs(0, 0);
    if (exhausted)
        return std::nullopt;
    return best;
}

namespace detail {

// Sequential lifting of vertices in `candidates` into `cut` (rhs unchanged).
inline bool lift_into(const SignedGraph& g, Cut& cut, const std::vector<int>& candidates, LiftMode mode)
{
    bool lifted = false;
    for (int v : candidates)
    {
        std::vector<int> vertices{v};
        std::vector<int> weights{0};
        for (const auto& t : cut.terms)
        {
            vertices.push_back(t.vertex);
            weights.push_back(t.coeff);
        }
        const auto z = max_weight_containing(g, vertices, weights, v, mode, 1L << 18, cut.rhs);
        if (!z)
            continue;
        const int alpha = cut.rhs - *z;
        if (alpha <= 0)
            continue;
        cut.terms.push_back({v, alpha});
        std::sort(cut.terms.begin(), cut.terms.end(), [](const CutTerm& a, const CutTerm& b) { return a.vertex < b.vertex; });
        lifted = true;
    }
    return lifted;
}

// Vertices outside `support` adjacent to at least two of its members, by decreasing adjacency then index.
template <class Adjacent>
std::vector<int> lifting_candidates(int n, const std::vector<int>& support, Adjacent adjacent)
{
    std::vector<bool> in(n, false);
    for (int v : support)
        in[v] = true;
    std::vector<std::pair<int, int>> scored;
    for (int v = 0; v < n; ++v)
    {
        if (in[v])
            continue;
        int count = 0;
        for (int u : support)
            if (adjacent(u, v))
                ++count;
        if (count >= 2)
            scored.emplace_back(-count, v);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<int> out;
    for (const auto& s : scored)
        out.push_back(s.second);
    return out;
}

} // namespace detail

inline constexpr std::size_t max_lifted_cycle_length = 20;

/**
 * Strengthens an odd negative cycle inequality by sequential lifting. A
 * candidate v gets coefficient rhs - z*, where z* is the largest left-hand
 * side over balanced subsets of the current support plus v that contain v.
 * Candidates whose enumeration runs out of budget are skipped.
 */
inline Cut lift_odd_negative_cycle(const SignedGraph& g, const Cut& cut)
{
    Cut out = cut;
    std::vector<int> cycle;
    for (const auto& t : cut.terms)
        cycle.push_back(t.vertex);
    if (cycle.size() > max_lifted_cycle_length || cycle.size() < 3)
        return out;
    const auto candidates = detail::lifting_candidates(g.num_vertices(), cycle, [&](int u, int v) { return g.pair(u, v) != PairKind::None; });
    if (detail::lift_into(g, out, candidates, LiftMode::Balanced))
        out.kind = CutKind::LiftedCycle;
    return out;
}

namespace detail {

// Shortcuts chords of an odd cycle in the conflict graph until it is chordless.
inline std::vector<int> odd_hole_from_cycle(const ConflictGraph& h, std::vector<int> cycle)
{
    bool changed = true;
    while (changed && cycle.size() > 3)
    {
        changed = false;
        const int k = static_cast<int>(cycle.size());
        for (int i = 0; i < k && !changed; ++i)
            for (int j = i + 2; j < k && !changed; ++j)
            {
                if (i == 0 && j == k - 1)
                    continue;
                if (!h.adjacent(cycle[i], cycle[j]))
                    continue;
                // cycle[i..j] closes through the chord; it is odd when j - i + 1 is odd
                std::vector<int> next;
                if ((j - i + 1) % 2 == 1)
                    next.assign(cycle.begin() + i, cycle.begin() + j + 1);
                else
                {
                    next.assign(cycle.begin() + j, cycle.end());
                    next.insert(next.end(), cycle.begin(), cycle.begin() + i + 1);
                }
                cycle = std::move(next);
                changed = true;
            }
    }
    return cycle;
}

} // namespace detail

/**
 * Lifted odd hole inequalities of the conflict graph. Odd cycles are found
 * as light paths v -> v' in its bipartite double cover with edge weight
 * max(0, 1 - y_u - y_v), shortcut to holes, then lifted by enumeration of
 * stable sets of the conflict graph.
 */
inline std::vector<Cut> separate_lifted_odd_hole(const SignedGraph& g, const std::vector<double>& y, std::size_t limit = 100)
{
    const ConflictGraph h(g);
    std::vector<Cut> out;
    if (h.empty())
        return out;
    const int n = g.num_vertices();
    detail::LayeredGraph layered(n);
    for (const auto& [u, v] : g.parallel_pairs())
        layered.add_edge(u, v, std::max(0.0, 1.0 - y[u] - y[v]), true);
    std::set<std::vector<int>> keys;
    std::set<std::vector<int>> holes_seen;
    for (int v = 0; v < n; ++v)
    {
        if (h.neighbors(v).size() < 2 || y[v] <= 1e-9)
            continue;
        auto walk = layered.shortest_odd_walk(v, 1.0);
        if (!walk)
            continue;
        auto cycle = detail::odd_simple_cycle(std::move(walk->first), std::move(walk->second));
        if (cycle.size() < 3)
            continue;
        auto hole = detail::odd_hole_from_cycle(h, std::move(cycle));
        auto sorted_hole = hole;
        std::sort(sorted_hole.begin(), sorted_hole.end());
        if (!holes_seen.insert(sorted_hole).second)
            continue;
        Cut cut = unit_cut(hole, (static_cast<int>(hole.size()) - 1) / 2, CutKind::LiftedOddHole);
        const auto candidates = detail::lifting_candidates(n, hole, [&](int a, int b) { return h.adjacent(a, b); });
        detail::lift_into(g, cut, candidates, LiftMode::Stable);
        if (cut.violation(y) >= violation_tolerance)
            detail::push_unique(out, keys, std::move(cut));
    }
    detail::sort_and_cap(out, y, limit);
    return out;
}

} // namespace mbsp
