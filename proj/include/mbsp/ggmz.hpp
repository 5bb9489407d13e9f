#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "signed_graph.hpp"
#include "spanning.hpp"
#include "timer.hpp"

namespace mbsp {

struct StableSetParams
{
    int max_stall_iterations = 100;
    double time_limit_seconds = 300.0;
    std::uint64_t seed = 0;
    // Restricted candidate list width, as a fraction of the residual degree range.
    double alpha = 0.3;
};

/**
 * Switch set that makes every edge of forest t positive.
 *
 * Each tree is rooted at its lowest vertex (kept outside W); a child's label
 * is its parent's label flipped across a negative edge. Throws
 * std::invalid_argument when t has a cycle.
 */
inline SwitchSet switch_set_from_forest(const SignedGraph& t)
{
    const int n = t.num_vertices();
    if (t.num_parallel() > 0 || t.num_edges() != n - count_components(t))
        throw std::invalid_argument("switch_set_from_forest: input is not a forest");
    std::vector<int> label(n, -1);
    std::vector<int> stack;
    for (int root = 0; root < n; ++root)
    {
        if (label[root] >= 0)
            continue;
        label[root] = 0;
        stack.assign(1, root);
        while (!stack.empty())
        {
            const int u = stack.back();
            stack.pop_back();
            for (int v : t.neighbors(u))
            {
                if (label[v] >= 0)
                    continue;
                label[v] = label[u] ^ (t.pair(u, v) == PairKind::Negative ? 1 : 0);
                stack.push_back(v);
            }
        }
    }
    SwitchSet w;
    for (int v = 0; v < n; ++v)
        if (label[v] == 1)
            w.vertices.push_back(v);
    return w;
}

namespace detail {

// Stable set under construction with per-vertex counts of neighbors inside it.
class StableSetState
{
public:
    explicit StableSetState(const SignedGraph& h) : h_(h), in_(h.num_vertices(), false), tight_(h.num_vertices(), 0) {}

    void add(int v)
    {
        in_[v] = true;
        ++size_;
        for (int u : h_.neighbors(v))
            ++tight_[u];
    }

    void remove(int v)
    {
        in_[v] = false;
        --size_;
        for (int u : h_.neighbors(v))
            --tight_[u];
    }

    bool contains(int v) const { return in_[v]; }
    int tightness(int v) const { return tight_[v]; }
    int size() const { return size_; }

    void fill_free()
    {
        for (int v = 0; v < h_.num_vertices(); ++v)
            if (!in_[v] && tight_[v] == 0)
                add(v);
    }

    VertexSet members() const
    {
        VertexSet out;
        for (int v = 0; v < h_.num_vertices(); ++v)
            if (in_[v])
                out.push_back(v);
        return out;
    }

private:
    const SignedGraph& h_;
    std::vector<bool> in_;
    std::vector<int> tight_;
    int size_ = 0;
};

template <class Rng>
void construct_stable_set(const SignedGraph& h, double alpha, Rng& rng, StableSetState& state)
{
    const int n = h.num_vertices();
    std::vector<bool> residual(n, true);
    std::vector<int> degree(n);
    for (int v = 0; v < n; ++v)
        degree[v] = static_cast<int>(h.neighbors(v).size());
    int remaining = n;
    std::vector<int> rcl;
    while (remaining > 0)
    {
        int lo = n, hi = -1;
        for (int v = 0; v < n; ++v)
            if (residual[v])
            {
                lo = std::min(lo, degree[v]);
                hi = std::max(hi, degree[v]);
            }
        const double threshold = lo + alpha * (hi - lo);
        rcl.clear();
        for (int v = 0; v < n; ++v)
            if (residual[v] && degree[v] <= threshold)
                rcl.push_back(v);
        const int pick = rcl[std::uniform_int_distribution<std::size_t>(0, rcl.size() - 1)(rng)];
        state.add(pick);
        auto drop = [&](int v) {
            residual[v] = false;
            --remaining;
            for (int u : h.neighbors(v))
                if (residual[u])
                    --degree[u];
        };
        drop(pick);
        for (int u : h.neighbors(pick))
            if (residual[u])
                drop(u);
    }
}

// (1,2)-exchanges until none applies: drop x, add two non-adjacent vertices whose only member neighbor is x.
inline void improve_stable_set(const SignedGraph& h, StableSetState& state)
{
    const int n = h.num_vertices();
    bool improved = true;
    std::vector<int> one_tight;
    while (improved)
    {
        improved = false;
        for (int x = 0; x < n && !improved; ++x)
        {
            if (!state.contains(x))
                continue;
            one_tight.clear();
            for (int u : h.neighbors(x))
                if (!state.contains(u) && state.tightness(u) == 1)
                    one_tight.push_back(u);
            for (std::size_t a = 0; a < one_tight.size() && !improved; ++a)
                for (std::size_t b = a + 1; b < one_tight.size(); ++b)
                {
                    if (h.pair(one_tight[a], one_tight[b]) != PairKind::None)
                        continue;
                    state.remove(x);
                    state.add(one_tight[a]);
                    state.add(one_tight[b]);
                    state.fill_free();
                    improved = true;
                    break;
                }
        }
    }
}

} // namespace detail

/**
 * GRASP for a maximal stable set of h, ignoring edge signs.
 *
 * Construction draws uniformly from the vertices of lowest residual degree
 * (within alpha of the degree range); local search applies (1,2)-exchanges.
 * Stops after max_stall_iterations without a new best or at the time limit.
 */
inline VertexSet stable_set_grasp(const SignedGraph& h, const StableSetParams& params)
{
    if (params.max_stall_iterations <= 0 || params.time_limit_seconds <= 0)
        throw std::invalid_argument("stable_set_grasp: limits must be positive");
    const int n = h.num_vertices();
    if (n == 0)
        return {};
    std::mt19937_64 rng(params.seed);
    Deadline deadline(params.time_limit_seconds);
    VertexSet best;
    int stall = 0;
    while (stall < params.max_stall_iterations && !deadline.expired())
    {
        detail::StableSetState state(h);
        detail::construct_stable_set(h, params.alpha, rng, state);
        detail::improve_stable_set(h, state);
        if (state.size() > static_cast<int>(best.size()))
        {
            best = state.members();
            stall = 0;
            if (static_cast<int>(best.size()) == n)
                break;
        }
        else
            ++stall;
    }
    return best;
}

/**
 * Greedy GGMZ heuristic.
 *
 * Builds a spanning forest T, switches g so T is all positive, and takes a
 * maximal stable set I of the remaining negative edges. Inside I every
 * positive edge joins equal labels and every negative edge crosses, so
 * (I minus W, I within W) is feasible.
 */
inline Bipartition ggmz(const SignedGraph& g, TreeStrategy strategy, const StableSetParams& params)
{
    std::mt19937_64 tree_rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
    const SignedGraph forest = spanning_forest(g, strategy, tree_rng);
    const SwitchSet w = switch_set_from_forest(forest);
    const VertexSet stable = stable_set_grasp(negative_part(switched(g, w)), params);
    return bipartition_from_switch(stable, w);
}

} // namespace mbsp
