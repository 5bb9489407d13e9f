#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "signed_graph.hpp"
#include "timer.hpp"

namespace mbsp {

struct GraspParams
{
    int max_iterations = 100;
    double time_limit_seconds = 300.0;
    std::uint64_t seed = 0;
};

enum class Side : int { None = 0, First = 1, Second = 2 };

inline Side other(Side s) { return s == Side::First ? Side::Second : Side::First; }

namespace detail {

/**
 * Partial bipartition with, per unselected vertex, the number of selected
 * neighbors that forbid each side. A vertex is a candidate for a side when
 * that count is zero.
 */
class BipartitionState
{
public:
    explicit BipartitionState(const SignedGraph& g) : g_(&g), side_(g.num_vertices(), Side::None), blocked_(g.num_vertices(), {0, 0}) {}

    BipartitionState(const SignedGraph& g, const Bipartition& p) : BipartitionState(g)
    {
        for (int v : p.v1)
            add(v, Side::First);
        for (int v : p.v2)
            add(v, Side::Second);
    }

    void add(int x, Side s) { update(x, s, +1); }

    void remove(int x)
    {
        const Side s = side_[x];
        update(x, s, -1);
    }

    Side side(int v) const { return side_[v]; }
    int size() const { return size_; }

    bool candidate(int v, Side s) const { return side_[v] == Side::None && blocked_[v][index(s)] == 0; }
    bool candidate(int v) const { return candidate(v, Side::First) || candidate(v, Side::Second); }

    std::vector<int> candidates(Side s) const
    {
        std::vector<int> out;
        for (int v = 0; v < g_->num_vertices(); ++v)
            if (candidate(v, s))
                out.push_back(v);
        return out;
    }

    // Adds candidates in index order, preferring side `prefer`.
    void maximalize(Side prefer = Side::First)
    {
        for (int v = 0; v < g_->num_vertices(); ++v)
        {
            if (candidate(v, prefer))
                add(v, prefer);
            else if (candidate(v, other(prefer)))
                add(v, other(prefer));
        }
    }

    Bipartition to_bipartition() const
    {
        Bipartition p;
        for (int v = 0; v < g_->num_vertices(); ++v)
        {
            if (side_[v] == Side::First)
                p.v1.push_back(v);
            else if (side_[v] == Side::Second)
                p.v2.push_back(v);
        }
        return p;
    }

private:
    static int index(Side s) { return s == Side::First ? 0 : 1; }

    void update(int x, Side s, int delta)
    {
        side_[x] = delta > 0 ? s : Side::None;
        size_ += delta;
        for (int u : g_->neighbors(x))
        {
            switch (g_->pair(x, u))
            {
            case PairKind::Parallel:
                blocked_[u][0] += delta;
                blocked_[u][1] += delta;
                break;
            case PairKind::Positive: blocked_[u][index(other(s))] += delta; break;
            case PairKind::Negative: blocked_[u][index(s)] += delta; break;
            case PairKind::None: break;
            }
        }
    }

    const SignedGraph* g_;
    std::vector<Side> side_;
    std::vector<std::array<int, 2>> blocked_;
    int size_ = 0;
};

inline void require_feasible(const SignedGraph& g, const Bipartition& p, const char* where)
{
    if (!is_feasible(g, p))
        throw std::invalid_argument(std::string(where) + ": bipartition is not feasible");
}

// Side a move inserts j into: side w when allowed there, otherwise the other side.
inline Side insertion_side(const BipartitionState& s, int j, Side w)
{
    return s.candidate(j, w) ? w : other(w);
}

} // namespace detail

// Cand(V_side): unselected vertices whose insertion into that side keeps p feasible.
inline VertexSet candidates(const SignedGraph& g, const Bipartition& p, Side side)
{
    detail::require_feasible(g, p, "candidates");
    return detail::BipartitionState(g, p).candidates(side);
}

/**
 * Randomized construction: starting empty, repeatedly choose a side with a
 * nonempty candidate set and insert a uniformly drawn candidate, until both
 * candidate sets are empty.
 */
template <class Rng>
Bipartition construct(const SignedGraph& g, Rng& rng)
{
    detail::BipartitionState state(g);
    while (true)
    {
        const auto first = state.candidates(Side::First);
        const auto second = state.candidates(Side::Second);
        if (first.empty() && second.empty())
            break;
        Side w;
        if (first.empty())
            w = Side::Second;
        else if (second.empty())
            w = Side::First;
        else
            w = std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? Side::First : Side::Second;
        const auto& pool = w == Side::First ? first : second;
        state.add(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)], w);
    }
    return state.to_bipartition();
}

/**
 * Largest strictly improving neighbor of a maximal feasible p, if any.
 *
 * Neighborhood (i) removes one vertex of a side and inserts another vertex;
 * neighborhood (ii) removes two vertices of a side and inserts two. Each move
 * is completed by adding remaining candidates in index order. Neighborhood
 * (ii) is scanned only when (i) yields no improvement.
 */
inline std::optional<Bipartition> best_improving_neighbor(const SignedGraph& g, const Bipartition& p)
{
    using detail::BipartitionState;
    const BipartitionState start(g, p);
    const int n = g.num_vertices();
    std::optional<BipartitionState> best;
    int best_size = start.size();

    auto consider = [&](BipartitionState&& s, Side w) {
        s.maximalize(w);
        if (s.size() > best_size)
        {
            best_size = s.size();
            best = std::move(s);
        }
    };

    auto free_after = [&](const BipartitionState& s, std::initializer_list<int> removed) {
        std::vector<int> out;
        for (int v = 0; v < n; ++v)
            if (s.candidate(v) && std::find(removed.begin(), removed.end(), v) == removed.end())
                out.push_back(v);
        return out;
    };

    for (Side w : {Side::First, Side::Second})
        for (int i = 0; i < n; ++i)
        {
            if (start.side(i) != w)
                continue;
            BipartitionState removed = start;
            removed.remove(i);
            const auto free = free_after(removed, {i});
            for (int j : free)
            {
                BipartitionState next = removed;
                next.add(j, detail::insertion_side(next, j, w));
                consider(std::move(next), w);
            }
        }
    if (best)
        return best->to_bipartition();

    for (Side w : {Side::First, Side::Second})
        for (int i1 = 0; i1 < n; ++i1)
        {
            if (start.side(i1) != w)
                continue;
            for (int i2 = i1 + 1; i2 < n; ++i2)
            {
                if (start.side(i2) != w)
                    continue;
                BipartitionState removed = start;
                removed.remove(i1);
                removed.remove(i2);
                const auto free = free_after(removed, {i1, i2});
                if (free.size() < 2)
                    continue;
                for (std::size_t a = 0; a < free.size(); ++a)
                {
                    BipartitionState one = removed;
                    const int j1 = free[a];
                    one.add(j1, detail::insertion_side(one, j1, w));
                    for (std::size_t b = a + 1; b < free.size(); ++b)
                    {
                        const int j2 = free[b];
                        if (!one.candidate(j2))
                            continue;
                        BipartitionState two = one;
                        two.add(j2, detail::insertion_side(two, j2, w));
                        consider(std::move(two), w);
                    }
                }
            }
        }
    if (best)
        return best->to_bipartition();
    return std::nullopt;
}

// Maximalizes p, then moves to the best improving neighbor until none exists.
inline Bipartition local_search(const SignedGraph& g, const Bipartition& p)
{
    detail::require_feasible(g, p, "local_search");
    detail::BipartitionState state(g, p);
    state.maximalize();
    Bipartition current = state.to_bipartition();
    while (auto next = best_improving_neighbor(g, current))
        current = std::move(*next);
    return current;
}

// Construction plus local search per iteration, keeping the largest solution.
inline Bipartition grasp(const SignedGraph& g, const GraspParams& params)
{
    if (params.max_iterations <= 0 || params.time_limit_seconds <= 0)
        throw std::invalid_argument("grasp: limits must be positive");
    std::mt19937_64 rng(params.seed);
    Deadline deadline(params.time_limit_seconds);
    Bipartition best;
    for (int it = 0; it < params.max_iterations && !deadline.expired(); ++it)
    {
        Bipartition candidate = local_search(g, construct(g, rng));
        if (candidate.size() > best.size())
            best = std::move(candidate);
        if (static_cast<int>(best.size()) == g.num_vertices())
            break;
    }
    return best;
}

} // namespace mbsp
