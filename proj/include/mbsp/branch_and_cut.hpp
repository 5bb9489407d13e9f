#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "cuts.hpp"
#include "grasp.hpp"
#include "lp.hpp"
#include "signed_graph.hpp"
#include "timer.hpp"

namespace mbsp {

inline constexpr double integrality_tolerance = 1e-6;
inline constexpr double binding_tolerance = 1e-6;

struct Formulation
{
    lp::LinearProgram lp;
    // One cut per row of lp, in order.
    std::vector<Cut> cuts;
};

namespace detail {

// Grows a clique from `seed` by adding, in index order, vertices adjacent to all members.
template <class Adjacent>
std::vector<int> grow_clique(int n, std::vector<int> seed, Adjacent adjacent)
{
    for (int v = 0; v < n; ++v)
    {
        if (std::find(seed.begin(), seed.end(), v) != seed.end())
            continue;
        if (std::all_of(seed.begin(), seed.end(), [&](int u) { return adjacent(u, v); }))
            seed.push_back(v);
    }
    std::sort(seed.begin(), seed.end());
    return seed;
}

// Greedy clique cover of the edges accepted by `adjacent`, scanning uncovered edges in (u, v) order.
template <class Adjacent>
std::vector<std::vector<int>> greedy_clique_cover(const SignedGraph& g, Adjacent adjacent)
{
    const int n = g.num_vertices();
    std::vector<std::vector<int>> cliques;
    std::set<std::pair<int, int>> covered;
    for (int u = 0; u < n; ++u)
        for (int v : g.neighbors(u))
        {
            if (v <= u || !adjacent(u, v) || covered.count({u, v}))
                continue;
            auto k = grow_clique(n, {u, v}, adjacent);
            for (std::size_t a = 0; a < k.size(); ++a)
                for (std::size_t b = a + 1; b < k.size(); ++b)
                    covered.insert({k[a], k[b]});
            cliques.push_back(std::move(k));
        }
    return cliques;
}

} // namespace detail

/**
 * Root formulation: max y(V) over [0,1]^n with
 *  - clique rows y(K) <= 1 covering every parallel pair (pairs left alone keep y_i + y_j <= 1),
 *  - odd negative cycle rows from one shortest odd closed walk per vertex (at most 2n),
 *  - negative clique rows y(K) <= 2 for greedy cliques of size >= 3 among negative-only pairs.
 */
inline Formulation initial_formulation(const SignedGraph& g)
{
    const int n = g.num_vertices();
    Formulation f;
    for (int v = 0; v < n; ++v)
        f.lp.add_variable(0.0, 1.0, 1.0);
    std::set<std::vector<int>> keys;
    auto add = [&](Cut cut) {
        if (keys.insert(cut.key()).second)
            f.cuts.push_back(std::move(cut));
    };

    for (auto& k : detail::greedy_clique_cover(g, [&](int a, int b) { return g.is_parallel(a, b); }))
        add(unit_cut(k, 1, k.size() == 2 ? CutKind::ParallelEdge : CutKind::Clique));

    detail::LayeredGraph layered(n);
    for (const auto& e : g.edges())
        if (!g.is_parallel(e.u, e.v))
            layered.add_edge(e.u, e.v, 1.0, e.sign == Sign::Negative);
    int cycles = 0;
    for (int v = 0; v < n && cycles < 2 * n; ++v)
    {
        auto walk = layered.shortest_odd_walk(v, std::numeric_limits<double>::infinity());
        if (!walk)
            continue;
        const auto before = f.cuts.size();
        add(cycle_cut(detail::odd_simple_cycle(std::move(walk->first), std::move(walk->second))));
        cycles += static_cast<int>(f.cuts.size() - before);
    }

    for (auto& k : detail::greedy_clique_cover(g, [&](int a, int b) { return g.pair(a, b) == PairKind::Negative; }))
        if (k.size() >= 3)
            add(unit_cut(k, 2, CutKind::NegativeClique));

    for (const auto& c : f.cuts)
        f.lp.rows.push_back(c.to_row());
    return f;
}

/**
 * Greedy rounding: visits vertices by decreasing y (ties by index) and
 * inserts each into the first side that keeps the bipartition feasible.
 */
inline Bipartition rounding_heuristic(const SignedGraph& g, const std::vector<double>& y)
{
    const int n = g.num_vertices();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return y[a] > y[b]; });
    detail::BipartitionState state(g);
    for (int v : order)
    {
        if (state.candidate(v, Side::First))
            state.add(v, Side::First);
        else if (state.candidate(v, Side::Second))
            state.add(v, Side::Second);
    }
    return state.to_bipartition();
}

enum class Fixing : std::int8_t { Free = -1, Zero = 0, One = 1 };

struct SearchNode
{
    std::vector<Fixing> fixings;
    std::vector<lp::Row> extra_rows;
    // Upper bound on every integral completion (the parent's LP value).
    double bound = std::numeric_limits<double>::infinity();
    int depth = 0;
    // Ids of non-root cuts in this node's LP.
    std::vector<int> active;
    long id = 0;
    long parent = -1;
};

enum class Branching { Cycle, Standard };

inline bool is_integral(const std::vector<double>& y)
{
    return std::all_of(y.begin(), y.end(), [](double v) { return std::abs(v - std::round(v)) <= integrality_tolerance; });
}

/**
 * Children of `node` at the fractional point y.
 *
 * `cuts` are the cuts in the node LP. Among cycle-carrying cuts that are
 * binding at y and contain a fractional vertex, takes the smallest cycle C
 * and its most fractional vertex i; with D = C minus i the children are
 *   y_i = 0 and D fixed to one,
 *   y_i = 1 and y(D) <= |D| - 1,
 *   y_i = 0 and y(D) <= |D| - 1.
 * Without such a cycle (or in Standard mode) branches on the most fractional variable.
 */
inline std::vector<SearchNode> branch(const SignedGraph& g, const SearchNode& node, const std::vector<const Cut*>& cuts,
                                      const std::vector<double>& y, Branching mode = Branching::Cycle, bool include_lifted = true)
{
    const int n = g.num_vertices();
    auto fractional = [&](int v) { return std::abs(y[v] - std::round(y[v])) > integrality_tolerance; };
    auto most_fractional = [&](const std::vector<int>& vs) {
        int best = -1;
        for (int v : vs)
            if (fractional(v) && (best < 0 || std::abs(y[v] - 0.5) < std::abs(y[best] - 0.5)))
                best = v;
        return best;
    };
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    if (most_fractional(all) < 0)
        throw std::invalid_argument("branch: LP point is integral");

    auto child = [&](const SearchNode& from) {
        SearchNode c = from;
        c.depth = from.depth + 1;
        c.parent = from.id;
        return c;
    };

    const Cut* chosen = nullptr;
    std::vector<int> chosen_sorted;
    if (mode == Branching::Cycle)
        for (const Cut* cut : cuts)
        {
            if (cut->support_cycle.empty())
                continue;
            if (cut->kind == CutKind::LiftedCycle && !include_lifted)
                continue;
            const auto& c = cut->support_cycle;
            // base row of a lifted cut is the plain cycle inequality
            double sum = 0.0;
            for (int v : c)
                sum += y[v];
            if (std::abs(static_cast<double>(c.size()) - 1.0 - sum) > binding_tolerance)
                continue;
            if (std::none_of(c.begin(), c.end(), fractional))
                continue;
            auto sorted = c;
            std::sort(sorted.begin(), sorted.end());
            if (!chosen || sorted.size() < chosen_sorted.size() || (sorted.size() == chosen_sorted.size() && sorted < chosen_sorted))
            {
                chosen = cut;
                chosen_sorted = std::move(sorted);
            }
        }

    std::vector<SearchNode> out;
    if (!chosen)
    {
        const int i = most_fractional(all);
        for (Fixing f : {Fixing::Zero, Fixing::One})
        {
            SearchNode c = child(node);
            c.fixings[i] = f;
            out.push_back(std::move(c));
        }
        return out;
    }

    const int i = most_fractional(chosen_sorted);
    std::vector<int> rest;
    for (int v : chosen_sorted)
        if (v != i)
            rest.push_back(v);
    lp::Row row;
    row.relation = lp::Relation::LessEqual;
    row.rhs = static_cast<double>(rest.size()) - 1.0;
    for (int v : rest)
        row.terms.push_back({v, 1.0});

    SearchNode a = child(node);
    a.fixings[i] = Fixing::Zero;
    for (int v : rest)
        a.fixings[v] = Fixing::One;
    SearchNode b = child(node);
    b.fixings[i] = Fixing::One;
    b.extra_rows.push_back(row);
    SearchNode c = child(node);
    c.fixings[i] = Fixing::Zero;
    c.extra_rows.push_back(row);
    out.push_back(std::move(a));
    out.push_back(std::move(b));
    out.push_back(std::move(c));
    return out;
}

enum class SolveStatus { Optimal, TimeLimit };

inline std::string_view to_string(SolveStatus s) { return s == SolveStatus::Optimal ? "optimal" : "time_limit"; }

struct NodeEvent
{
    long id;
    long parent;
    int depth;
    // Bound inherited from the parent and the first LP value at this node.
    double parent_bound;
    double lp_bound;
    bool infeasible;
};

struct SolveParams
{
    double time_limit_seconds = 3600.0;
    int max_cut_rounds = 10;
    int max_cuts_per_round = 100;
    Branching branching = Branching::Cycle;
    bool lifted_cycles_in_branching = true;
    std::uint64_t seed = 0;
    std::function<void(const Cut&)> on_cut;
    std::function<void(const NodeEvent&)> on_node;
    std::function<void(const Bipartition&)> on_incumbent;
    std::function<void(const SearchNode&, const std::vector<SearchNode>&)> on_branch;
};

struct SolveStats
{
    long nodes = 0;
    long lp_solves = 0;
    long pool_hits = 0;
    std::map<CutKind, long> cuts_by_kind;
    double wall_time = 0.0;
};

struct SolveResult
{
    Bipartition best;
    int lower_bound = 0;
    double upper_bound = 0.0;
    SolveStatus status = SolveStatus::Optimal;
    SolveStats stats;

    double gap_pct() const
    {
        if (lower_bound <= 0)
            return upper_bound > 0 ? 100.0 : 0.0;
        return 100.0 * (upper_bound - lower_bound) / lower_bound;
    }
};

namespace detail {

inline bool encodes_balanced(const SignedGraph& g, const std::vector<double>& y, Bipartition& out)
{
    VertexSet s;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (y[v] > 0.5)
            s.push_back(v);
    const auto sub = induced(g, s);
    const auto w = is_balanced(sub.graph);
    if (!w)
        return false;
    VertexSet w_original;
    for (int v : w->vertices)
        w_original.push_back(sub.original[v]);
    out = bipartition_from_switch(s, SwitchSet{w_original});
    return true;
}

class Solver
{
public:
    Solver(const SignedGraph& g, const SolveParams& params) : g_(g), params_(params), deadline_(params.time_limit_seconds)
    {
        if (params.time_limit_seconds <= 0 || params.max_cut_rounds < 0 || params.max_cuts_per_round <= 0)
            throw std::invalid_argument("solve: invalid parameters");
    }

    SolveResult run()
    {
        const int n = g_.num_vertices();
        const Formulation root = initial_formulation(g_);
        base_ = root.lp;
        base_cuts_ = root.cuts;
        for (const auto& c : base_cuts_)
            pool_.insert(c);

        SolveResult result;
        SearchNode start;
        start.fixings.assign(n, Fixing::Free);
        start.bound = n;
        start.id = next_id_++;
        open_.push(start);

        bool timed_out = false;
        while (!open_.empty())
        {
            if (deadline_.expired())
            {
                timed_out = true;
                break;
            }
            SearchNode node = open_.top();
            open_.pop();
            if (prunable(node.bound))
                continue;
            if (!process(std::move(node)))
            {
                timed_out = true;
                break;
            }
        }

        result.best = best_;
        result.lower_bound = static_cast<int>(best_.size());
        if (timed_out)
        {
            double ub = result.lower_bound;
            while (!open_.empty())
            {
                ub = std::max(ub, open_.top().bound);
                open_.pop();
            }
            result.status = SolveStatus::TimeLimit;
            result.upper_bound = std::max<double>(result.lower_bound, std::floor(ub + 1e-6));
            if (result.upper_bound == result.lower_bound)
                result.status = SolveStatus::Optimal;
        }
        else
        {
            result.status = SolveStatus::Optimal;
            result.upper_bound = result.lower_bound;
        }
        stats_.wall_time = deadline_.elapsed();
        result.stats = stats_;
        return result;
    }

private:
    struct Order
    {
        bool operator()(const SearchNode& a, const SearchNode& b) const
        {
            if (a.bound != b.bound)
                return a.bound < b.bound;
            return a.id > b.id;
        }
    };

    bool prunable(double bound) const { return bound <= static_cast<double>(best_.size()) + 1.0 - 1e-6; }

    void offer(const Bipartition& p)
    {
        if (p.size() > best_.size())
        {
            best_ = p;
            if (params_.on_incumbent)
                params_.on_incumbent(best_);
        }
    }

    lp::LinearProgram node_lp(const SearchNode& node) const
    {
        lp::LinearProgram p = base_;
        for (int v = 0; v < g_.num_vertices(); ++v)
        {
            if (node.fixings[v] == Fixing::Zero)
                p.upper[v] = 0.0;
            else if (node.fixings[v] == Fixing::One)
                p.lower[v] = 1.0;
        }
        for (int id : node.active)
            p.rows.push_back(store_[id].to_row());
        for (const auto& r : node.extra_rows)
            p.rows.push_back(r);
        return p;
    }

    std::vector<Cut> separate(const std::vector<double>& y)
    {
        const auto limit = static_cast<std::size_t>(params_.max_cuts_per_round);
        auto from_pool = pool_.scan(y, limit);
        if (!from_pool.empty())
        {
            stats_.pool_hits += static_cast<long>(from_pool.size());
            return from_pool;
        }
        std::vector<Cut> found;
        for (auto& c : separate_odd_negative_cycle(g_, y, limit))
        {
            if (c.support_cycle.size() <= max_lifted_cycle_length)
                c = lift_odd_negative_cycle(g_, c);
            found.push_back(std::move(c));
        }
        if (found.size() < limit)
            for (auto& c : separate_clique(g_, y, limit - found.size()))
                found.push_back(std::move(c));
        if (found.size() < limit)
            for (auto& c : separate_lifted_odd_hole(g_, y, limit - found.size()))
                found.push_back(std::move(c));
        std::vector<Cut> fresh;
        for (auto& c : found)
            if (pool_.insert(c))
            {
                ++stats_.cuts_by_kind[c.kind];
                if (params_.on_cut)
                    params_.on_cut(c);
                fresh.push_back(std::move(c));
            }
            else if (c.violation(y) >= violation_tolerance)
                fresh.push_back(std::move(c));
        return fresh;
    }

    // False when the time limit interrupts the node; it is then returned to the queue.
    bool process(SearchNode node)
    {
        ++stats_.nodes;
        lp::LinearProgram p = node_lp(node);
        lp::LpSolution sol = lp::solve(p);
        ++stats_.lp_solves;
        if (params_.on_node)
            params_.on_node({node.id, node.parent, node.depth, node.bound,
                             sol.status == lp::LpStatus::Optimal ? sol.objective_value : -1.0, sol.status != lp::LpStatus::Optimal});
        if (sol.status != lp::LpStatus::Optimal)
            return true;
        double bound = std::min(node.bound, sol.objective_value);

        for (int round = 0;; ++round)
        {
            if (prunable(bound))
                return true;
            const auto& y = sol.values;
            const bool integral = is_integral(y);
            if (integral)
            {
                Bipartition p_int;
                if (encodes_balanced(g_, y, p_int))
                {
                    offer(p_int);
                    return true;
                }
            }
            offer(rounding_heuristic(g_, y));
            if (prunable(bound))
                return true;
            if (!integral && round >= params_.max_cut_rounds)
                break;
            if (deadline_.expired())
            {
                node.bound = bound;
                open_.push(std::move(node));
                return false;
            }
            auto cuts = separate(y);
            if (cuts.empty())
            {
                if (integral)
                    throw std::logic_error("solve: unbalanced integral point without a violated cut");
                break;
            }
            std::vector<lp::Row> rows;
            for (auto& c : cuts)
            {
                rows.push_back(c.to_row());
                node.active.push_back(static_cast<int>(store_.size()));
                store_.push_back(std::move(c));
            }
            sol = lp::add_rows_and_resolve(p, sol, rows);
            p.rows.insert(p.rows.end(), rows.begin(), rows.end());
            ++stats_.lp_solves;
            if (sol.status != lp::LpStatus::Optimal)
                return true;
            bound = std::min(bound, sol.objective_value);
        }

        const auto& y = sol.values;
        std::vector<const Cut*> cuts;
        for (const auto& c : base_cuts_)
            cuts.push_back(&c);
        for (int id : node.active)
            cuts.push_back(&store_[id]);
        // Cuts slack at y leave the children's LPs; the pool keeps them.
        std::vector<int> kept;
        for (int id : node.active)
            if (store_[id].violation(y) >= -binding_tolerance)
                kept.push_back(id);
        node.active = std::move(kept);
        node.bound = bound;
        auto children = branch(g_, node, cuts, y, params_.branching, params_.lifted_cycles_in_branching);
        if (params_.on_branch)
            params_.on_branch(node, children);
        for (auto& c : children)
        {
            c.bound = bound;
            c.id = next_id_++;
            open_.push(std::move(c));
        }
        return true;
    }

    const SignedGraph& g_;
    SolveParams params_;
    Deadline deadline_;
    lp::LinearProgram base_;
    std::vector<Cut> base_cuts_;
    CutPool pool_;
    std::vector<Cut> store_;
    std::priority_queue<SearchNode, std::vector<SearchNode>, Order> open_;
    Bipartition best_;
    SolveStats stats_;
    long next_id_ = 0;
};

} // namespace detail

/**
 * Exact branch-and-cut for MBSP with best-bound-first node selection.
 *
 * Each node solves its LP, then alternates separation and re-solves for up
 * to max_cut_rounds rounds (pool first, then odd negative cycles with
 * lifting, cliques and lifted odd holes) before branching. On timeout the
 * upper bound is the largest bound among unexplored nodes.
 */
inline SolveResult solve(const SignedGraph& g, const SolveParams& params = {})
{
    return detail::Solver(g, params).run();
}

} // namespace mbsp
