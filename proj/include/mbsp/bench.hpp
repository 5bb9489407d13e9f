#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "branch_and_cut.hpp"
#include "ggmz.hpp"
#include "grasp.hpp"
#include "instances.hpp"
#include "lp.hpp"
#include "spanning.hpp"
#include "timer.hpp"

namespace mbsp {

struct BenchRow
{
    std::string instance;
    int n = 0;
    int m = 0;
    int m_neg = 0;
    int m_pos = 0;
    int m_par = 0;
    std::string method;
    double time_s = 0.0;
    // optimal | time_limit | heuristic | error
    std::string status;
    int lb = 0;
    std::optional<double> ub;
    std::optional<double> gap_pct;
    std::optional<long> nodes;

    int group() const { return m_par > 0 ? 2 : 1; }
};

struct BenchConfig
{
    std::vector<std::string> methods{"bc"};
    double time_limit_seconds = 3600.0;
    std::uint64_t seed = 0;
    TreeStrategy tree = TreeStrategy::KruskalAdaptive;
    Branching branching = Branching::Cycle;
    int workers = 1;
    bool timing = true;
};

inline const char* bench_csv_header = "instance,n,m,m_neg,m_pos,m_par,method,time_s,status,lb,ub,gap_pct,nodes";

inline std::string fixed2(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

// Runs one method on one graph; solver failures become an error row.
inline BenchRow bench_one(const std::string& id, const SignedGraph& g, const std::string& method, const BenchConfig& cfg)
{
    BenchRow row;
    row.instance = id;
    row.n = g.num_vertices();
    row.m = g.num_edges();
    row.m_neg = g.num_negative();
    row.m_pos = g.num_positive();
    row.m_par = g.num_parallel();
    row.method = method;
    try
    {
        if (method == "ggmz" || method == "grasp")
        {
            Deadline clock(0.0);
            Bipartition p;
            if (method == "ggmz")
                p = ggmz(g, cfg.tree, {.time_limit_seconds = cfg.time_limit_seconds, .seed = cfg.seed});
            else
                p = grasp(g, {.time_limit_seconds = cfg.time_limit_seconds, .seed = cfg.seed});
            row.time_s = clock.elapsed();
            row.status = "heuristic";
            row.lb = static_cast<int>(p.size());
        }
        else if (method == "bc")
        {
            SolveParams params;
            params.time_limit_seconds = cfg.time_limit_seconds;
            params.branching = cfg.branching;
            params.seed = cfg.seed;
            Deadline clock(0.0);
            const SolveResult r = solve(g, params);
            row.time_s = clock.elapsed();
            row.status = std::string(to_string(r.status));
            row.lb = r.lower_bound;
            row.ub = r.upper_bound;
            row.nodes = r.stats.nodes;
            if (r.status != SolveStatus::Optimal)
                row.gap_pct = r.gap_pct();
        }
        else
            throw std::invalid_argument("unknown method " + method);
    }
    catch (const lp::NumericalFailure&)
    {
        row.status = "error";
        row.lb = 0;
        row.ub.reset();
        row.gap_pct.reset();
        row.nodes.reset();
    }
    return row;
}

inline std::string format_row(const BenchRow& r, bool timing)
{
    std::ostringstream out;
    out << r.instance << ',' << r.n << ',' << r.m << ',' << r.m_neg << ',' << r.m_pos << ',' << r.m_par << ',' << r.method << ','
        << (timing ? fixed2(r.time_s) : "") << ',' << r.status << ',' << r.lb << ',' << (r.ub ? fixed2(*r.ub) : "") << ','
        << (r.gap_pct ? fixed2(*r.gap_pct) : "") << ',' << (r.nodes ? std::to_string(*r.nodes) : "");
    return out.str();
}

struct AggregateCell
{
    int n = 0;
    int group = 0;
    std::string method;
    int instances = 0;
    // Rows that finished: optimal for bc, every non-error row for heuristics.
    int solved = 0;
    double time_sum = 0.0;
    int unsolved = 0;
    double gap_sum = 0.0;
    long node_sum = 0;
    int node_rows = 0;
};

inline std::vector<AggregateCell> aggregate(const std::vector<BenchRow>& rows)
{
    std::map<std::tuple<int, int, std::string>, AggregateCell> cells;
    for (const auto& r : rows)
    {
        auto& c = cells[{r.n, r.group(), r.method}];
        c.n = r.n;
        c.group = r.group();
        c.method = r.method;
        ++c.instances;
        if (r.status == "optimal" || r.status == "heuristic")
        {
            ++c.solved;
            c.time_sum += r.time_s;
        }
        else if (r.status == "time_limit")
        {
            ++c.unsolved;
            c.gap_sum += r.gap_pct.value_or(0.0);
        }
        if (r.nodes)
        {
            c.node_sum += *r.nodes;
            ++c.node_rows;
        }
    }
    std::vector<AggregateCell> out;
    for (auto& [key, cell] : cells)
        out.push_back(cell);
    return out;
}

// Average time over solved rows with the solved count, e.g. "10.63(27)"; "-" when none solved.
inline std::string time_cell(const AggregateCell& c, bool timing)
{
    if (c.solved == 0)
        return "-";
    return (timing ? fixed2(c.time_sum / c.solved) : std::string("n/a")) + "(" + std::to_string(c.solved) + ")";
}

inline std::string gap_cell(const AggregateCell& c)
{
    return fixed2(c.unsolved > 0 ? c.gap_sum / c.unsolved : 0.0);
}

inline std::string nodes_cell(const AggregateCell& c)
{
    return c.node_rows > 0 ? fixed2(static_cast<double>(c.node_sum) / c.node_rows) : "";
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool timing)
{
    out << bench_csv_header << '\n';
    for (const auto& r : rows)
        out << format_row(r, timing) << '\n';
    out << '\n' << "# aggregate\n" << "n,group,method,instances,time,gap_pct,nodes\n";
    for (const auto& c : aggregate(rows))
        out << c.n << ',' << c.group << ',' << c.method << ',' << c.instances << ',' << time_cell(c, timing) << ',' << gap_cell(c) << ','
            << nodes_cell(c) << '\n';
}

// Instance files (*.mbsp) of a directory in file name order.
inline std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".mbsp")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

/**
 * Runs every configured method on every instance. Rows come back in
 * (instance, method) order whatever the worker count.
 */
inline std::vector<BenchRow> run_bench(const std::vector<std::pair<std::string, SignedGraph>>& instances, const BenchConfig& cfg)
{
    std::vector<std::pair<std::size_t, std::string>> jobs;
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (const auto& m : cfg.methods)
            jobs.emplace_back(i, m);
    std::vector<BenchRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++)
        {
            const auto& [i, method] = jobs[j];
            rows[j] = bench_one(instances[i].first, instances[i].second, method, cfg);
        }
    };
    const int workers = std::max(1, cfg.workers);
    if (workers == 1)
        work();
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    return rows;
}

} // namespace mbsp
