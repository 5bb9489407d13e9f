#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bench.hpp"
#include "branch_and_cut.hpp"
#include "ggmz.hpp"
#include "grasp.hpp"
#include "instances.hpp"
#include "signed_graph.hpp"
#include "spanning.hpp"

namespace mbsp::cli {

inline constexpr int exit_usage = 2;

namespace detail {

inline std::string one_based(const VertexSet& s)
{
    std::string out;
    for (int v : s)
    {
        if (!out.empty())
            out += ' ';
        out += std::to_string(v + 1);
    }
    return out;
}

inline std::vector<int> one_based_list(const VertexSet& s)
{
    std::vector<int> out;
    for (int v : s)
        out.push_back(v + 1);
    return out;
}

// --seed when given, else MBSP_SEED, else 0.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag)
{
    if (flag)
        return *flag;
    if (const char* env = std::getenv("MBSP_SEED"))
    {
        try
        {
            return std::stoull(env);
        }
        catch (const std::exception&)
        {
            throw std::invalid_argument(std::string("MBSP_SEED is not an integer: ") + env);
        }
    }
    return 0;
}

inline std::string grid_value(double x)
{
    std::ostringstream s;
    s << x;
    return s.str();
}

inline CLI::IsMember tree_tokens()
{
    std::vector<std::string> tokens;
    for (TreeStrategy t : all_tree_strategies)
        tokens.emplace_back(to_string(t));
    return CLI::IsMember(tokens);
}

} // namespace detail

/**
 * Command-line entry point. `args` excludes the program name. Returns the
 * process exit code: 0 on success, 1 on runtime errors (and for `check` on an
 * unbalanced graph), 2 on usage errors.
 */
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Maximum balanced subgraph solvers for signed graphs", "mbsp"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a random instance, or a 27-instance grid with --suite");
    int gen_group = 1, gen_n = 20, gen_seeds = 3;
    double gen_d = 0.5;
    std::optional<double> gen_ratio, gen_parallel;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_out;
    bool gen_suite = false, gen_balanced = false;
    gen->add_option("--group", gen_group, "1: no parallel pairs, 2: parallel pairs")->check(CLI::IsMember({1, 2}));
    gen->add_option("--n", gen_n, "Vertex count")->check(CLI::PositiveNumber);
    gen->add_option("--d", gen_d, "Density");
    gen->add_option("--ratio", gen_ratio, "|E-|/|E+| (group 1)");
    gen->add_option("--parallel", gen_parallel, "Parallel pair fraction (group 2)");
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--out", gen_out, "Output file (directory with --suite); stdout when omitted");
    gen->add_flag("--suite", gen_suite, "Densities {0.25,0.5,0.75} x ratios or fractions x seeds 1..--seeds");
    gen->add_option("--seeds", gen_seeds, "Seeds per grid cell with --suite")->check(CLI::PositiveNumber);
    gen->add_flag("--balanced", gen_balanced, "Balanced instance from a hidden bipartition");

    // check
    auto* chk = app.add_subcommand("check", "Test whether an instance is balanced");
    std::string chk_file;
    chk->add_option("file", chk_file, "Instance file")->required();

    // heuristic
    auto* heu = app.add_subcommand("heuristic", "Run GGMZ or GRASP");
    std::string heu_file, heu_method = "ggmz", heu_tree = "adaptive";
    double heu_time = 300.0;
    int heu_iterations = 100;
    std::optional<std::uint64_t> heu_seed;
    heu->add_option("file", heu_file, "Instance file")->required();
    heu->add_option("--method", heu_method, "ggmz | grasp")->check(CLI::IsMember({"ggmz", "grasp"}));
    heu->add_option("--tree", heu_tree, "bfs | dfs | f1 | f2 | f3 | random | adaptive")->check(detail::tree_tokens());
    heu->add_option("--time-limit", heu_time, "Seconds")->check(CLI::PositiveNumber);
    heu->add_option("--iterations", heu_iterations, "GRASP iterations or stable-set stall limit")->check(CLI::PositiveNumber);
    heu->add_option("--seed", heu_seed, "Random seed");

    // solve
    auto* slv = app.add_subcommand("solve", "Exact branch-and-cut; prints JSON");
    std::string slv_file, slv_branching = "cycle";
    double slv_time = 3600.0;
    int slv_rounds = 10, slv_cuts = 100;
    std::optional<std::uint64_t> slv_seed;
    slv->add_option("file", slv_file, "Instance file")->required();
    slv->add_option("--time-limit", slv_time, "Seconds")->check(CLI::PositiveNumber);
    slv->add_option("--branching", slv_branching, "cycle | standard")->check(CLI::IsMember({"cycle", "standard"}));
    slv->add_option("--max-rounds", slv_rounds, "Cut rounds per node")->check(CLI::NonNegativeNumber);
    slv->add_option("--max-cuts", slv_cuts, "Cuts per round")->check(CLI::PositiveNumber);
    slv->add_option("--seed", slv_seed, "Random seed");

    // bench
    auto* bch = app.add_subcommand("bench", "Run methods over a directory of .mbsp files; writes CSV");
    std::string bch_dir, bch_out, bch_tree = "adaptive", bch_branching = "cycle";
    std::vector<std::string> bch_methods;
    double bch_time = 3600.0;
    int bch_workers = 1;
    bool bch_no_timing = false;
    std::optional<std::uint64_t> bch_seed;
    bch->add_option("dir", bch_dir, "Instance directory")->required();
    bch->add_option("--method", bch_methods, "ggmz | grasp | bc (repeatable)")->check(CLI::IsMember({"ggmz", "grasp", "bc"}));
    bch->add_option("--time-limit", bch_time, "Seconds per run")->check(CLI::PositiveNumber);
    bch->add_option("--tree", bch_tree, "Spanning forest strategy for ggmz")->check(detail::tree_tokens());
    bch->add_option("--branching", bch_branching, "cycle | standard")->check(CLI::IsMember({"cycle", "standard"}));
    bch->add_option("--workers", bch_workers, "Instances run in parallel")->check(CLI::PositiveNumber);
    bch->add_option("--out", bch_out, "CSV path; stdout when omitted");
    bch->add_flag("--no-timing", bch_no_timing, "Leave wall-clock fields empty for reproducible output");
    bch->add_option("--seed", bch_seed, "Random seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp& e)
    {
        app.exit(e, out, err);
        return 0;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return exit_usage;
    }

    try
    {
        if (gen->parsed())
        {
            const std::uint64_t base = detail::resolve_seed(gen_seed);
            if (gen_balanced)
            {
                const auto g = generate_balanced(gen_n, gen_d, base);
                const std::string comment = "balanced n=" + std::to_string(gen_n) + " d=" + detail::grid_value(gen_d) + " seed=" + std::to_string(base);
                if (gen_out.empty())
                    out << format_instance(g, comment);
                else
                    write_instance(g, gen_out, comment);
                return 0;
            }
            if (gen_suite)
            {
                if (gen_out.empty())
                {
                    err << "error: --suite needs --out <directory>\n";
                    return exit_usage;
                }
                std::filesystem::create_directories(gen_out);
                int written = 0;
                const std::vector<double> levels = gen_group == 1 ? std::vector<double>{0.5, 1.0, 2.0} : std::vector<double>{0.25, 0.5, 0.75};
                for (double level : levels)
                    for (double d : {0.25, 0.5, 0.75})
                        for (int s = 1; s <= gen_seeds; ++s)
                        {
                            RandomSpec spec{gen_n, d, std::nullopt, std::nullopt, base + static_cast<std::uint64_t>(s)};
                            std::string tag;
                            if (gen_group == 1)
                            {
                                spec.neg_ratio = level;
                                tag = "r" + detail::grid_value(level);
                            }
                            else
                            {
                                spec.parallel_frac = level;
                                tag = "p" + detail::grid_value(level);
                            }
                            const std::string name = "g" + std::to_string(gen_group) + "_n" + std::to_string(gen_n) + "_d" +
                                                     detail::grid_value(d) + "_" + tag + "_s" + std::to_string(spec.seed);
                            write_instance(generate(spec), (std::filesystem::path(gen_out) / (name + ".mbsp")).string(), name);
                            ++written;
                        }
                out << "wrote " << written << " instances to " << gen_out << '\n';
                return 0;
            }
            RandomSpec spec{gen_n, gen_d, std::nullopt, std::nullopt, base};
            if (gen_group == 1)
                spec.neg_ratio = gen_ratio.value_or(1.0);
            else
                spec.parallel_frac = gen_parallel.value_or(0.5);
            const std::string comment = "group " + std::to_string(gen_group) + " n=" + std::to_string(gen_n) + " d=" + detail::grid_value(gen_d) +
                                        (gen_group == 1 ? " ratio=" + detail::grid_value(*spec.neg_ratio) : " parallel=" + detail::grid_value(*spec.parallel_frac)) +
                                        " seed=" + std::to_string(base);
            const auto g = generate(spec);
            if (gen_out.empty())
                out << format_instance(g, comment);
            else
                write_instance(g, gen_out, comment);
            return 0;
        }

        if (chk->parsed())
        {
            const auto g = read_instance(chk_file);
            if (const auto w = is_balanced(g))
            {
                out << "balanced\nW: " << detail::one_based(w->vertices) << '\n';
                return 0;
            }
            out << "unbalanced\n";
            return 1;
        }

        if (heu->parsed())
        {
            const auto g = read_instance(heu_file);
            const std::uint64_t seed = detail::resolve_seed(heu_seed);
            Bipartition p;
            if (heu_method == "ggmz")
            {
                StableSetParams params;
                params.max_stall_iterations = heu_iterations;
                params.time_limit_seconds = heu_time;
                params.seed = seed;
                p = ggmz(g, *parse_tree_strategy(heu_tree), params);
            }
            else
                p = grasp(g, {heu_iterations, heu_time, seed});
            out << "size " << p.size() << "\nV1: " << detail::one_based(p.v1) << "\nV2: " << detail::one_based(p.v2) << '\n';
            return 0;
        }

        if (slv->parsed())
        {
            const auto g = read_instance(slv_file);
            SolveParams params;
            params.time_limit_seconds = slv_time;
            params.max_cut_rounds = slv_rounds;
            params.max_cuts_per_round = slv_cuts;
            params.branching = slv_branching == "cycle" ? Branching::Cycle : Branching::Standard;
            params.seed = detail::resolve_seed(slv_seed);
            const SolveResult r = solve(g, params);
            nlohmann::ordered_json j;
            j["status"] = std::string(to_string(r.status));
            j["lb"] = r.lower_bound;
            j["ub"] = r.upper_bound;
            j["gap_pct"] = r.gap_pct();
            j["nodes"] = r.stats.nodes;
            j["lp_solves"] = r.stats.lp_solves;
            j["time_s"] = r.stats.wall_time;
            nlohmann::ordered_json cuts = nlohmann::ordered_json::object();
            for (CutKind k : all_cut_kinds)
            {
                const auto it = r.stats.cuts_by_kind.find(k);
                cuts[std::string(to_string(k))] = it == r.stats.cuts_by_kind.end() ? 0 : it->second;
            }
            j["cuts"] = cuts;
            j["v1"] = detail::one_based_list(r.best.v1);
            j["v2"] = detail::one_based_list(r.best.v2);
            out << j.dump(2) << '\n';
            return 0;
        }

        if (bch->parsed())
        {
            BenchConfig cfg;
            if (!bch_methods.empty())
                cfg.methods = bch_methods;
            cfg.time_limit_seconds = bch_time;
            cfg.seed = detail::resolve_seed(bch_seed);
            cfg.tree = *parse_tree_strategy(bch_tree);
            cfg.branching = bch_branching == "cycle" ? Branching::Cycle : Branching::Standard;
            cfg.workers = bch_workers;
            cfg.timing = !bch_no_timing;
            std::vector<std::pair<std::string, SignedGraph>> instances;
            for (const auto& path : list_instances(bch_dir))
                instances.emplace_back(path.stem().string(), read_instance(path.string()));
            const auto rows = run_bench(instances, cfg);
            if (bch_out.empty())
                write_bench_csv(out, rows, cfg.timing);
            else
            {
                std::ofstream file(bch_out, std::ios::binary);
                if (!file)
                    throw std::runtime_error("cannot write " + bch_out);
                write_bench_csv(file, rows, cfg.timing);
            }
            return 0;
        }
    }
    catch (const ParseError& e)
    {
        err << "error: parse: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_usage;
}

inline int run(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args);
}

} // namespace mbsp::cli
