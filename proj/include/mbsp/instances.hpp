#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "signed_graph.hpp"

namespace mbsp {

/**
 * Random instance parameters. Group 1 sets neg_ratio = |E-|/|E+| (no
 * parallel pairs); Group 2 sets parallel_frac = share of pairs carrying both
 * signs.
 */
struct RandomSpec
{
    int n = 0;
    double density = 0.5;
    std::optional<double> neg_ratio;
    std::optional<double> parallel_frac;
    std::uint64_t seed = 0;

    int group() const { return parallel_frac ? 2 : 1; }
};

inline int pair_count(int n, double density)
{
    return static_cast<int>(std::llround(density * n * (n - 1) / 2.0));
}

namespace detail {

// m distinct pairs u < v drawn uniformly without replacement, in draw order.
template <class Rng>
std::vector<std::pair<int, int>> sample_pairs(int n, int m, Rng& rng)
{
    std::vector<std::pair<int, int>> all;
    all.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            all.emplace_back(u, v);
    for (int i = 0; i < m; ++i)
    {
        const auto j = std::uniform_int_distribution<std::size_t>(i, all.size() - 1)(rng);
        std::swap(all[i], all[j]);
    }
    all.resize(m);
    return all;
}

inline void check_density(int n, double density, const char* where)
{
    if (n < 2 || !(density > 0.0) || density > 1.0)
        throw std::invalid_argument(std::string(where) + ": need n >= 2 and density in (0, 1]");
    if (pair_count(n, density) < 1)
        throw std::invalid_argument(std::string(where) + ": density yields no pairs");
}

} // namespace detail

/**
 * Samples round(d * n(n-1)/2) distinct pairs. Group 1 makes
 * round(m * r / (1 + r)) of them negative and the rest positive; Group 2
 * gives round(m * parallel_frac) of them both signs and a fair-coin sign to
 * the rest.
 */
inline SignedGraph generate(const RandomSpec& spec)
{
    detail::check_density(spec.n, spec.density, "generate");
    if (spec.neg_ratio.has_value() == spec.parallel_frac.has_value())
        throw std::invalid_argument("generate: set exactly one of neg_ratio and parallel_frac");
    const int m = pair_count(spec.n, spec.density);
    std::mt19937_64 rng(spec.seed);
    auto pairs = detail::sample_pairs(spec.n, m, rng);
    std::vector<SignedEdge> edges;
    if (spec.neg_ratio)
    {
        const double r = *spec.neg_ratio;
        if (!(r >= 0.0) || !std::isfinite(r))
            throw std::invalid_argument("generate: neg_ratio must be finite and >= 0");
        const auto negatives = static_cast<int>(std::llround(m * r / (1.0 + r)));
        for (int i = 0; i < m; ++i)
            edges.push_back({pairs[i].first, pairs[i].second, i < negatives ? Sign::Negative : Sign::Positive});
    }
    else
    {
        const double f = *spec.parallel_frac;
        if (!(f > 0.0) || f > 1.0)
            throw std::invalid_argument("generate: parallel_frac must be in (0, 1]; use neg_ratio without parallel pairs");
        const auto parallel = static_cast<int>(std::llround(m * f));
        std::bernoulli_distribution coin(0.5);
        for (int i = 0; i < m; ++i)
        {
            const auto [u, v] = pairs[i];
            if (i < parallel)
            {
                edges.push_back({u, v, Sign::Positive});
                edges.push_back({u, v, Sign::Negative});
            }
            else
                edges.push_back({u, v, coin(rng) ? Sign::Negative : Sign::Positive});
        }
    }
    return SignedGraph(spec.n, edges);
}

/**
 * Balanced random instance: hidden random bipartition, pairs sampled as in
 * generate, positive inside a side and negative across.
 */
inline SignedGraph generate_balanced(int n, double density, std::uint64_t seed)
{
    detail::check_density(n, density, "generate_balanced");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<bool> side(n);
    for (int v = 0; v < n; ++v)
        side[v] = coin(rng);
    std::vector<SignedEdge> edges;
    for (const auto& [u, v] : detail::sample_pairs(n, pair_count(n, density), rng))
        edges.push_back({u, v, side[u] == side[v] ? Sign::Positive : Sign::Negative});
    return SignedGraph(n, edges);
}

class ParseError : public std::runtime_error
{
public:
    ParseError(int line, const std::string& what) : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/**
 * Text format:
 *   p mbsp <n> <m>
 *   e <u> <v> <+|->     (m lines, 1-based, u < v)
 * Lines starting with c are comments.
 */
inline SignedGraph parse_instance(std::istream& in)
{
    std::string line;
    int line_no = 0;
    int n = -1;
    long m = -1;
    std::vector<SignedEdge> edges;
    std::vector<bool> seen;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag == "c")
            continue;
        std::string extra;
        if (tag == "p")
        {
            std::string format;
            if (n >= 0)
                throw ParseError(line_no, "duplicate header");
            if (!(ss >> format >> n >> m) || format != "mbsp" || n < 0 || m < 0 || (ss >> extra))
                throw ParseError(line_no, "malformed header, expected 'p mbsp <n> <m>'");
            seen.assign(static_cast<std::size_t>(n) * n * 2, false);
        }
        else if (tag == "e")
        {
            if (n < 0)
                throw ParseError(line_no, "edge before header");
            long u = 0, v = 0;
            std::string s;
            if (!(ss >> u >> v >> s) || (ss >> extra))
                throw ParseError(line_no, "malformed edge, expected 'e <u> <v> <+|->'");
            if (s != "+" && s != "-")
                throw ParseError(line_no, "bad sign '" + s + "'");
            if (u < 1 || v < 1 || u > n || v > n)
                throw ParseError(line_no, "vertex out of range");
            if (u == v)
                throw ParseError(line_no, "loop edge");
            const int a = static_cast<int>(std::min(u, v)) - 1, b = static_cast<int>(std::max(u, v)) - 1;
            const Sign sign = s == "+" ? Sign::Positive : Sign::Negative;
            const auto key = (static_cast<std::size_t>(a) * n + b) * 2 + (sign == Sign::Negative ? 1 : 0);
            if (seen[key])
                throw ParseError(line_no, "duplicate edge");
            seen[key] = true;
            edges.push_back({a, b, sign});
        }
        else
            throw ParseError(line_no, "unknown line type '" + tag + "'");
    }
    if (n < 0)
        throw ParseError(line_no, "missing header");
    if (static_cast<long>(edges.size()) != m)
        throw ParseError(line_no, "header announces " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
    return SignedGraph(n, edges);
}

inline SignedGraph parse_instance(const std::string& text)
{
    std::istringstream in(text);
    return parse_instance(in);
}

// Canonical text: edges sorted by (u, v, sign) with + before -.
inline std::string format_instance(const SignedGraph& g, const std::string& comment = "")
{
    auto edges = g.edges();
    std::sort(edges.begin(), edges.end(), [](const SignedEdge& a, const SignedEdge& b) {
        return std::tuple(a.u, a.v, a.sign == Sign::Negative) < std::tuple(b.u, b.v, b.sign == Sign::Negative);
    });
    std::ostringstream out;
    if (!comment.empty())
        out << "c " << comment << '\n';
    out << "p mbsp " << g.num_vertices() << ' ' << edges.size() << '\n';
    for (const auto& e : edges)
        out << "e " << e.u + 1 << ' ' << e.v + 1 << ' ' << to_char(e.sign) << '\n';
    return out.str();
}

inline SignedGraph read_instance(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return parse_instance(in);
}

inline void write_instance(const SignedGraph& g, const std::string& path, const std::string& comment = "")
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << format_instance(g, comment);
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

struct BruteForceResult
{
    int optimum = 0;
    Bipartition witness;
};

/**
 * Exact optimum by enumerating vertex subsets in decreasing size until one
 * induces a balanced subgraph. Requires n <= 20.
 */
inline BruteForceResult brute_force(const SignedGraph& g)
{
    const int n = g.num_vertices();
    if (n > 20)
        throw std::invalid_argument("brute_force: n must be at most 20");
    std::vector<int> label(n);
    std::vector<int> stack;
    auto balanced = [&](std::uint32_t mask) {
        std::fill(label.begin(), label.end(), -1);
        for (int root = 0; root < n; ++root)
        {
            if (!(mask >> root & 1u) || label[root] >= 0)
                continue;
            label[root] = 0;
            stack.assign(1, root);
            while (!stack.empty())
            {
                const int u = stack.back();
                stack.pop_back();
                for (int v : g.neighbors(u))
                {
                    if (!(mask >> v & 1u))
                        continue;
                    const auto kind = g.pair(u, v);
                    if (kind == PairKind::Parallel)
                        return false;
                    const int want = label[u] ^ (kind == PairKind::Negative ? 1 : 0);
                    if (label[v] < 0)
                    {
                        label[v] = want;
                        stack.push_back(v);
                    }
                    else if (label[v] != want)
                        return false;
                }
            }
        }
        return true;
    };
    for (int k = n; k >= 1; --k)
    {
        // Gosper's hack over k-subsets in increasing mask order.
        std::uint64_t mask = (1ull << k) - 1;
        while (mask < (1ull << n))
        {
            if (balanced(static_cast<std::uint32_t>(mask)))
            {
                BruteForceResult r;
                r.optimum = k;
                for (int v = 0; v < n; ++v)
                {
                    if (!(mask >> v & 1u))
                        continue;
                    (label[v] == 0 ? r.witness.v1 : r.witness.v2).push_back(v);
                }
                return r;
            }
            const std::uint64_t c = mask & (~mask + 1);
            const std::uint64_t r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    return {};
}

} // namespace mbsp
