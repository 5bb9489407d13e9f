#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbsp::lp {

inline constexpr double feasibility_tolerance = 1e-7;
inline constexpr double optimality_tolerance = 1e-9;
inline constexpr double pivot_tolerance = 1e-9;
inline constexpr double infinity = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Term
{
    int var;
    double coeff;
};

struct Row
{
    std::vector<Term> terms;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;

    double activity(const std::vector<double>& x) const
    {
        double sum = 0.0;
        for (const auto& t : terms)
            sum += t.coeff * x[t.var];
        return sum;
    }

    bool satisfied(const std::vector<double>& x, double tol) const
    {
        const double a = activity(x);
        switch (relation)
        {
        case Relation::LessEqual: return a <= rhs + tol;
        case Relation::GreaterEqual: return a >= rhs - tol;
        case Relation::Equal: return std::abs(a - rhs) <= tol;
        }
        return false;
    }
};

// maximize objective.x subject to rows and lower <= x <= upper (finite bounds).
struct LinearProgram
{
    std::vector<double> objective;
    std::vector<Row> rows;
    std::vector<double> lower;
    std::vector<double> upper;

    int num_vars() const { return static_cast<int>(objective.size()); }

    int add_variable(double lo, double hi, double cost)
    {
        objective.push_back(cost);
        lower.push_back(lo);
        upper.push_back(hi);
        return num_vars() - 1;
    }
};

enum class LpStatus { Optimal, Infeasible };

// Iteration cap exceeded or the final point failed verification.
class NumericalFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail { class Tableau; }

struct LpSolution
{
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> values;
    double objective_value = 0.0;
    int iterations = 0;
    // Final basis, reused by add_rows_and_resolve.
    std::shared_ptr<const detail::Tableau> basis;
};

namespace detail {

enum class VarState : unsigned char { Basic, AtLower, AtUpper };

/**
 * Dense simplex tableau B^-1 [A | I | R] over structural, slack and
 * artificial columns. Row i reads a_i.x + s_i (+ r_i) = b_i; slack bounds
 * encode the row relation.
 */
class Tableau
{
public:
    Tableau(const LinearProgram& lp) : lp_(lp)
    {
        n_ = lp.num_vars();
        if (static_cast<int>(lp.lower.size()) != n_ || static_cast<int>(lp.upper.size()) != n_)
            throw std::invalid_argument("lp: bound vectors do not match the objective");
        for (int j = 0; j < n_; ++j)
        {
            if (!std::isfinite(lp.lower[j]) || !std::isfinite(lp.upper[j]))
                throw std::invalid_argument("lp: bounds must be finite");
            if (lp.lower[j] > lp.upper[j])
                throw std::invalid_argument("lp: lower bound above upper bound for variable " + std::to_string(j));
            add_column(lp.lower[j], lp.upper[j], lp.objective[j]);
            state_.back() = VarState::AtLower;
            x_.back() = lp.lower[j];
        }
        for (const auto& row : lp.rows)
        {
            for (const auto& t : row.terms)
                if (t.var < 0 || t.var >= n_)
                    throw std::invalid_argument("lp: row references unknown variable " + std::to_string(t.var));
            append_row_cold(row);
        }
    }

    int max_iterations() const { return 50 * (static_cast<int>(lp_.rows.size()) + n_); }

    // Two-phase primal simplex from the slack/artificial start.
    LpStatus solve_cold(int& iterations)
    {
        std::vector<double> phase1(columns(), 0.0);
        bool need_phase1 = false;
        for (int c : artificial_)
        {
            phase1[c] = -1.0;
            need_phase1 = true;
        }
        if (need_phase1)
        {
            set_costs(phase1);
            primal(iterations);
            double infeasibility = 0.0;
            for (int c : artificial_)
                infeasibility += x_[c];
            if (infeasibility > feasibility_tolerance)
                return LpStatus::Infeasible;
            for (int c : artificial_)
                hi_[c] = 0.0;
        }
        set_costs(structural_costs());
        primal(iterations);
        refine();
        return LpStatus::Optimal;
    }

    // Appends rows to an optimal basis and restores optimality by dual simplex.
    LpStatus add_rows(const std::vector<Row>& rows, int& iterations)
    {
        for (const auto& row : rows)
        {
            lp_.rows.push_back(row);
            append_row_warm(row);
        }
        if (!dual(iterations))
            return LpStatus::Infeasible;
        primal(iterations);
        refine();
        return LpStatus::Optimal;
    }

    LpSolution extract(LpStatus status, int iterations) const
    {
        LpSolution sol;
        sol.status = status;
        sol.iterations = iterations;
        if (status != LpStatus::Optimal)
            return sol;
        sol.values.resize(n_);
        for (int j = 0; j < n_; ++j)
            sol.values[j] = std::clamp(x_[j], lp_.lower[j], lp_.upper[j]);
        for (int j = 0; j < n_; ++j)
            sol.objective_value += lp_.objective[j] * sol.values[j];
        return sol;
    }

    // Row activities and bounds agree with the original data.
    bool verify(const std::vector<double>& values, double tol) const
    {
        for (const auto& row : lp_.rows)
            if (!row.satisfied(values, tol * (1.0 + std::abs(row.rhs))))
                return false;
        return true;
    }

    const LinearProgram& program() const { return lp_; }

private:
    int columns() const { return static_cast<int>(lo_.size()); }

    int add_column(double lo, double hi, double cost)
    {
        lo_.push_back(lo);
        hi_.push_back(hi);
        cost_.push_back(cost);
        x_.push_back(0.0);
        d_.push_back(cost);
        state_.push_back(VarState::AtLower);
        position_.push_back(-1);
        for (auto& r : tableau_)
            r.push_back(0.0);
        return columns() - 1;
    }

    static std::pair<double, double> slack_bounds(Relation rel)
    {
        switch (rel)
        {
        case Relation::LessEqual: return {0.0, infinity};
        case Relation::GreaterEqual: return {-infinity, 0.0};
        case Relation::Equal: return {0.0, 0.0};
        }
        return {0.0, 0.0};
    }

    std::vector<double> structural_costs() const
    {
        std::vector<double> c(columns(), 0.0);
        for (int j = 0; j < n_; ++j)
            c[j] = lp_.objective[j];
        return c;
    }

    void set_costs(const std::vector<double>& c)
    {
        cost_ = c;
        for (int j = 0; j < columns(); ++j)
        {
            if (state_[j] == VarState::Basic)
            {
                d_[j] = 0.0;
                continue;
            }
            double z = 0.0;
            for (std::size_t i = 0; i < tableau_.size(); ++i)
                z += cost_[basis_[i]] * tableau_[i][j];
            d_[j] = cost_[j] - z;
        }
    }

    void append_row_cold(const Row& row)
    {
        const auto [slo, shi] = slack_bounds(row.relation);
        const int s = add_column(slo, shi, 0.0);
        double residual = row.rhs;
        for (const auto& t : row.terms)
            residual -= t.coeff * x_[t.var];
        std::vector<double> r(columns(), 0.0);
        for (const auto& t : row.terms)
            r[t.var] += t.coeff;
        r[s] = 1.0;
        slack_.push_back(s);
        const int i = static_cast<int>(tableau_.size());
        if (residual >= slo - feasibility_tolerance && residual <= shi + feasibility_tolerance)
        {
            tableau_.push_back(std::move(r));
            make_basic(i, s, residual);
            artificial_in_row_.push_back(-1);
            artificial_sign_.push_back(1.0);
            return;
        }
        const double bound = residual < slo ? slo : shi;
        state_[s] = residual < slo ? VarState::AtLower : VarState::AtUpper;
        x_[s] = bound;
        const double excess = residual - bound;
        const double sigma = excess > 0 ? 1.0 : -1.0;
        tableau_.push_back(std::move(r));
        const int a = add_column(0.0, infinity, 0.0);
        tableau_[i][a] = sigma;
        for (auto& v : tableau_[i])
            v *= sigma;
        artificial_.push_back(a);
        artificial_in_row_.push_back(a);
        artificial_sign_.push_back(sigma);
        make_basic(i, a, std::abs(excess));
    }

    void append_row_warm(const Row& row)
    {
        const auto [slo, shi] = slack_bounds(row.relation);
        const int s = add_column(slo, shi, 0.0);
        std::vector<double> r(columns(), 0.0);
        double value = row.rhs;
        for (const auto& t : row.terms)
        {
            r[t.var] += t.coeff;
            value -= t.coeff * x_[t.var];
        }
        r[s] = 1.0;
        for (const auto& t : row.terms)
        {
            const int i = position_[t.var];
            if (i < 0)
                continue;
            const double f = r[t.var];
            if (f == 0.0)
                continue;
            const auto& src = tableau_[i];
            for (int k = 0; k < columns(); ++k)
                r[k] -= f * src[k];
            r[t.var] = 0.0;
        }
        slack_.push_back(s);
        artificial_in_row_.push_back(-1);
        artificial_sign_.push_back(1.0);
        const int i = static_cast<int>(tableau_.size());
        tableau_.push_back(std::move(r));
        make_basic(i, s, value);
    }

    void make_basic(int row, int col, double value)
    {
        if (static_cast<int>(basis_.size()) <= row)
            basis_.resize(row + 1);
        basis_[row] = col;
        position_[col] = row;
        state_[col] = VarState::Basic;
        x_[col] = value;
        d_[col] = 0.0;
    }

    void pivot(int r, int j)
    {
        auto& prow = tableau_[r];
        const double inv = 1.0 / prow[j];
        nonzero_.clear();
        for (int k = 0; k < columns(); ++k)
        {
            if (prow[k] == 0.0)
                continue;
            prow[k] *= inv;
            if (std::abs(prow[k]) < 1e-14)
                prow[k] = 0.0;
            else
                nonzero_.push_back(k);
        }
        prow[j] = 1.0;
        for (std::size_t i = 0; i < tableau_.size(); ++i)
        {
            if (static_cast<int>(i) == r)
                continue;
            auto& row = tableau_[i];
            const double f = row[j];
            if (f == 0.0)
                continue;
            for (int k : nonzero_)
                row[k] -= f * prow[k];
            row[j] = 0.0;
        }
        const double fd = d_[j];
        if (fd != 0.0)
        {
            for (int k : nonzero_)
                d_[k] -= fd * prow[k];
            d_[j] = 0.0;
        }
        const int leaving = basis_[r];
        position_[leaving] = -1;
        basis_[r] = j;
        position_[j] = r;
        state_[j] = VarState::Basic;
    }

    bool eligible(int j, bool& increase) const
    {
        if (state_[j] == VarState::Basic || hi_[j] <= lo_[j])
            return false;
        if (state_[j] == VarState::AtLower && d_[j] > optimality_tolerance)
        {
            increase = true;
            return true;
        }
        if (state_[j] == VarState::AtUpper && d_[j] < -optimality_tolerance)
        {
            increase = false;
            return true;
        }
        return false;
    }

    // Bounded primal simplex on the current costs. Dantzig pricing, Bland after a degenerate streak.
    void primal(int& iterations)
    {
        const int limit = max_iterations();
        const int degenerate_limit = 3 * std::max(columns(), 1);
        int degenerate = 0;
        bool bland = false;
        while (true)
        {
            if (++iterations > limit)
                throw NumericalFailure("simplex iteration limit exceeded");
            int enter = -1;
            bool increase = true;
            double best = 0.0;
            for (int j = 0; j < columns(); ++j)
            {
                bool inc;
                if (!eligible(j, inc))
                    continue;
                if (bland)
                {
                    enter = j;
                    increase = inc;
                    break;
                }
                if (std::abs(d_[j]) > best)
                {
                    best = std::abs(d_[j]);
                    enter = j;
                    increase = inc;
                }
            }
            if (enter < 0)
            {
                --iterations;
                return;
            }
            const double dir = increase ? 1.0 : -1.0;
            const double range = hi_[enter] - lo_[enter];
            double best_limit = infinity;
            int leave_row = -1;
            bool leave_to_lower = true;
            double leave_pivot = 0.0;
            for (std::size_t i = 0; i < tableau_.size(); ++i)
            {
                const double a = tableau_[i][enter];
                if (std::abs(a) < pivot_tolerance)
                    continue;
                const int b = basis_[i];
                const double delta = -dir * a;
                const bool to_lower = delta < 0;
                const double bound = to_lower ? lo_[b] : hi_[b];
                if (!std::isfinite(bound))
                    continue;
                const double limit_i = std::max(0.0, (bound - x_[b]) / delta);
                bool take = limit_i < best_limit - 1e-12;
                if (!take && limit_i <= best_limit + 1e-12)
                    take = bland ? b < basis_[leave_row] : std::abs(a) > std::abs(leave_pivot);
                if (take)
                {
                    best_limit = std::min(best_limit, limit_i);
                    leave_row = static_cast<int>(i);
                    leave_to_lower = to_lower;
                    leave_pivot = a;
                }
            }
            if (range <= best_limit)
                leave_row = -1;
            const double step = std::min(range, best_limit);
            if (!std::isfinite(step))
                throw NumericalFailure("simplex: unbounded direction with finite bounds");
            for (std::size_t i = 0; i < tableau_.size(); ++i)
            {
                const double a = tableau_[i][enter];
                if (a != 0.0)
                    x_[basis_[i]] -= dir * step * a;
            }
            if (step < 1e-12)
            {
                if (++degenerate > degenerate_limit)
                    bland = true;
            }
            else
                degenerate = 0;
            if (leave_row < 0)
            {
                // bound flip
                state_[enter] = increase ? VarState::AtUpper : VarState::AtLower;
                x_[enter] = increase ? hi_[enter] : lo_[enter];
                continue;
            }
            x_[enter] += dir * step;
            const int leaving = basis_[leave_row];
            x_[leaving] = leave_to_lower ? lo_[leaving] : hi_[leaving];
            pivot(leave_row, enter);
            state_[leaving] = leave_to_lower ? VarState::AtLower : VarState::AtUpper;
        }
    }

    // Dual simplex from a dual feasible basis. Returns false on primal infeasibility.
    bool dual(int& iterations)
    {
        const int limit = max_iterations();
        while (true)
        {
            if (++iterations > limit)
                throw NumericalFailure("dual simplex iteration limit exceeded");
            int r = -1;
            double worst = feasibility_tolerance;
            for (std::size_t i = 0; i < tableau_.size(); ++i)
            {
                const int b = basis_[i];
                const double viol = std::max(lo_[b] - x_[b], x_[b] - hi_[b]);
                if (viol > worst)
                {
                    worst = viol;
                    r = static_cast<int>(i);
                }
            }
            if (r < 0)
            {
                --iterations;
                return true;
            }
            const int leaving = basis_[r];
            const bool raise = x_[leaving] < lo_[leaving];
            const double target = raise ? lo_[leaving] : hi_[leaving];
            const auto& row = tableau_[r];
            int enter = -1;
            double best_ratio = infinity;
            double best_pivot = 0.0;
            for (int j = 0; j < columns(); ++j)
            {
                if (state_[j] == VarState::Basic || hi_[j] <= lo_[j])
                    continue;
                const double a = row[j];
                if (std::abs(a) < pivot_tolerance)
                    continue;
                const bool at_lower = state_[j] == VarState::AtLower;
                const bool ok = raise ? (at_lower ? a < 0 : a > 0) : (at_lower ? a > 0 : a < 0);
                if (!ok)
                    continue;
                const double ratio = std::abs(d_[j]) / std::abs(a);
                if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && std::abs(a) > std::abs(best_pivot)))
                {
                    best_ratio = ratio;
                    enter = j;
                    best_pivot = a;
                }
            }
            if (enter < 0)
                return false;
            const double delta = (x_[leaving] - target) / row[enter];
            for (std::size_t i = 0; i < tableau_.size(); ++i)
            {
                const double a = tableau_[i][enter];
                if (a != 0.0)
                    x_[basis_[i]] -= a * delta;
            }
            x_[enter] += delta;
            x_[leaving] = target;
            pivot(r, enter);
            state_[leaving] = raise ? VarState::AtLower : VarState::AtUpper;
        }
    }

    // Recomputes basic values from B^-1 (the slack columns) and the nonbasic values.
    void refine()
    {
        const std::size_t m = tableau_.size();
        std::vector<double> residual(m);
        for (std::size_t k = 0; k < m; ++k)
        {
            const auto& row = lp_.rows[k];
            double v = row.rhs;
            for (const auto& t : row.terms)
                if (state_[t.var] != VarState::Basic)
                    v -= t.coeff * x_[t.var];
            if (state_[slack_[k]] != VarState::Basic)
                v -= x_[slack_[k]];
            const int a = artificial_in_row_[k];
            if (a >= 0 && state_[a] != VarState::Basic)
                v -= artificial_sign_[k] * x_[a];
            residual[k] = v;
        }
        for (std::size_t i = 0; i < m; ++i)
        {
            double v = 0.0;
            const auto& row = tableau_[i];
            for (std::size_t k = 0; k < m; ++k)
                v += row[slack_[k]] * residual[k];
            x_[basis_[i]] = v;
        }
    }

    LinearProgram lp_;
    int n_ = 0;
    std::vector<std::vector<double>> tableau_;
    std::vector<double> lo_, hi_, cost_, x_, d_;
    std::vector<VarState> state_;
    std::vector<int> basis_;
    std::vector<int> position_;
    std::vector<int> slack_;
    std::vector<int> artificial_;
    std::vector<int> artificial_in_row_;
    std::vector<double> artificial_sign_;
    std::vector<int> nonzero_;
};

} // namespace detail

/**
 * Solves max c.x over rows and finite bounds with a bounded-variable primal
 * simplex (artificial-variable phase 1). Returns Infeasible when phase 1
 * ends with positive artificial mass; throws NumericalFailure when the
 * iteration cap of 50 * (rows + vars) is exceeded.
 */
inline LpSolution solve(const LinearProgram& lp)
{
    auto tableau = std::make_shared<detail::Tableau>(lp);
    int iterations = 0;
    const LpStatus status = tableau->solve_cold(iterations);
    LpSolution sol = tableau->extract(status, iterations);
    if (status == LpStatus::Optimal)
    {
        if (!tableau->verify(sol.values, 1e-6))
            throw NumericalFailure("simplex: final point violates a row");
        sol.basis = std::move(tableau);
    }
    return sol;
}

/**
 * Result of solve(lp with new_rows appended). Warm-starts from sol's basis
 * with the dual simplex and falls back to a cold solve if that path fails.
 */
inline LpSolution add_rows_and_resolve(const LinearProgram& lp, const LpSolution& sol, const std::vector<Row>& new_rows)
{
    LinearProgram extended = lp;
    extended.rows.insert(extended.rows.end(), new_rows.begin(), new_rows.end());
    if (sol.status != LpStatus::Optimal || !sol.basis || sol.basis->program().rows.size() != lp.rows.size())
        return solve(extended);
    try
    {
        auto tableau = std::make_shared<detail::Tableau>(*sol.basis);
        int iterations = 0;
        const LpStatus status = tableau->add_rows(new_rows, iterations);
        LpSolution out = tableau->extract(status, iterations);
        if (status == LpStatus::Optimal)
        {
            if (!tableau->verify(out.values, 1e-6))
                return solve(extended);
            out.basis = std::move(tableau);
        }
        return out;
    }
    catch (const NumericalFailure&)
    {
        return solve(extended);
    }
}

} // namespace mbsp::lp
