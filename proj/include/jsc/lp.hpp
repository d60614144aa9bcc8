#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "jsc/errors.hpp"

namespace jsc {

enum class Relation { less_equal, equal, greater_equal };

struct LinearConstraint {
    std::vector<double> coeffs;
    Relation relation = Relation::equal;
    double rhs = 0.0;
};

/**
 * Small dense linear program.
 *
 * Variables are nonnegative unless flagged in free_vars. When an objective is
 * present it is minimised.
 */
struct LPProblem {
    std::size_t num_vars = 0;
    std::vector<LinearConstraint> constraints;
    std::vector<bool> free_vars;  // empty: all nonnegative
    std::optional<std::vector<double>> objective;

    void add(std::vector<double> coeffs, Relation rel, double rhs) {
        constraints.push_back({std::move(coeffs), rel, rhs});
    }

    bool is_free(std::size_t j) const { return !free_vars.empty() && free_vars[j]; }

    void validate() const {
        if (num_vars == 0) throw ValidationError("LP must have at least one variable");
        if (!free_vars.empty() && free_vars.size() != num_vars) {
            throw ValidationError("LP free-variable mask has wrong length");
        }
        if (objective && objective->size() != num_vars) throw ValidationError("LP objective has wrong length");
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            if (constraints[i].coeffs.size() != num_vars) {
                throw ValidationError("LP constraint " + std::to_string(i) + " has " +
                                      std::to_string(constraints[i].coeffs.size()) + " coefficients, expected " +
                                      std::to_string(num_vars));
            }
        }
    }
};

enum class LPStatus { feasible, infeasible, optimal, unbounded };

struct LPResult {
    LPStatus status = LPStatus::infeasible;
    std::vector<double> x;          // witness / optimum, empty when infeasible
    double objective = 0.0;         // optimum value when status == optimal
    double infeasibility = 0.0;     // phase-one optimum on the row-scaled system
};

namespace detail {

// Dense tableau simplex with Bland's anti-cycling rule.
class SimplexTableau {
public:
    SimplexTableau(const LPProblem& p, std::size_t max_iterations) : max_iter_(max_iterations) {
        p.validate();
        // Column layout: structural (free vars split into +/-), slack/surplus, artificial.
        for (std::size_t j = 0; j < p.num_vars; ++j) {
            plus_col_.push_back(ncols_++);
            minus_col_.push_back(p.is_free(j) ? static_cast<long>(ncols_++) : -1L);
        }
        num_structural_ = ncols_;
        rows_ = p.constraints.size();

        struct RowPlan {
            std::vector<double> c;
            double rhs;
            Relation rel;
        };
        std::vector<RowPlan> plan;
        plan.reserve(rows_);
        for (const auto& con : p.constraints) {
            RowPlan r{std::vector<double>(num_structural_, 0.0), con.rhs, con.relation};
            for (std::size_t j = 0; j < p.num_vars; ++j) {
                r.c[plus_col_[j]] = con.coeffs[j];
                if (minus_col_[j] >= 0) r.c[static_cast<std::size_t>(minus_col_[j])] = -con.coeffs[j];
            }
            double scale = std::abs(r.rhs);
            for (double v : r.c) scale = std::max(scale, std::abs(v));
            if (scale > 0.0) {
                for (double& v : r.c) v /= scale;
                r.rhs /= scale;
            }
            if (r.rhs < 0.0) {
                for (double& v : r.c) v = -v;
                r.rhs = -r.rhs;
                if (r.rel == Relation::less_equal) r.rel = Relation::greater_equal;
                else if (r.rel == Relation::greater_equal) r.rel = Relation::less_equal;
            }
            plan.push_back(std::move(r));
        }
        std::size_t num_slack = 0;
        std::size_t num_art = 0;
        for (const auto& r : plan) {
            if (r.rel != Relation::equal) ++num_slack;
            if (r.rel != Relation::less_equal) ++num_art;
        }
        first_art_ = num_structural_ + num_slack;
        ncols_ = first_art_ + num_art;
        width_ = ncols_ + 1;
        t_.assign((rows_ + 1) * width_, 0.0);
        basis_.assign(rows_, 0);

        std::size_t slack = num_structural_;
        std::size_t art = first_art_;
        for (std::size_t i = 0; i < rows_; ++i) {
            const auto& r = plan[i];
            for (std::size_t j = 0; j < num_structural_; ++j) at(i, j) = r.c[j];
            rhs(i) = r.rhs;
            if (r.rel == Relation::less_equal) {
                at(i, slack) = 1.0;
                basis_[i] = slack++;
            } else {
                if (r.rel == Relation::greater_equal) at(i, slack++) = -1.0;
                at(i, art) = 1.0;
                basis_[i] = art++;
            }
        }
    }

    // Minimise the artificial sum. Returns the phase-one optimum.
    double phase_one() {
        std::vector<double> cost(ncols_, 0.0);
        for (std::size_t j = first_art_; j < ncols_; ++j) cost[j] = 1.0;
        load_objective(cost);
        run(/*allow_artificial=*/true);
        return -obj_rhs();
    }

    // Pivot remaining zero-level artificials out of the basis; drop rows
    // that are redundant.
    void expel_artificials(double tol) {
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < first_art_) continue;
            std::size_t best = ncols_;
            double best_abs = tol;
            for (std::size_t j = 0; j < first_art_; ++j) {
                if (std::abs(at(i, j)) > best_abs) {
                    best_abs = std::abs(at(i, j));
                    best = j;
                }
            }
            if (best < ncols_) pivot(i, best);
            else dead_row_.push_back(i);
        }
    }

    // Returns false when unbounded.
    bool phase_two(const std::vector<double>& structural_cost) {
        std::vector<double> cost(ncols_, 0.0);
        for (std::size_t j = 0; j < structural_cost.size(); ++j) {
            cost[plus_col_[j]] = structural_cost[j];
            if (minus_col_[j] >= 0) cost[static_cast<std::size_t>(minus_col_[j])] = -structural_cost[j];
        }
        load_objective(cost);
        return run(/*allow_artificial=*/false);
    }

    double objective_value() const { return -obj_rhs(); }

    std::vector<double> solution(std::size_t num_vars) const {
        std::vector<double> col(ncols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) col[basis_[i]] = rhs(i);
        std::vector<double> x(num_vars, 0.0);
        for (std::size_t j = 0; j < num_vars; ++j) {
            x[j] = std::max(0.0, col[plus_col_[j]]);
            if (minus_col_[j] >= 0) x[j] -= std::max(0.0, col[static_cast<std::size_t>(minus_col_[j])]);
        }
        return x;
    }

private:
    static constexpr double pivot_eps = 1e-11;
    static constexpr double cost_eps = 1e-11;

    double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
    double& rhs(std::size_t i) { return t_[i * width_ + ncols_]; }
    double rhs(std::size_t i) const { return t_[i * width_ + ncols_]; }
    double& obj(std::size_t j) { return t_[rows_ * width_ + j]; }
    double obj_rhs() const { return t_[rows_ * width_ + ncols_]; }

    bool is_dead(std::size_t i) const {
        return std::find(dead_row_.begin(), dead_row_.end(), i) != dead_row_.end();
    }

    // Reduced-cost row for the given cost vector under the current basis.
    void load_objective(const std::vector<double>& cost) {
        for (std::size_t j = 0; j < ncols_; ++j) obj(j) = cost[j];
        t_[rows_ * width_ + ncols_] = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= ncols_; ++j) t_[rows_ * width_ + j] -= cb * at(i, j);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        const double piv = at(r, c);
        for (std::size_t j = 0; j <= ncols_; ++j) at(r, j) /= piv;
        for (std::size_t i = 0; i <= rows_; ++i) {
            if (i == r) continue;
            const double f = t_[i * width_ + c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= ncols_; ++j) t_[i * width_ + j] -= f * at(r, j);
            t_[i * width_ + c] = 0.0;
        }
        basis_[r] = c;
    }

    bool run(bool allow_artificial) {
        const std::size_t limit = allow_artificial ? ncols_ : first_art_;
        for (std::size_t iter = 0; iter < max_iter_; ++iter) {
            // Bland: smallest improving column.
            std::size_t enter = ncols_;
            for (std::size_t j = 0; j < limit; ++j) {
                if (obj(j) < -cost_eps) {
                    enter = j;
                    break;
                }
            }
            if (enter == ncols_) return true;
            // Ratio test, ties by smallest basic index.
            std::size_t leave = rows_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows_; ++i) {
                if (is_dead(i)) continue;
                const double a = at(i, enter);
                if (a <= pivot_eps) continue;
                const double ratio = std::max(0.0, rhs(i)) / a;
                if (ratio < best_ratio - 1e-14 ||
                    (std::abs(ratio - best_ratio) <= 1e-14 && leave < rows_ && basis_[i] < basis_[leave])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave == rows_) return false;
            pivot(leave, enter);
        }
        throw NumericalError("simplex iteration cap (" + std::to_string(max_iter_) +
                             ") exceeded; problem may be cycling, widen tol or perturb");
    }

    std::size_t max_iter_;
    std::size_t rows_ = 0;
    std::size_t ncols_ = 0;
    std::size_t width_ = 0;
    std::size_t num_structural_ = 0;
    std::size_t first_art_ = 0;
    std::vector<std::size_t> plus_col_;
    std::vector<long> minus_col_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> dead_row_;
};

inline std::size_t default_iteration_cap(const LPProblem& p) {
    return 50 * (p.constraints.size() + 2 * p.num_vars) + 1000;
}

} // namespace detail

/// Largest constraint violation of x, measured on each row scaled by its
/// largest coefficient magnitude.
inline double lp_violation(const LPProblem& p, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        if (!p.is_free(j)) worst = std::max(worst, -x[j]);
    }
    for (const auto& con : p.constraints) {
        double lhs = 0.0;
        double scale = std::abs(con.rhs);
        for (std::size_t j = 0; j < p.num_vars; ++j) {
            lhs += con.coeffs[j] * x[j];
            scale = std::max(scale, std::abs(con.coeffs[j]));
        }
        if (scale == 0.0) scale = 1.0;
        const double d = (lhs - con.rhs) / scale;
        switch (con.relation) {
        case Relation::less_equal: worst = std::max(worst, d); break;
        case Relation::greater_equal: worst = std::max(worst, -d); break;
        case Relation::equal: worst = std::max(worst, std::abs(d)); break;
        }
    }
    return worst;
}

/**
 * Phase-one feasibility test.
 *
 * Feasible carries a witness satisfying every (row-scaled) constraint within
 * tol; Infeasible means the phase-one optimum exceeded tol. Throws
 * NumericalError when the iteration cap is hit.
 */
inline LPResult lp_feasible(const LPProblem& p, double tol) {
    if (!(tol > 0.0)) throw DomainError("lp_feasible: tol must be positive");
    detail::SimplexTableau tab(p, detail::default_iteration_cap(p));
    LPResult res;
    res.infeasibility = tab.phase_one();
    if (res.infeasibility > tol) {
        res.status = LPStatus::infeasible;
        return res;
    }
    res.x = tab.solution(p.num_vars);
    if (lp_violation(p, res.x) > tol) {
        res.status = LPStatus::infeasible;
        res.x.clear();
        return res;
    }
    res.status = LPStatus::feasible;
    return res;
}

/// Minimise the objective (phase one, then phase two).
inline LPResult lp_solve(const LPProblem& p, double tol) {
    if (!p.objective) return lp_feasible(p, tol);
    if (!(tol > 0.0)) throw DomainError("lp_solve: tol must be positive");
    detail::SimplexTableau tab(p, detail::default_iteration_cap(p));
    LPResult res;
    res.infeasibility = tab.phase_one();
    if (res.infeasibility > tol) {
        res.status = LPStatus::infeasible;
        return res;
    }
    tab.expel_artificials(1e-9);
    if (!tab.phase_two(*p.objective)) {
        res.status = LPStatus::unbounded;
        return res;
    }
    res.status = LPStatus::optimal;
    res.x = tab.solution(p.num_vars);
    res.objective = 0.0;
    for (std::size_t j = 0; j < p.num_vars; ++j) res.objective += (*p.objective)[j] * res.x[j];
    return res;
}

} // namespace jsc
