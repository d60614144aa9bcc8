#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jsc/cones.hpp"
#include "jsc/enumerate.hpp"
#include "jsc/linalg.hpp"
#include "jsc/lp.hpp"

namespace jsc {

struct ConicLowerBound {
    double r = 0.0;
    Eigen::VectorXd witness;  // x in K with A x - r x in K for all A
    std::size_t iterations = 0;
};

namespace detail {

// Is there x = G l, l >= 0, sum l = 1, with A x - r x in K for every A?
inline std::optional<Eigen::VectorXd> conic_witness(const MatrixSet& sigma, const Eigen::MatrixXd& g, double r,
                                                    double lp_tol) {
    const auto n = static_cast<std::size_t>(g.rows());
    const auto ng = static_cast<std::size_t>(g.cols());
    const std::size_t m = sigma.size();
    LPProblem p;
    p.num_vars = ng * (m + 1);  // l, then mu_A for each member
    p.add([&] {
        std::vector<double> row(p.num_vars, 0.0);
        std::fill(row.begin(), row.begin() + static_cast<long>(ng), 1.0);
        return row;
    }(), Relation::equal, 1.0);
    for (std::size_t a = 0; a < m; ++a) {
        const Eigen::MatrixXd shifted = sigma[a].values() * g - r * g;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row(p.num_vars, 0.0);
            for (std::size_t j = 0; j < ng; ++j) {
                row[j] = shifted(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                row[ng * (a + 1) + j] = -g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
            p.add(std::move(row), Relation::equal, 0.0);
        }
    }
    const auto res = lp_feasible(p, lp_tol);
    if (res.status != LPStatus::feasible) return std::nullopt;
    Eigen::VectorXd lambda(static_cast<Eigen::Index>(ng));
    for (std::size_t j = 0; j < ng; ++j) lambda(static_cast<Eigen::Index>(j)) = res.x[j];
    return Eigen::VectorXd(g * lambda);
}

} // namespace detail

/**
 * Largest r for which some nonzero x in K satisfies A x >=_K r x for every
 * member, found by bisection on [0, min ||A||_2]. A certified lower bound on
 * the joint spectral subradius up to the LP tolerance.
 *
 * Throws DomainError when a member does not leave K invariant.
 */
inline ConicLowerBound conic_subradius_lower(const MatrixSet& sigma, const PolyhedralCone& k, double tol = 1e-10,
                                             std::size_t max_iterations = 60) {
    if (k.dim() != sigma.dim()) throw DomainError("cone dimension does not match the matrices");
    if (!is_invariant(sigma, k)) throw DomainError("conic_subradius_lower: a member does not leave the cone invariant");
    const auto g = k.generator_matrix();
    const double lp_tol = std::min(tol, 1e-10);
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& a : sigma) hi = std::min(hi, operator_norm(a, NormKind::two));

    ConicLowerBound out;
    if (auto w = detail::conic_witness(sigma, g, hi, lp_tol)) {
        out.r = hi;
        out.witness = *w;
        return out;
    }
    double lo = 0.0;
    auto best = detail::conic_witness(sigma, g, lo, lp_tol);
    if (!best) throw NumericalError("conic LP infeasible at r = 0 despite invariance");
    std::size_t it = 0;
    for (; it < max_iterations && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (auto w = detail::conic_witness(sigma, g, mid, lp_tol)) {
            lo = mid;
            best = std::move(w);
        } else {
            hi = mid;
        }
    }
    out.r = lo;
    out.witness = *best;
    out.iterations = it;
    return out;
}

struct SubradiusReport {
    BoundInterval interval;
    std::optional<double> conic_lower;
    std::vector<std::string> warnings;

    friend bool operator==(const SubradiusReport&, const SubradiusReport&) = default;
};

/// Subradius interval from an existing bound report plus an optional cone.
inline SubradiusReport subradius_from_bounds(const MatrixSet& sigma, const BoundReport& bounds,
                                             const std::optional<PolyhedralCone>& cone, double tol) {
    SubradiusReport rep;
    double lower = 0.0;
    std::string lower_source = rule::trivial;
    if (cone) {
        if (cone->dim() != sigma.dim()) throw DomainError("cone dimension does not match the matrices");
        if (is_invariant(sigma, *cone)) {
            const auto c = conic_subradius_lower(sigma, *cone, std::min(tol, 1e-10));
            lower = c.r;
            lower_source = rule::conic;
            rep.conic_lower = c.r;
        } else {
            rep.warnings.push_back("cone is not invariant under every member; conic lower bound skipped");
        }
    }
    rep.interval = make_interval(lower, lower_source, bounds.best_interval_sub.upper,
                                 bounds.best_interval_sub.upper_source, tol);
    return rep;
}

/**
 * [conic lower bound (0 without a usable cone), min over t of the
 * single-product upper certificates].
 */
inline SubradiusReport subradius_bounds(const MatrixSet& sigma, std::size_t t_max,
                                        const std::optional<PolyhedralCone>& cone = std::nullopt,
                                        double tol = default_interval_tol, NormKind norm = NormKind::two,
                                        std::uint64_t budget = default_product_budget) {
    const auto bounds = enumerate_bounds(sigma, t_max, norm, 0.0, budget, tol);
    return subradius_from_bounds(sigma, bounds, cone, tol);
}

} // namespace jsc
