#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jsc/errors.hpp"
#include "jsc/linalg.hpp"
#include "jsc/lp.hpp"

namespace jsc {

// Relative depth used to separate interior points from boundary points: x is
// interior when x/|x| - interior_epsilon * g_mean stays in the cone, g_mean
// being the unit-normalised mean generator.
inline constexpr double interior_epsilon = 1e-7;

inline constexpr double default_cone_tol = 1e-9;

/**
 * Finitely generated cone {sum_j l_j g_j : l >= 0} in R^n.
 *
 * Generators are stored normalised to unit Euclidean length. Properness
 * (full dimension and pointedness) is not required at construction; the
 * operations that need it check it.
 */
class PolyhedralCone {
public:
    static PolyhedralCone orthant(std::size_t n) {
        if (n < 1) throw ValidationError("orthant dimension must be at least 1");
        std::vector<Eigen::VectorXd> gens;
        for (std::size_t i = 0; i < n; ++i) gens.push_back(Eigen::VectorXd::Unit(static_cast<Eigen::Index>(n),
                                                                               static_cast<Eigen::Index>(i)));
        return PolyhedralCone(std::move(gens), true);
    }

    static PolyhedralCone from_generators(std::vector<Eigen::VectorXd> gens) {
        if (gens.empty()) throw ValidationError("cone needs at least one generator");
        const auto n = gens.front().size();
        if (n < 1) throw ValidationError("cone dimension must be at least 1");
        for (std::size_t j = 0; j < gens.size(); ++j) {
            auto& g = gens[j];
            if (g.size() != n) {
                throw ValidationError("generator " + std::to_string(j) + " has dimension " +
                                      std::to_string(g.size()) + ", expected " + std::to_string(n));
            }
            if (!g.allFinite()) throw ValidationError("generator " + std::to_string(j) + " has non-finite entries");
            const double nrm = g.norm();
            if (nrm == 0.0) throw ValidationError("generator " + std::to_string(j) + " is zero");
            g /= nrm;
        }
        return PolyhedralCone(std::move(gens), false);
    }

    static PolyhedralCone from_generators(const std::vector<std::vector<double>>& rows) {
        std::vector<Eigen::VectorXd> gens;
        for (const auto& r : rows) gens.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size())));
        return from_generators(std::move(gens));
    }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(gens_.front().size()); }
    const std::vector<Eigen::VectorXd>& generators() const noexcept { return gens_; }
    bool is_orthant() const noexcept { return orthant_; }

    // n x g matrix whose columns are the generators.
    Eigen::MatrixXd generator_matrix() const {
        Eigen::MatrixXd g(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(gens_.size()));
        for (std::size_t j = 0; j < gens_.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = gens_[j];
        return g;
    }

    Eigen::VectorXd mean_direction() const {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
        for (const auto& g : gens_) m += g;
        const double nrm = m.norm();
        return nrm > 0.0 ? Eigen::VectorXd(m / nrm) : m;
    }

    bool is_full_dimensional() const {
        if (orthant_) return true;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(generator_matrix());
        qr.setThreshold(1e-10);
        return static_cast<std::size_t>(qr.rank()) == dim();
    }

    // No nonzero conic combination of the generators vanishes.
    bool is_pointed(double tol = default_cone_tol) const {
        if (orthant_) return true;
        const auto g = generator_matrix();
        LPProblem p;
        p.num_vars = gens_.size();
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            std::vector<double> row(g.cols());
            for (Eigen::Index j = 0; j < g.cols(); ++j) row[static_cast<std::size_t>(j)] = g(i, j);
            p.add(std::move(row), Relation::equal, 0.0);
        }
        p.add(std::vector<double>(gens_.size(), 1.0), Relation::equal, 1.0);
        return lp_feasible(p, tol).status == LPStatus::infeasible;
    }

    bool is_proper(double tol = default_cone_tol) const { return is_full_dimensional() && is_pointed(tol); }

    friend bool operator==(const PolyhedralCone& a, const PolyhedralCone& b) {
        if (a.orthant_ != b.orthant_ || a.gens_.size() != b.gens_.size()) return false;
        for (std::size_t j = 0; j < a.gens_.size(); ++j) {
            if (a.gens_[j] != b.gens_[j]) return false;
        }
        return true;
    }

private:
    PolyhedralCone(std::vector<Eigen::VectorXd> gens, bool orthant) : gens_(std::move(gens)), orthant_(orthant) {}

    std::vector<Eigen::VectorXd> gens_;
    bool orthant_;
};

enum class Membership { outside, boundary, interior };

struct MembershipResult {
    Membership where = Membership::outside;
    bool degenerate = false;  // cone has empty interior; interior was not testable

    bool is_member() const { return where != Membership::outside; }
};

namespace detail {

// x in K with violation at most tol (x normalised beforehand by the caller).
inline bool cone_contains(const Eigen::VectorXd& x, const PolyhedralCone& k, double tol) {
    if (k.is_orthant()) return x.minCoeff() >= -tol;
    const auto g = k.generator_matrix();
    LPProblem p;
    p.num_vars = static_cast<std::size_t>(g.cols());
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(g.cols()));
        for (Eigen::Index j = 0; j < g.cols(); ++j) row[static_cast<std::size_t>(j)] = g(i, j);
        p.add(std::move(row), Relation::equal, x(i));
    }
    return lp_feasible(p, tol).status == LPStatus::feasible;
}

inline MembershipResult classify(const Eigen::VectorXd& x, const PolyhedralCone& k, double tol, bool full_dim) {
    const double nrm = x.norm();
    if (nrm == 0.0) return {Membership::boundary, !full_dim};
    const Eigen::VectorXd unit = x / nrm;
    if (!cone_contains(unit, k, tol)) return {Membership::outside, false};
    if (!full_dim) return {Membership::boundary, true};
    const Eigen::VectorXd shifted = unit - interior_epsilon * k.mean_direction();
    const double interior_tol = std::min(tol, 1e-3 * interior_epsilon);
    if (cone_contains(shifted, k, interior_tol)) return {Membership::interior, false};
    return {Membership::boundary, false};
}

} // namespace detail

/**
 * Locate x relative to K: outside, on the boundary, or interior.
 *
 * tol is relative to |x|. For a cone with empty interior a member is reported
 * as boundary with the degeneracy flag set.
 */
inline MembershipResult cone_membership(const Eigen::VectorXd& x, const PolyhedralCone& k,
                                        double tol = default_cone_tol) {
    if (static_cast<std::size_t>(x.size()) != k.dim()) {
        throw DomainError("vector dimension " + std::to_string(x.size()) + " does not match cone dimension " +
                          std::to_string(k.dim()));
    }
    if (!x.allFinite()) throw ValidationError("vector has non-finite entries");
    return detail::classify(x, k, tol, k.is_full_dimensional());
}

inline MembershipResult cone_membership(const std::vector<double>& x, const PolyhedralCone& k,
                                        double tol = default_cone_tol) {
    return cone_membership(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())), k, tol);
}

namespace detail {

inline void require_dims(const Eigen::MatrixXd& a, const PolyhedralCone& k) {
    if (static_cast<std::size_t>(a.rows()) != k.dim()) {
        throw DomainError("matrix dimension " + std::to_string(a.rows()) + " does not match cone dimension " +
                          std::to_string(k.dim()));
    }
}

inline bool is_invariant(const Eigen::MatrixXd& a, const PolyhedralCone& k, double tol) {
    require_dims(a, k);
    for (const auto& g : k.generators()) {
        const Eigen::VectorXd y = a * g;
        const double nrm = y.norm();
        if (nrm == 0.0) continue;
        if (!cone_contains(y / nrm, k, tol)) return false;
    }
    return true;
}

inline bool is_positive_map(const Eigen::MatrixXd& a, const PolyhedralCone& k, double tol) {
    for (const auto& g : k.generators()) {
        if (classify(a * g, k, tol, true).where != Membership::interior) return false;
    }
    return true;
}

} // namespace detail

/// AK subset of K, checked on the generators.
inline bool is_invariant(const Matrix& a, const PolyhedralCone& k, double tol = default_cone_tol) {
    return detail::is_invariant(a.values(), k, tol);
}

inline bool is_invariant(const MatrixSet& sigma, const PolyhedralCone& k, double tol = default_cone_tol) {
    return std::all_of(sigma.begin(), sigma.end(), [&](const Matrix& a) { return is_invariant(a, k, tol); });
}

/// AK \ {0} subset of int K. Requires K proper.
inline bool is_positive_map(const Matrix& a, const PolyhedralCone& k, double tol = default_cone_tol) {
    detail::require_dims(a.values(), k);
    if (!k.is_proper(tol)) throw DomainError("is_positive_map requires a proper cone");
    return detail::is_positive_map(a.values(), k, tol);
}

struct PrimitivityResult {
    bool primitive = false;
    std::size_t exponent = 0;  // smallest t with A^t K-positive, when primitive
    std::size_t horizon = 0;   // t_max that was searched
};

// Wielandt bound for the orthant, n^2 + 1 for other cones.
inline std::size_t default_primitivity_horizon(const PolyhedralCone& k) {
    const auto n = k.dim();
    return k.is_orthant() ? (n - 1) * (n - 1) + 1 : n * n + 1;
}

/**
 * Search t = 1..t_max for a K-positive power of A.
 *
 * Powers are renormalised at every step, which leaves positivity unchanged.
 * Throws DomainError when A does not leave K invariant.
 */
inline PrimitivityResult is_primitive(const Matrix& a, const PolyhedralCone& k, std::optional<std::size_t> t_max = {},
                                      double tol = default_cone_tol) {
    detail::require_dims(a.values(), k);
    if (!k.is_proper(tol)) throw DomainError("is_primitive requires a proper cone");
    if (!detail::is_invariant(a.values(), k, tol)) throw DomainError("is_primitive: matrix does not leave the cone invariant");
    const std::size_t horizon = t_max.value_or(default_primitivity_horizon(k));
    if (horizon < 1) throw DomainError("is_primitive: t_max must be at least 1");
    PrimitivityResult res;
    res.horizon = horizon;
    Eigen::MatrixXd p = a.values();
    for (std::size_t t = 1; t <= horizon; ++t) {
        const double scale = p.cwiseAbs().maxCoeff();
        if (scale == 0.0) break;
        p /= scale;
        if (detail::is_positive_map(p, k, tol)) {
            res.primitive = true;
            res.exponent = t;
            return res;
        }
        p = (p * a.values()).eval();
    }
    return res;
}

/// (K' \ {0}) subset of int K, checked on the generators of K'.
inline bool is_embedded_pair(const PolyhedralCone& outer, const PolyhedralCone& inner, double tol = default_cone_tol) {
    if (outer.dim() != inner.dim()) throw DomainError("embedded pair cones differ in dimension");
    if (!outer.is_full_dimensional()) return false;
    return std::all_of(inner.generators().begin(), inner.generators().end(), [&](const Eigen::VectorXd& g) {
        return detail::classify(g, outer, tol, true).where == Membership::interior;
    });
}

/// Drop duplicate and redundant generators, leaving the extreme rays.
inline std::vector<Eigen::VectorXd> reduce_to_extreme_rays(std::vector<Eigen::VectorXd> gens,
                                                           double tol = default_cone_tol) {
    for (auto& g : gens) g.normalize();
    std::vector<Eigen::VectorXd> unique;
    for (const auto& g : gens) {
        const bool dup = std::any_of(unique.begin(), unique.end(),
                                     [&](const Eigen::VectorXd& u) { return (u - g).cwiseAbs().maxCoeff() < 1e-12; });
        if (!dup) unique.push_back(g);
    }
    for (std::size_t j = 0; j < unique.size() && unique.size() > 1;) {
        std::vector<Eigen::VectorXd> others;
        for (std::size_t i = 0; i < unique.size(); ++i) {
            if (i != j) others.push_back(unique[i]);
        }
        const auto rest = PolyhedralCone::from_generators(others);
        if (detail::cone_contains(unique[j], rest, tol)) unique.erase(unique.begin() + static_cast<long>(j));
        else ++j;
    }
    return unique;
}

struct EmbeddedPair {
    PolyhedralCone outer;
    PolyhedralCone inner;
    std::optional<double> beta_bound;
    std::optional<double> beta_estimate;
    std::optional<double> column_ratio_c;
    bool inner_invariant = false;  // every member maps K' into K' (checked numerically)
};

/**
 * Invariant pair for a set of entrywise-positive matrices.
 *
 * K is the orthant and K' = {x >= 0 : max x <= c min x}, where c is the
 * largest column ratio max/min over all members. beta(K, K') <= c^2.
 */
inline EmbeddedPair construct_embedded_pair(const MatrixSet& sigma, double tol = default_cone_tol) {
    const auto n = sigma.dim();
    double c = 1.0;
    for (std::size_t m = 0; m < sigma.size(); ++m) {
        const auto& a = sigma[m].values();
        if (!(a.array() > 0.0).all()) {
            throw DomainError("positivity required: matrix " + std::to_string(m) + " has a non-positive entry");
        }
        for (Eigen::Index j = 0; j < a.cols(); ++j) c = std::max(c, a.col(j).maxCoeff() / a.col(j).minCoeff());
    }
    if (n > 20) throw SizeError("construct_embedded_pair: 2^n generator candidates too many for n = " + std::to_string(n));
    std::vector<Eigen::VectorXd> candidates;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = (mask >> i) & 1U ? c : 1.0;
        candidates.push_back(std::move(v));
    }
    auto inner = PolyhedralCone::from_generators(reduce_to_extreme_rays(std::move(candidates), tol));
    EmbeddedPair pair{PolyhedralCone::orthant(n), inner, c * c, std::nullopt, c, false};
    pair.inner_invariant = is_invariant(sigma, pair.inner, tol);
    return pair;
}

namespace detail {

// {s : p + s d in K}, endpoints may be infinite. Assumes p in K.
inline std::pair<double, double> line_cone_interval(const PolyhedralCone& k, const Eigen::VectorXd& p,
                                                    const Eigen::VectorXd& d, double tol) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (k.is_orthant()) {
        double lo = -inf;
        double hi = inf;
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            if (d(i) > 0.0) lo = std::max(lo, -p(i) / d(i));
            else if (d(i) < 0.0) hi = std::min(hi, -p(i) / d(i));
        }
        return {lo, hi};
    }
    const auto g = k.generator_matrix();
    const auto ng = static_cast<std::size_t>(g.cols());
    LPProblem lp;
    lp.num_vars = ng + 1;
    lp.free_vars.assign(ng + 1, false);
    lp.free_vars[ng] = true;
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        std::vector<double> row(ng + 1);
        for (std::size_t j = 0; j < ng; ++j) row[j] = g(i, static_cast<Eigen::Index>(j));
        row[ng] = -d(i);
        lp.add(std::move(row), Relation::equal, p(i));
    }
    auto endpoint = [&](double sign) {
        std::vector<double> cost(ng + 1, 0.0);
        cost[ng] = sign;
        lp.objective = cost;
        const auto res = lp_solve(lp, tol);
        if (res.status == LPStatus::unbounded) return -sign * inf;
        if (res.status != LPStatus::optimal) throw NumericalError("line does not meet the cone");
        return res.x[ng];
    };
    return {endpoint(1.0), endpoint(-1.0)};
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Largest chord ratio seen on the lines indexed [first, last); NaN if none admissible.
inline double beta_samples(const EmbeddedPair& pair, std::size_t first, std::size_t last, std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(pair.outer.dim());
    const auto& inner_gens = pair.inner.generators();
    double best = std::numeric_limits<double>::quiet_NaN();
    constexpr double min_gap = 1e-9;
    for (std::size_t i = first; i < last; ++i) {
        std::mt19937_64 rng(mix_seed(seed, i));
        std::exponential_distribution<double> expo(1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
        for (const auto& g : inner_gens) p += expo(rng) * g;
        if (p.norm() == 0.0) continue;
        p.normalize();
        Eigen::VectorXd d(n);
        for (Eigen::Index j = 0; j < n; ++j) d(j) = gauss(rng);
        if (d.norm() == 0.0) continue;
        d.normalize();
        const auto [a, b] = line_cone_interval(pair.outer, p, d, 1e-10);
        if (!std::isfinite(a) || !std::isfinite(b)) continue;  // K must be cut in a bounded segment
        auto [ai, bi] = line_cone_interval(pair.inner, p, d, 1e-10);
        ai = std::min(ai, 0.0);
        bi = std::max(bi, 0.0);
        // Both labelings of the line: x at the lower end, or at the upper end.
        if (ai - a > min_gap) best = std::isnan(best) ? (bi - a) / (ai - a) : std::max(best, (bi - a) / (ai - a));
        if (b - bi > min_gap) best = std::isnan(best) ? (b - ai) / (b - bi) : std::max(best, (b - ai) / (b - bi));
    }
    return best;
}

} // namespace detail

/**
 * Monte Carlo lower estimate of beta(K, K').
 *
 * Line i passes through a random point of K' in a random direction, drawn
 * from a generator seeded by (seed, i), so a longer run extends a shorter one
 * and the estimate is nondecreasing in samples. Lines meeting K in an
 * unbounded set, or whose K-endpoint is within 1e-9 of the K' endpoint, are
 * skipped. Samples are split over `workers` threads; the max-reduction is
 * order independent.
 */
inline double estimate_beta(const EmbeddedPair& pair, std::size_t samples, std::uint64_t seed,
                            unsigned workers = 1) {
    if (samples < 1) throw DomainError("estimate_beta: samples must be positive");
    if (!is_embedded_pair(pair.outer, pair.inner)) throw DomainError("estimate_beta: cones do not form an embedded pair");
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(samples)));
    std::vector<double> partial(workers, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (samples + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t first = w * chunk;
            const std::size_t last = std::min(samples, first + chunk);
            if (first >= last) continue;
            auto job = [&, w, first, last] {
                try {
                    partial[w] = detail::beta_samples(pair, first, last, seed);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            };
            if (workers == 1) job();
            else pool.emplace_back(job);
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    double best = std::numeric_limits<double>::quiet_NaN();
    for (double v : partial) {
        if (!std::isnan(v)) best = std::isnan(best) ? v : std::max(best, v);
    }
    if (std::isnan(best)) {
        throw SamplingError("estimate_beta: none of " + std::to_string(samples) + " sampled lines was admissible");
    }
    return std::max(1.0, best);
}

} // namespace jsc
