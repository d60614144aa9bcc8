#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jsc/cones.hpp"
#include "jsc/enumerate.hpp"
#include "jsc/linalg.hpp"
#include "jsc/subradius.hpp"

namespace jsc {

/// max(sup_A inf_B |A - B|, sup_B inf_A |A - B|) in the chosen norm.
inline double hausdorff_distance(const MatrixSet& a, const MatrixSet& b, NormKind kind = NormKind::two) {
    if (a.dim() != b.dim()) throw DomainError("hausdorff_distance: sets differ in dimension");
    auto directed = [kind](const MatrixSet& x, const MatrixSet& y) {
        double worst = 0.0;
        for (const auto& p : x) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& q : y) nearest = std::min(nearest, detail::matrix_norm(p.values() - q.values(), kind));
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

struct PerturbationOptions {
    std::vector<double> deltas;
    std::size_t trials = 20;
    std::uint64_t seed = 0;
    std::size_t t_max = 8;
    std::optional<PolyhedralCone> cone;
    bool preserve_positivity = false;
    NormKind norm = NormKind::two;
    double tol = default_interval_tol;
    std::uint64_t budget = default_product_budget;
};

struct PerturbationTrial {
    double hausdorff = 0.0;  // realised, max-entry norm
    BoundInterval jsr;
    BoundInterval sub;
    double jsr_deviation = 0.0;  // |midpoint - base midpoint|
    double sub_deviation = 0.0;

    friend bool operator==(const PerturbationTrial&, const PerturbationTrial&) = default;
};

struct PerturbationLevel {
    double delta = 0.0;
    double max_hausdorff = 0.0;
    double worst_jsr_deviation = 0.0;
    double worst_sub_deviation = 0.0;
    std::vector<PerturbationTrial> trials;

    friend bool operator==(const PerturbationLevel&, const PerturbationLevel&) = default;
};

struct PerturbationReport {
    BoundInterval base_jsr;
    BoundInterval base_sub;
    std::vector<PerturbationLevel> levels;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    bool preserve_positivity = false;
    std::vector<std::string> warnings;

    friend bool operator==(const PerturbationReport&, const PerturbationReport&) = default;
};

namespace detail {

struct IntervalPair {
    BoundInterval jsr;
    BoundInterval sub;
};

inline IntervalPair both_intervals(const MatrixSet& sigma, const PerturbationOptions& opt,
                                   std::vector<std::string>* warnings) {
    const auto bounds = enumerate_bounds(sigma, opt.t_max, opt.norm, 0.0, opt.budget, opt.tol);
    auto sub = subradius_from_bounds(sigma, bounds, opt.cone, opt.tol);
    if (warnings) {
        for (auto& w : sub.warnings) {
            if (std::find(warnings->begin(), warnings->end(), w) == warnings->end()) warnings->push_back(w);
        }
    }
    return {bounds.best_interval_jsr, sub.interval};
}

// Uniform on [0, 1) from the top 53 bits of one engine draw.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace detail

/**
 * Random entrywise perturbations of sigma at each radius delta.
 *
 * Each entry moves by delta * (2u - 1), u uniform, with one mt19937_64 stream
 * seeded by `seed` and consumed in delta, trial, member, row-major order. The
 * realised Hausdorff distance is reported in the max-entry norm.
 */
inline PerturbationReport perturbation_study(const MatrixSet& sigma, const PerturbationOptions& opt) {
    if (opt.trials < 1) throw DomainError("perturbation_study: trials must be at least 1");
    for (std::size_t i = 0; i < opt.deltas.size(); ++i) {
        if (!(opt.deltas[i] >= 0.0) || !std::isfinite(opt.deltas[i])) {
            throw DomainError("perturbation deltas must be finite and nonnegative");
        }
        if (i > 0 && opt.deltas[i] >= opt.deltas[i - 1]) throw DomainError("perturbation deltas must be decreasing");
    }
    double min_entry = std::numeric_limits<double>::infinity();
    for (const auto& a : sigma) min_entry = std::min(min_entry, a.values().minCoeff());
    if (opt.preserve_positivity) {
        if (!(min_entry > 0.0)) throw DomainError("positivity-preserving mode needs strictly positive matrices");
        for (double d : opt.deltas) {
            if (d >= min_entry) {
                throw DomainError("delta " + std::to_string(d) + " is not below the smallest entry " +
                                  std::to_string(min_entry));
            }
        }
    }

    PerturbationReport rep;
    rep.trials = opt.trials;
    rep.seed = opt.seed;
    rep.preserve_positivity = opt.preserve_positivity;
    const auto base = detail::both_intervals(sigma, opt, &rep.warnings);
    rep.base_jsr = base.jsr;
    rep.base_sub = base.sub;

    std::mt19937_64 rng(opt.seed);
    const auto n = static_cast<Eigen::Index>(sigma.dim());
    for (double delta : opt.deltas) {
        PerturbationLevel level;
        level.delta = delta;
        for (std::size_t trial = 0; trial < opt.trials; ++trial) {
            std::vector<Matrix> members;
            for (const auto& a : sigma) {
                Eigen::MatrixXd b = a.values();
                for (Eigen::Index i = 0; i < n; ++i) {
                    for (Eigen::Index j = 0; j < n; ++j) {
                        b(i, j) += delta * (2.0 * detail::unit_uniform(rng) - 1.0);
                        if (opt.preserve_positivity) b(i, j) = std::max(b(i, j), std::numeric_limits<double>::min());
                    }
                }
                members.emplace_back(std::move(b));
            }
            const MatrixSet perturbed(std::move(members));
            const auto iv = detail::both_intervals(perturbed, opt, &rep.warnings);
            PerturbationTrial tr{hausdorff_distance(sigma, perturbed, NormKind::max_entry), iv.jsr, iv.sub,
                                 std::abs(iv.jsr.midpoint() - base.jsr.midpoint()),
                                 std::abs(iv.sub.midpoint() - base.sub.midpoint())};
            level.max_hausdorff = std::max(level.max_hausdorff, tr.hausdorff);
            level.worst_jsr_deviation = std::max(level.worst_jsr_deviation, tr.jsr_deviation);
            level.worst_sub_deviation = std::max(level.worst_sub_deviation, tr.sub_deviation);
            level.trials.push_back(std::move(tr));
        }
        rep.levels.push_back(std::move(level));
    }
    return rep;
}

struct DirectionalPoint {
    double scale = 0.0;
    double hausdorff = 0.0;  // max-entry norm
    BoundInterval jsr;
    BoundInterval sub;
};

/**
 * Intervals along the deterministic path sigma + s * direction, one point per
 * scale s. Used to replay known discontinuities of the subradius.
 */
inline std::vector<DirectionalPoint> directional_study(const MatrixSet& sigma, const MatrixSet& direction,
                                                       const std::vector<double>& scales, std::size_t t_max,
                                                       const std::optional<PolyhedralCone>& cone = std::nullopt,
                                                       double tol = default_interval_tol) {
    if (direction.size() != sigma.size() || direction.dim() != sigma.dim()) {
        throw DomainError("direction must match the matrix set member for member");
    }
    PerturbationOptions opt;
    opt.t_max = t_max;
    opt.cone = cone;
    opt.tol = tol;
    std::vector<DirectionalPoint> out;
    for (double s : scales) {
        std::vector<Matrix> members;
        for (std::size_t i = 0; i < sigma.size(); ++i) members.push_back(sigma[i] + s * direction[i]);
        const MatrixSet moved(std::move(members));
        const auto iv = detail::both_intervals(moved, opt, nullptr);
        out.push_back({s, hausdorff_distance(sigma, moved, NormKind::max_entry), iv.jsr, iv.sub});
    }
    return out;
}

} // namespace jsc
