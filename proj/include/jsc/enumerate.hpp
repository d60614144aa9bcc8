#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "jsc/errors.hpp"
#include "jsc/linalg.hpp"

namespace jsc {

inline constexpr std::uint64_t default_product_budget = 2'000'000;
inline constexpr double default_interval_tol = 1e-9;

struct EnumerationOptions {
    std::size_t t_max = 1;
    NormKind norm = NormKind::two;
    // Merge products whose entries agree on a dedup_tol grid. 0 disables.
    double dedup_tol = 0.0;
    std::uint64_t budget = default_product_budget;
    bool compute_norms = true;
    unsigned workers = 1;
};

// Raw (un-rooted) extreme value over one level and the first word, in
// lexicographic order, attaining it.
struct Extremum {
    double value = std::numeric_limits<double>::quiet_NaN();
    Word word;

    bool defined() const { return !std::isnan(value); }
};

struct LevelStats {
    std::size_t t = 0;
    std::uint64_t count = 0;
    Extremum max_norm, min_norm;
    Extremum max_rho, min_rho;
    Extremum max_trace;         // over all products
    Extremum max_nonneg_trace;  // over products with trace >= 0
};

/// Number of products of lengths 1..t_max, saturating at UINT64_MAX.
inline std::uint64_t product_count(std::size_t m, std::size_t t_max) {
    std::uint64_t total = 0;
    std::uint64_t level = 1;
    for (std::size_t t = 1; t <= t_max; ++t) {
        if (level > std::numeric_limits<std::uint64_t>::max() / m) return std::numeric_limits<std::uint64_t>::max();
        level *= m;
        if (total > std::numeric_limits<std::uint64_t>::max() - level) return std::numeric_limits<std::uint64_t>::max();
        total += level;
    }
    return total;
}

inline void check_budget(std::size_t m, std::size_t t_max, std::uint64_t budget) {
    const auto needed = product_count(m, t_max);
    if (needed <= budget) return;
    std::size_t admissible = 0;
    while (product_count(m, admissible + 1) <= budget) ++admissible;
    throw ResourceError("enumerating products up to length " + std::to_string(t_max) + " needs " +
                        std::to_string(needed) + " products, over the budget of " + std::to_string(budget) +
                        "; largest admissible t_max is " + std::to_string(admissible));
}

namespace detail {

// Reusable solver workspace; avoids per-product allocations.
class ProductEvaluator {
public:
    explicit ProductEvaluator(Eigen::Index n) : eig_(n), sym_(n), gram_(n, n) {}

    double rho(const Eigen::MatrixXd& p) {
        const auto n = p.rows();
        if (n <= 2) return spectral_radius(p, default_spectral_tol(static_cast<std::size_t>(n)));
        if ((p.array() == 0.0).all()) return 0.0;
        eig_.compute(p, false);
        if (eig_.info() == Eigen::Success) return eig_.eigenvalues().cwiseAbs().maxCoeff();
        return gelfand_radius(p, default_spectral_tol(static_cast<std::size_t>(n)));
    }

    double norm(const Eigen::MatrixXd& p, NormKind kind) {
        if (kind != NormKind::two || p.rows() <= 2) return matrix_norm(p, kind);
        if ((p.array() == 0.0).all()) return 0.0;
        gram_.noalias() = p.transpose() * p;
        sym_.compute(gram_, Eigen::EigenvaluesOnly);
        return std::sqrt(std::max(0.0, sym_.eigenvalues().maxCoeff()));
    }

private:
    Eigen::EigenSolver<Eigen::MatrixXd> eig_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym_;
    Eigen::MatrixXd gram_;
};

inline void take_max(Extremum& e, double v, const Word& w) {
    if (!e.defined() || v > e.value) {
        e.value = v;
        e.word = w;
    }
}
inline void take_min(Extremum& e, double v, const Word& w) {
    if (!e.defined() || v < e.value) {
        e.value = v;
        e.word = w;
    }
}

inline void record(LevelStats& s, ProductEvaluator& ev, const Eigen::MatrixXd& p, const Word& w,
                   const EnumerationOptions& opt) {
    ++s.count;
    const double r = ev.rho(p);
    take_max(s.max_rho, r, w);
    take_min(s.min_rho, r, w);
    const double tr = p.trace();
    take_max(s.max_trace, tr, w);
    if (tr >= 0.0) take_max(s.max_nonneg_trace, tr, w);
    if (opt.compute_norms) {
        const double nr = ev.norm(p, opt.norm);
        take_max(s.max_norm, nr, w);
        take_min(s.min_norm, nr, w);
    }
}

// Merge b into a; a holds the lexicographically earlier words.
inline void merge(LevelStats& a, const LevelStats& b) {
    a.count += b.count;
    auto mx = [](Extremum& x, const Extremum& y) {
        if (y.defined() && (!x.defined() || y.value > x.value)) x = y;
    };
    auto mn = [](Extremum& x, const Extremum& y) {
        if (y.defined() && (!x.defined() || y.value < x.value)) x = y;
    };
    mx(a.max_norm, b.max_norm);
    mn(a.min_norm, b.min_norm);
    mx(a.max_rho, b.max_rho);
    mn(a.min_rho, b.min_rho);
    mx(a.max_trace, b.max_trace);
    mx(a.max_nonneg_trace, b.max_nonneg_trace);
}

// Depth-first walk of all words starting with `first`, prefix products memoised.
inline std::vector<LevelStats> walk_branch(const MatrixSet& sigma, std::size_t first, const EnumerationOptions& opt) {
    const auto n = static_cast<Eigen::Index>(sigma.dim());
    const std::size_t m = sigma.size();
    std::vector<LevelStats> stats(opt.t_max);
    for (std::size_t t = 0; t < opt.t_max; ++t) stats[t].t = t + 1;
    ProductEvaluator ev(n);
    std::vector<Eigen::MatrixXd> prefix(opt.t_max, Eigen::MatrixXd(n, n));
    Word word{first};
    std::vector<std::size_t> next(opt.t_max, 0);
    prefix[0] = sigma[first].values();
    record(stats[0], ev, prefix[0], word, opt);
    std::size_t depth = 0;  // index of the last letter in word
    while (true) {
        if (depth + 1 < opt.t_max && next[depth] < m) {
            const std::size_t letter = next[depth]++;
            prefix[depth + 1].noalias() = prefix[depth] * sigma[letter].values();
            ++depth;
            word.push_back(letter);
            next[depth] = 0;
            record(stats[depth], ev, prefix[depth], word, opt);
        } else {
            if (depth == 0) break;
            word.pop_back();
            --depth;
        }
    }
    return stats;
}

// Level-by-level walk that merges near-identical products.
inline std::vector<LevelStats> walk_dedup(const MatrixSet& sigma, const EnumerationOptions& opt) {
    const auto n = static_cast<Eigen::Index>(sigma.dim());
    std::vector<LevelStats> stats(opt.t_max);
    ProductEvaluator ev(n);
    struct Node {
        Eigen::MatrixXd p;
        Word w;
    };
    std::vector<Node> level;
    for (std::size_t i = 0; i < sigma.size(); ++i) level.push_back({sigma[i].values(), {i}});
    for (std::size_t t = 1; t <= opt.t_max; ++t) {
        std::map<std::vector<long long>, bool> seen;
        std::vector<Node> kept;
        for (auto& node : level) {
            std::vector<long long> key(static_cast<std::size_t>(n * n));
            for (Eigen::Index k = 0; k < n * n; ++k) {
                key[static_cast<std::size_t>(k)] = std::llround(node.p.data()[k] / opt.dedup_tol);
            }
            if (!seen.emplace(std::move(key), true).second) continue;
            kept.push_back(std::move(node));
        }
        stats[t - 1].t = t;
        for (const auto& node : kept) record(stats[t - 1], ev, node.p, node.w, opt);
        if (t == opt.t_max) break;
        std::vector<Node> nxt;
        nxt.reserve(kept.size() * sigma.size());
        for (const auto& node : kept) {
            for (std::size_t i = 0; i < sigma.size(); ++i) {
                Word w = node.w;
                w.push_back(i);
                nxt.push_back({node.p * sigma[i].values(), std::move(w)});
            }
        }
        level = std::move(nxt);
    }
    return stats;
}

} // namespace detail

/**
 * Per-length extreme values over all products of length 1..t_max.
 *
 * Enumeration is exhaustive unless dedup is enabled. Branches by first letter
 * may run on separate threads; max/min reductions make the result independent
 * of scheduling. Throws ResourceError when the product count exceeds budget.
 */
inline std::vector<LevelStats> enumerate_levels(const MatrixSet& sigma, const EnumerationOptions& opt) {
    if (opt.t_max < 1) throw DomainError("t_max must be at least 1");
    if (opt.dedup_tol < 0.0) throw DomainError("dedup_tol must be nonnegative");
    check_budget(sigma.size(), opt.t_max, opt.budget);
    if (opt.dedup_tol > 0.0) return detail::walk_dedup(sigma, opt);

    const std::size_t m = sigma.size();
    std::vector<std::vector<LevelStats>> branches(m);
    const unsigned workers = std::max(1U, std::min<unsigned>(opt.workers, static_cast<unsigned>(m)));
    if (workers == 1) {
        for (std::size_t i = 0; i < m; ++i) branches[i] = detail::walk_branch(sigma, i, opt);
    } else {
        std::vector<std::exception_ptr> errors(m);
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < m; i += workers) {
                    try {
                        branches[i] = detail::walk_branch(sigma, i, opt);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        pool.clear();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    std::vector<LevelStats> out = std::move(branches[0]);
    for (std::size_t i = 1; i < m; ++i) {
        for (std::size_t t = 0; t < opt.t_max; ++t) detail::merge(out[t], branches[i][t]);
    }
    return out;
}

struct BoundValue {
    std::optional<double> value;  // empty when undefined at this length
    Word word;                    // product attaining it

    friend bool operator==(const BoundValue&, const BoundValue&) = default;
};

struct BoundInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool collapsed = false;  // lower exceeded upper by less than tol; both set to the midpoint
    std::string lower_source;
    std::string upper_source;

    double midpoint() const { return 0.5 * (lower + upper); }
    friend bool operator==(const BoundInterval&, const BoundInterval&) = default;
};

/// Interval from a lower and an upper bound. Crossing within tol (relative)
/// collapses to the midpoint; a larger crossing is a numerical error.
inline BoundInterval make_interval(double lower, std::string lower_source, double upper, std::string upper_source,
                                   double tol = default_interval_tol) {
    BoundInterval iv{lower, upper, false, std::move(lower_source), std::move(upper_source)};
    if (lower > upper) {
        if (lower - upper > tol * std::max(1.0, std::abs(upper))) {
            throw NumericalError("inconsistent bounds: lower " + std::to_string(lower) + " (" + iv.lower_source +
                                 ") exceeds upper " + std::to_string(upper) + " (" + iv.upper_source + ")");
        }
        const double mid = 0.5 * (lower + upper);
        iv.lower = mid;
        iv.upper = mid;
        iv.collapsed = true;
    }
    return iv;
}

struct BoundReport {
    std::vector<std::size_t> t_values;
    std::vector<BoundValue> upper_jsr;        // max ||P||^(1/t)
    std::vector<BoundValue> lower_jsr_rho;    // max rho(P)^(1/t)
    std::vector<BoundValue> lower_jsr_trace;  // (max trace(P) / n)^(1/t)
    std::vector<BoundValue> upper_sub_rho;    // min rho(P)^(1/t)
    std::vector<BoundValue> upper_sub_norm;   // min ||P||^(1/t)
    BoundInterval best_interval_jsr;
    BoundInterval best_interval_sub;
    NormKind norm = NormKind::two;
    std::uint64_t products = 0;

    friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

// Provenance labels, one per bound sequence.
namespace rule {
inline constexpr const char* upper_jsr = "max-norm";
inline constexpr const char* lower_jsr_rho = "max-spectral-radius";
inline constexpr const char* lower_jsr_trace = "max-trace-over-n";
inline constexpr const char* upper_sub_rho = "min-spectral-radius";
inline constexpr const char* upper_sub_norm = "min-norm";
inline constexpr const char* conic = "conic-lp";
inline constexpr const char* trivial = "trivial-zero";
} // namespace rule

inline std::string source_label(const char* rule_name, std::size_t t) {
    return std::string(rule_name) + "@t=" + std::to_string(t);
}

namespace detail {

inline BoundValue rooted(const Extremum& e, std::size_t t) {
    if (!e.defined()) return {std::nullopt, {}};
    return {std::pow(e.value, 1.0 / static_cast<double>(t)), e.word};
}

} // namespace detail

/// Assemble a BoundReport from enumerated level statistics.
inline BoundReport bounds_from_levels(const std::vector<LevelStats>& levels, std::size_t n, NormKind norm,
                                      double tol = default_interval_tol) {
    BoundReport rep;
    rep.norm = norm;
    double lo = 0.0;
    std::string lo_src = rule::trivial;
    double hi = std::numeric_limits<double>::infinity();
    std::string hi_src = "none";
    double sub_hi = std::numeric_limits<double>::infinity();
    std::string sub_hi_src = "none";
    for (const auto& lv : levels) {
        const std::size_t t = lv.t;
        rep.t_values.push_back(t);
        rep.products += lv.count;
        rep.upper_jsr.push_back(detail::rooted(lv.max_norm, t));
        rep.lower_jsr_rho.push_back(detail::rooted(lv.max_rho, t));
        if (lv.max_trace.defined() && lv.max_trace.value >= 0.0) {
            rep.lower_jsr_trace.push_back(
                {std::pow(lv.max_trace.value / static_cast<double>(n), 1.0 / static_cast<double>(t)), lv.max_trace.word});
        } else {
            rep.lower_jsr_trace.push_back({std::nullopt, {}});
        }
        rep.upper_sub_rho.push_back(detail::rooted(lv.min_rho, t));
        rep.upper_sub_norm.push_back(detail::rooted(lv.min_norm, t));

        auto raise = [&](const BoundValue& b, const char* name) {
            if (b.value && *b.value > lo) {
                lo = *b.value;
                lo_src = source_label(name, t);
            }
        };
        auto lower_upper = [&](const BoundValue& b, const char* name, double& bound, std::string& src) {
            if (b.value && *b.value < bound) {
                bound = *b.value;
                src = source_label(name, t);
            }
        };
        raise(rep.lower_jsr_rho.back(), rule::lower_jsr_rho);
        raise(rep.lower_jsr_trace.back(), rule::lower_jsr_trace);
        lower_upper(rep.upper_jsr.back(), rule::upper_jsr, hi, hi_src);
        lower_upper(rep.upper_sub_rho.back(), rule::upper_sub_rho, sub_hi, sub_hi_src);
        lower_upper(rep.upper_sub_norm.back(), rule::upper_sub_norm, sub_hi, sub_hi_src);
    }
    rep.best_interval_jsr = make_interval(lo, lo_src, hi, hi_src, tol);
    rep.best_interval_sub = make_interval(0.0, rule::trivial, sub_hi, sub_hi_src, tol);
    return rep;
}

/**
 * Bound sequences for the joint spectral radius and subradius from all
 * products of length 1..t_max.
 */
inline BoundReport enumerate_bounds(const MatrixSet& sigma, std::size_t t_max, NormKind norm = NormKind::two,
                                    double dedup_tol = 0.0, std::uint64_t budget = default_product_budget,
                                    double tol = default_interval_tol) {
    EnumerationOptions opt;
    opt.t_max = t_max;
    opt.norm = norm;
    opt.dedup_tol = dedup_tol;
    opt.budget = budget;
    if (norm == NormKind::max_entry) throw DomainError("bounds need an induced norm (two, one or inf)");
    return bounds_from_levels(enumerate_levels(sigma, opt), sigma.dim(), norm, tol);
}

} // namespace jsc
