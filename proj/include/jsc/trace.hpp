#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "jsc/cones.hpp"
#include "jsc/enumerate.hpp"
#include "jsc/kron_lift.hpp"
#include "jsc/linalg.hpp"

namespace jsc {

struct TraceDiagnostic {
    std::optional<std::size_t> primitive_member;  // first member primitive on the orthant
    std::size_t window_first = 0;
    std::size_t window_last = 0;
    std::optional<double> s_width;  // max - min of the defined s values in the window
    double r_width = 0.0;
    bool persistent_oscillation = false;

    bool has_primitive_member() const { return primitive_member.has_value(); }
    friend bool operator==(const TraceDiagnostic&, const TraceDiagnostic&) = default;
};

struct TraceSequence {
    std::vector<std::size_t> t_values;
    std::vector<std::optional<double>> s;  // max over products with trace >= 0 of trace^(1/t)
    std::vector<double> r;                 // max rho^(1/t)
    TraceDiagnostic diagnostic;

    friend bool operator==(const TraceSequence&, const TraceSequence&) = default;
};

// Relative oscillation width above which the window counts as oscillating.
inline constexpr double oscillation_threshold = 0.05;

struct TraceWindow {
    std::size_t first = 0;  // 0: derive from t_max (last six lengths)
    std::size_t last = 0;
};

/// First member that is nonnegative and primitive on the orthant.
inline std::optional<std::size_t> find_primitive_member(const MatrixSet& sigma) {
    const auto orthant = PolyhedralCone::orthant(sigma.dim());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (!sigma[i].is_nonnegative()) continue;
        if (is_primitive(sigma[i], orthant).primitive) return i;
    }
    return std::nullopt;
}

inline TraceSequence trace_sequence_from_levels(const std::vector<LevelStats>& levels, const MatrixSet& sigma,
                                                TraceWindow window = {}) {
    TraceSequence seq;
    for (const auto& lv : levels) {
        const double inv_t = 1.0 / static_cast<double>(lv.t);
        seq.t_values.push_back(lv.t);
        if (lv.max_nonneg_trace.defined()) seq.s.push_back(std::pow(lv.max_nonneg_trace.value, inv_t));
        else seq.s.push_back(std::nullopt);
        seq.r.push_back(std::pow(lv.max_rho.value, inv_t));
    }
    const std::size_t t_max = levels.size();
    auto& d = seq.diagnostic;
    d.window_last = window.last == 0 ? t_max : std::min(window.last, t_max);
    d.window_first = window.first == 0 ? (d.window_last > 5 ? d.window_last - 5 : 1) : window.first;
    if (d.window_first < 1 || d.window_first > d.window_last) throw DomainError("trace window is empty");

    double s_lo = 0.0, s_hi = 0.0, r_lo = 0.0, r_hi = 0.0;
    bool any_s = false;
    for (std::size_t t = d.window_first; t <= d.window_last; ++t) {
        const double rv = seq.r[t - 1];
        r_lo = t == d.window_first ? rv : std::min(r_lo, rv);
        r_hi = t == d.window_first ? rv : std::max(r_hi, rv);
        if (const auto sv = seq.s[t - 1]) {
            s_lo = any_s ? std::min(s_lo, *sv) : *sv;
            s_hi = any_s ? std::max(s_hi, *sv) : *sv;
            any_s = true;
        }
    }
    d.r_width = r_hi - r_lo;
    if (any_s) d.s_width = s_hi - s_lo;
    const double scale = std::max({r_hi, any_s ? s_hi : 0.0});
    const double width = std::max(d.r_width, d.s_width.value_or(0.0));
    d.persistent_oscillation = scale > 0.0 && width > oscillation_threshold * scale;
    d.primitive_member = find_primitive_member(sigma);
    return seq;
}

/**
 * Maximal trace and spectral-radius sequences over products of length t.
 *
 * Products with negative trace are skipped in s; s[t] is undefined when every
 * product of length t has negative trace.
 */
inline TraceSequence trace_sequence(const MatrixSet& sigma, std::size_t t_max,
                                    std::uint64_t budget = default_product_budget, TraceWindow window = {}) {
    EnumerationOptions opt;
    opt.t_max = t_max;
    opt.budget = budget;
    opt.compute_norms = false;
    return trace_sequence_from_levels(enumerate_levels(sigma, opt), sigma, window);
}

struct TraceKronCheck {
    std::size_t k = 0;
    std::size_t t = 0;
    std::optional<double> lhs;  // trace((sum A^{(x)k} / m)^t)^(1/(tk))
    std::optional<double> rhs;  // max over products of length t of trace^(1/t)
    bool defined = false;       // both sides have nonnegative bases
    bool holds = true;          // lhs <= rhs + tol; vacuous when undefined

    friend bool operator==(const TraceKronCheck&, const TraceKronCheck&) = default;
};

/**
 * Compare trace((sum_A A^{(x)k}/m)^t)^(1/(tk)) with max_{P in Sigma^t} trace(P)^(1/t).
 *
 * The inequality is guaranteed when every product has nonnegative trace. A
 * negative base on either side marks the check undefined rather than failed.
 */
inline TraceKronCheck trace_kron_inequality(const MatrixSet& sigma, std::size_t k, std::size_t t,
                                            double tol = 1e-10, std::size_t cap = default_kron_cap,
                                            std::uint64_t budget = default_product_budget) {
    if (k < 1 || t < 1) throw DomainError("trace_kron_inequality: k and t must be at least 1");
    TraceKronCheck out;
    out.k = k;
    out.t = t;
    const auto lifted = kron_power_sum(sigma, k, cap);
    const auto avg = (1.0 / static_cast<double>(sigma.size())) * lifted;
    const double lhs_base = trace(mat_power(avg, t));

    EnumerationOptions opt;
    opt.t_max = t;
    opt.budget = budget;
    opt.compute_norms = false;
    const auto levels = enumerate_levels(sigma, opt);
    const double rhs_base = levels.back().max_trace.value;

    if (lhs_base >= 0.0) out.lhs = std::pow(lhs_base, 1.0 / static_cast<double>(t * k));
    if (rhs_base >= 0.0) out.rhs = std::pow(rhs_base, 1.0 / static_cast<double>(t));
    out.defined = out.lhs.has_value() && out.rhs.has_value();
    if (out.defined) out.holds = *out.lhs <= *out.rhs + tol * std::max(1.0, *out.rhs);
    return out;
}

} // namespace jsc
