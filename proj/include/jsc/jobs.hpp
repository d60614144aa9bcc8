#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jsc/cones.hpp"
#include "jsc/enumerate.hpp"
#include "jsc/errors.hpp"
#include "jsc/input.hpp"
#include "jsc/kron_lift.hpp"
#include "jsc/linalg.hpp"
#include "jsc/perturbation.hpp"
#include "jsc/subradius.hpp"
#include "jsc/trace.hpp"

namespace jsc {

inline constexpr const char* tool_version = "1.0.0";
inline constexpr const char* report_schema = "jsc-report/1";

enum class Command { bounds, subradius, kron, trace_seq, cone_check, perturb, verify };
enum class OutputFormat { human, machine };

inline std::string to_string(Command c) {
    switch (c) {
    case Command::bounds: return "bounds";
    case Command::subradius: return "subradius";
    case Command::kron: return "kron";
    case Command::trace_seq: return "trace-seq";
    case Command::cone_check: return "cone-check";
    case Command::perturb: return "perturb";
    case Command::verify: return "verify";
    }
    return "?";
}

inline Command parse_command(const std::string& s) {
    for (auto c : {Command::bounds, Command::subradius, Command::kron, Command::trace_seq, Command::cone_check,
                   Command::perturb, Command::verify}) {
        if (to_string(c) == s) return c;
    }
    throw ValidationError("unknown command '" + s + "'");
}

inline std::string to_string(OutputFormat f) { return f == OutputFormat::human ? "human" : "machine"; }

inline OutputFormat parse_output_format(const std::string& s) {
    if (s == "human") return OutputFormat::human;
    if (s == "machine") return OutputFormat::machine;
    throw ValidationError("unknown format '" + s + "' (expected human or machine)");
}

struct JobSpec {
    Command command = Command::bounds;
    std::string input;
    std::size_t t_max = 8;
    std::size_t k_max = 3;
    double tol = default_interval_tol;
    NormKind norm = NormKind::two;
    std::vector<double> deltas{0.1, 0.01, 0.001};
    std::size_t trials = 20;
    std::uint64_t seed = 0;
    std::uint64_t budget = default_product_budget;
    std::size_t dim_cap = default_kron_cap;  // largest admissible n and n^k for Kronecker lifts
    std::optional<std::string> cone;        // "orthant" overrides the cone in the input file
    bool preserve_positivity = false;
    std::size_t beta_samples = 2000;
    OutputFormat format = OutputFormat::human;
    std::optional<std::string> out;

    friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

struct InputSummary {
    std::size_t dim = 0;
    std::size_t matrices = 0;
    std::string cone = "none";  // none | orthant | generators
    std::size_t cone_generators = 0;
    std::string cone_origin = "none";  // none | file | option | default

    friend bool operator==(const InputSummary&, const InputSummary&) = default;
};

struct MemberConeCheck {
    std::size_t index = 0;
    bool invariant = false;
    std::optional<bool> positive;   // defined for invariant members of a proper cone
    std::optional<bool> primitive;
    std::optional<std::size_t> primitivity_exponent;

    friend bool operator==(const MemberConeCheck&, const MemberConeCheck&) = default;
};

struct ConstructedPair {
    double column_ratio_c = 1.0;
    double beta_bound = 1.0;
    std::optional<double> beta_estimate;
    std::size_t inner_generators = 0;
    bool inner_invariant = false;

    friend bool operator==(const ConstructedPair&, const ConstructedPair&) = default;
};

struct ConeCheckReport {
    bool full_dimensional = false;
    bool pointed = false;
    bool proper = false;
    std::size_t primitivity_horizon = 0;
    bool invariant = false;  // every member
    std::vector<MemberConeCheck> members;
    std::optional<bool> inner_embedded;
    std::optional<bool> inner_invariant;
    std::optional<ConstructedPair> constructed;

    friend bool operator==(const ConeCheckReport&, const ConeCheckReport&) = default;
};

enum class CheckStatus { pass, fail, skipped };

inline std::string to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
    }
    return "?";
}

inline CheckStatus parse_check_status(const std::string& s) {
    if (s == "pass") return CheckStatus::pass;
    if (s == "fail") return CheckStatus::fail;
    if (s == "skipped") return CheckStatus::skipped;
    throw ValidationError("unknown check status '" + s + "'");
}

struct VerifyCheck {
    std::string name;
    CheckStatus status = CheckStatus::skipped;
    std::string detail;

    friend bool operator==(const VerifyCheck&, const VerifyCheck&) = default;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;

    bool all_hold() const {
        return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::fail; });
    }
    friend bool operator==(const VerifyReport&, const VerifyReport&) = default;
};

/// Everything one run produces. Sections not touched by the command stay empty.
struct Document {
    std::string schema = report_schema;
    std::string version = tool_version;
    JobSpec job;
    InputSummary input;
    std::optional<BoundReport> bounds;
    std::optional<SubradiusReport> subradius;
    std::optional<KronReport> kron;
    std::optional<TraceSequence> trace;
    std::optional<ConeCheckReport> cone_check;
    std::optional<PerturbationReport> perturbation;
    std::optional<VerifyReport> verify;
    std::vector<std::string> warnings;

    friend bool operator==(const Document&, const Document&) = default;
};

namespace detail {

inline void add_warnings(std::vector<std::string>& into, const std::vector<std::string>& from) {
    for (const auto& w : from) {
        if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
    }
}

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline VerifyCheck check(std::string name, bool ok, std::string detail) {
    return {std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail)};
}

inline VerifyReport run_verify(const MatrixSet& sigma, const std::optional<PolyhedralCone>& cone, const JobSpec& job,
                               std::vector<std::string>& warnings) {
    VerifyReport rep;
    const double tol = job.tol;
    const auto bounds = enumerate_bounds(sigma, job.t_max, job.norm, 0.0, job.budget, tol);
    const auto& jsr = bounds.best_interval_jsr;
    const auto& sub = bounds.best_interval_sub;
    rep.checks.push_back(check("jsr-interval-ordered", jsr.lower <= jsr.upper,
                               "[" + fmt_double(jsr.lower) + ", " + fmt_double(jsr.upper) + "]"));
    rep.checks.push_back(check("subradius-below-radius", sub.upper <= jsr.upper * (1.0 + tol) + tol,
                               "sub upper " + fmt_double(sub.upper) + " vs jsr upper " + fmt_double(jsr.upper)));

    // Homogeneity: bounds of 2*sigma are twice those of sigma.
    {
        const auto doubled = enumerate_bounds(sigma.scaled(2.0), job.t_max, job.norm, 0.0, job.budget, tol);
        const auto close = [&](double a, double b) { return std::abs(a - 2.0 * b) <= 1e-9 * std::max(1.0, std::abs(a)); };
        const bool ok = close(doubled.best_interval_jsr.lower, jsr.lower) &&
                        close(doubled.best_interval_jsr.upper, jsr.upper) &&
                        close(doubled.best_interval_sub.upper, sub.upper);
        rep.checks.push_back(check("scale-equivariance", ok, "bounds of 2*sigma against 2*bounds"));
    }

    const bool cone_ok = cone && cone->dim() == sigma.dim() && is_invariant(sigma, *cone);
    if (cone && !cone_ok) warnings.push_back("cone is not invariant under every member; cone-based checks skipped");

    if (cone_ok) {
        const auto kron = kron_lift_bounds(sigma, job.k_max, cone, job.dim_cap);
        bool ok = true;
        for (std::size_t i = 0; i < kron.k_values.size(); ++i) {
            ok = ok && kron.lower_k[i] <= jsr.upper + 1e-8 && kron.upper_k[i] >= jsr.lower - 1e-8;
        }
        rep.checks.push_back(check("kron-sandwich", ok, "k = 1.." + std::to_string(job.k_max)));

        const auto conic = conic_subradius_lower(sigma, *cone, std::min(tol, 1e-10));
        rep.checks.push_back(check("conic-lower-below-subradius-upper", conic.r <= sub.upper * (1.0 + tol) + tol,
                                   "conic " + fmt_double(conic.r) + " vs upper " + fmt_double(sub.upper)));
    } else {
        rep.checks.push_back({"kron-sandwich", CheckStatus::skipped, "needs a common invariant cone"});
        rep.checks.push_back({"conic-lower-below-subradius-upper", CheckStatus::skipped,
                              "needs a common invariant cone"});
    }

    {
        const std::size_t t = std::min<std::size_t>(job.t_max, 4);
        bool any = false;
        bool ok = true;
        for (std::size_t k = 1; k <= job.k_max; ++k) {
            if (detail::capped_power(sigma.dim(), k, job.dim_cap) == 0) break;
            const auto c = trace_kron_inequality(sigma, k, t, 1e-10, job.dim_cap, job.budget);
            if (!c.defined) continue;
            any = true;
            ok = ok && c.holds;
        }
        if (any) rep.checks.push_back(check("trace-kron-inequality", ok, "t = " + std::to_string(t)));
        else rep.checks.push_back({"trace-kron-inequality", CheckStatus::skipped, "negative trace bases"});
    }

    const bool positive = std::all_of(sigma.begin(), sigma.end(), [](const Matrix& a) { return a.is_positive(); });
    if (positive && sigma.dim() <= 12) {
        const auto pair = construct_embedded_pair(sigma);
        const auto conic = conic_subradius_lower(sigma, pair.outer, std::min(tol, 1e-10));
        const double needed = sub.upper / *pair.beta_bound - 1e-6;
        rep.checks.push_back(check("embedded-pair-achievability", conic.r >= needed,
                                   "conic " + fmt_double(conic.r) + " vs upper/c^2 " + fmt_double(needed + 1e-6)));
    } else {
        rep.checks.push_back({"embedded-pair-achievability", CheckStatus::skipped, "needs entrywise positive members"});
    }
    return rep;
}

inline ConeCheckReport run_cone_check(const MatrixSet& sigma, const PolyhedralCone& k,
                                      const std::optional<PolyhedralCone>& inner, const JobSpec& job) {
    if (k.dim() != sigma.dim()) throw DomainError("cone dimension does not match the matrices");
    ConeCheckReport rep;
    rep.full_dimensional = k.is_full_dimensional();
    rep.pointed = k.is_pointed();
    rep.proper = rep.full_dimensional && rep.pointed;
    rep.primitivity_horizon = default_primitivity_horizon(k);
    rep.invariant = true;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        MemberConeCheck mc;
        mc.index = i;
        mc.invariant = is_invariant(sigma[i], k);
        rep.invariant = rep.invariant && mc.invariant;
        if (mc.invariant && rep.proper) {
            mc.positive = is_positive_map(sigma[i], k);
            const auto p = is_primitive(sigma[i], k);
            mc.primitive = p.primitive;
            if (p.primitive) mc.primitivity_exponent = p.exponent;
        }
        rep.members.push_back(mc);
    }
    if (inner) {
        if (inner->dim() != sigma.dim()) throw DomainError("inner cone dimension does not match the matrices");
        rep.inner_embedded = is_embedded_pair(k, *inner);
        rep.inner_invariant = is_invariant(sigma, *inner);
    }
    const bool positive = std::all_of(sigma.begin(), sigma.end(), [](const Matrix& a) { return a.is_positive(); });
    if (positive && sigma.dim() <= 12) {
        const auto pair = construct_embedded_pair(sigma);
        ConstructedPair cp;
        cp.column_ratio_c = *pair.column_ratio_c;
        cp.beta_bound = *pair.beta_bound;
        cp.inner_generators = pair.inner.generators().size();
        cp.inner_invariant = pair.inner_invariant;
        if (job.beta_samples > 0 && is_embedded_pair(pair.outer, pair.inner)) {
            try {
                cp.beta_estimate = estimate_beta(pair, job.beta_samples, job.seed);
            } catch (const SamplingError&) {
                cp.beta_estimate = std::nullopt;
            }
        }
        rep.constructed = cp;
    }
    return rep;
}

} // namespace detail

/// Resolve the cone for a job: the command-line override wins over the file.
inline std::optional<PolyhedralCone> resolve_cone(const InputData& in, const JobSpec& job, InputSummary& summary) {
    std::optional<PolyhedralCone> cone;
    if (job.cone) {
        if (*job.cone != "orthant") throw ValidationError("unknown cone '" + *job.cone + "' (expected orthant)");
        cone = PolyhedralCone::orthant(in.sigma.dim());
        summary.cone_origin = "option";
    } else if (in.cone) {
        cone = in.cone;
        summary.cone_origin = "file";
    }
    if (cone) {
        summary.cone = cone->is_orthant() ? "orthant" : "generators";
        summary.cone_generators = cone->generators().size();
    }
    return cone;
}

/// Run the engine operation selected by job.command on already-parsed input.
inline Document execute(const JobSpec& job, const InputData& in) {
    Document doc;
    doc.job = job;
    const auto& sigma = in.sigma;
    doc.input.dim = sigma.dim();
    doc.input.matrices = sigma.size();
    if (sigma.dim() > job.dim_cap) {
        throw SizeError("dimension " + std::to_string(sigma.dim()) + " exceeds cap " + std::to_string(job.dim_cap));
    }
    if (!(job.tol > 0.0) || !std::isfinite(job.tol)) throw ValidationError("tol must be positive and finite");
    auto cone = resolve_cone(in, job, doc.input);

    switch (job.command) {
    case Command::bounds:
        doc.bounds = enumerate_bounds(sigma, job.t_max, job.norm, 0.0, job.budget, job.tol);
        break;
    case Command::subradius: {
        doc.bounds = enumerate_bounds(sigma, job.t_max, job.norm, 0.0, job.budget, job.tol);
        doc.subradius = subradius_from_bounds(sigma, *doc.bounds, cone, job.tol);
        detail::add_warnings(doc.warnings, doc.subradius->warnings);
        break;
    }
    case Command::kron:
        doc.kron = kron_lift_bounds(sigma, job.k_max, cone, job.dim_cap);
        detail::add_warnings(doc.warnings, doc.kron->warnings);
        break;
    case Command::trace_seq:
        doc.trace = trace_sequence(sigma, job.t_max, job.budget);
        break;
    case Command::cone_check: {
        if (!cone) {
            cone = PolyhedralCone::orthant(sigma.dim());
            doc.input.cone = "orthant";
            doc.input.cone_generators = sigma.dim();
            doc.input.cone_origin = "default";
            doc.warnings.push_back("no cone given; checked against the nonnegative orthant");
        }
        doc.cone_check = detail::run_cone_check(sigma, *cone, in.inner_cone, job);
        break;
    }
    case Command::perturb: {
        if (job.deltas.empty()) {
            doc.warnings.push_back("no perturbation radii given; nothing to do");
            break;
        }
        PerturbationOptions opt;
        opt.deltas = job.deltas;
        opt.trials = job.trials;
        opt.seed = job.seed;
        opt.t_max = job.t_max;
        opt.cone = cone;
        opt.preserve_positivity = job.preserve_positivity;
        opt.norm = job.norm;
        opt.tol = job.tol;
        opt.budget = job.budget;
        doc.perturbation = perturbation_study(sigma, opt);
        detail::add_warnings(doc.warnings, doc.perturbation->warnings);
        break;
    }
    case Command::verify:
        doc.verify = detail::run_verify(sigma, cone, job, doc.warnings);
        break;
    }
    return doc;
}

} // namespace jsc
