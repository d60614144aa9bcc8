#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jsc/errors.hpp"
#include "jsc/jobs.hpp"

namespace jsc {

// Machine format: JSON with key order fixed by construction. Doubles are
// written with 17 significant digits so that parsing restores them exactly.
// Non-finite doubles are the strings "inf", "-inf" and "nan"; undefined
// values are null.
using Json = nlohmann::ordered_json;

namespace io {

inline Json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline Json num(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

inline double get_num(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw ValidationError("expected a number, got \"" + s + "\"");
    }
    if (!j.is_number()) throw ValidationError("expected a number");
    return j.get<double>();
}

inline std::optional<double> get_opt_num(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return get_num(j);
}

template <class T>
Json opt(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

template <class T>
std::optional<T> get_opt(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

inline Json nums(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

inline std::vector<double> get_nums(const Json& j) {
    std::vector<double> out;
    for (const auto& x : j) out.push_back(get_num(x));
    return out;
}

// ---- engine reports ----

inline Json to_json(const BoundValue& v) { return Json{{"value", num(v.value)}, {"word", v.word}}; }

inline BoundValue bound_value_from(const Json& j) {
    return {get_opt_num(j.at("value")), j.at("word").get<Word>()};
}

inline Json to_json(const BoundInterval& iv) {
    return Json{{"lower", num(iv.lower)},
                {"upper", num(iv.upper)},
                {"collapsed", iv.collapsed},
                {"lower_source", iv.lower_source},
                {"upper_source", iv.upper_source}};
}

inline BoundInterval interval_from(const Json& j) {
    return {get_num(j.at("lower")), get_num(j.at("upper")), j.at("collapsed").get<bool>(),
            j.at("lower_source").get<std::string>(), j.at("upper_source").get<std::string>()};
}

inline Json sequence(const char* rule_name, const std::vector<BoundValue>& values) {
    Json entries = Json::array();
    for (const auto& v : values) entries.push_back(to_json(v));
    return Json{{"rule", rule_name}, {"entries", entries}};
}

inline std::vector<BoundValue> sequence_from(const Json& j) {
    std::vector<BoundValue> out;
    for (const auto& e : j.at("entries")) out.push_back(bound_value_from(e));
    return out;
}

inline Json to_json(const BoundReport& r) {
    return Json{{"norm", to_string(r.norm)},
                {"products", r.products},
                {"t_values", r.t_values},
                {"upper_jsr", sequence(rule::upper_jsr, r.upper_jsr)},
                {"lower_jsr_rho", sequence(rule::lower_jsr_rho, r.lower_jsr_rho)},
                {"lower_jsr_trace", sequence(rule::lower_jsr_trace, r.lower_jsr_trace)},
                {"upper_sub_rho", sequence(rule::upper_sub_rho, r.upper_sub_rho)},
                {"upper_sub_norm", sequence(rule::upper_sub_norm, r.upper_sub_norm)},
                {"best_interval_jsr", to_json(r.best_interval_jsr)},
                {"best_interval_sub", to_json(r.best_interval_sub)}};
}

inline BoundReport bound_report_from(const Json& j) {
    BoundReport r;
    r.norm = parse_norm_kind(j.at("norm").get<std::string>());
    r.products = j.at("products").get<std::uint64_t>();
    r.t_values = j.at("t_values").get<std::vector<std::size_t>>();
    r.upper_jsr = sequence_from(j.at("upper_jsr"));
    r.lower_jsr_rho = sequence_from(j.at("lower_jsr_rho"));
    r.lower_jsr_trace = sequence_from(j.at("lower_jsr_trace"));
    r.upper_sub_rho = sequence_from(j.at("upper_sub_rho"));
    r.upper_sub_norm = sequence_from(j.at("upper_sub_norm"));
    r.best_interval_jsr = interval_from(j.at("best_interval_jsr"));
    r.best_interval_sub = interval_from(j.at("best_interval_sub"));
    return r;
}

inline Json to_json(const SubradiusReport& r) {
    return Json{{"interval", to_json(r.interval)}, {"conic_lower", num(r.conic_lower)}, {"warnings", r.warnings}};
}

inline SubradiusReport subradius_report_from(const Json& j) {
    return {interval_from(j.at("interval")), get_opt_num(j.at("conic_lower")),
            j.at("warnings").get<std::vector<std::string>>()};
}

inline Json to_json(const KronReport& r) {
    return Json{{"k_values", r.k_values}, {"rho_sum", nums(r.rho_sum)}, {"upper_k", nums(r.upper_k)},
                {"lower_k", nums(r.lower_k)}, {"certified", r.certified}, {"warnings", r.warnings}};
}

inline KronReport kron_report_from(const Json& j) {
    KronReport r;
    r.k_values = j.at("k_values").get<std::vector<std::size_t>>();
    r.rho_sum = get_nums(j.at("rho_sum"));
    r.upper_k = get_nums(j.at("upper_k"));
    r.lower_k = get_nums(j.at("lower_k"));
    r.certified = j.at("certified").get<bool>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

inline Json to_json(const TraceSequence& s) {
    Json sv = Json::array();
    for (const auto& v : s.s) sv.push_back(num(v));
    const auto& d = s.diagnostic;
    return Json{{"t_values", s.t_values},
                {"s", sv},
                {"r", nums(s.r)},
                {"diagnostic",
                 Json{{"primitive_member", opt(d.primitive_member)},
                      {"window_first", d.window_first},
                      {"window_last", d.window_last},
                      {"s_width", num(d.s_width)},
                      {"r_width", num(d.r_width)},
                      {"persistent_oscillation", d.persistent_oscillation}}}};
}

inline TraceSequence trace_sequence_from(const Json& j) {
    TraceSequence s;
    s.t_values = j.at("t_values").get<std::vector<std::size_t>>();
    for (const auto& v : j.at("s")) s.s.push_back(get_opt_num(v));
    s.r = get_nums(j.at("r"));
    const auto& d = j.at("diagnostic");
    s.diagnostic.primitive_member = get_opt<std::size_t>(d.at("primitive_member"));
    s.diagnostic.window_first = d.at("window_first").get<std::size_t>();
    s.diagnostic.window_last = d.at("window_last").get<std::size_t>();
    s.diagnostic.s_width = get_opt_num(d.at("s_width"));
    s.diagnostic.r_width = get_num(d.at("r_width"));
    s.diagnostic.persistent_oscillation = d.at("persistent_oscillation").get<bool>();
    return s;
}

inline Json to_json(const ConeCheckReport& r) {
    Json members = Json::array();
    for (const auto& m : r.members) {
        members.push_back(Json{{"index", m.index},
                               {"invariant", m.invariant},
                               {"positive", opt(m.positive)},
                               {"primitive", opt(m.primitive)},
                               {"primitivity_exponent", opt(m.primitivity_exponent)}});
    }
    Json constructed = nullptr;
    if (r.constructed) {
        const auto& c = *r.constructed;
        constructed = Json{{"column_ratio_c", num(c.column_ratio_c)},
                           {"beta_bound", num(c.beta_bound)},
                           {"beta_estimate", num(c.beta_estimate)},
                           {"inner_generators", c.inner_generators},
                           {"inner_invariant", c.inner_invariant}};
    }
    return Json{{"full_dimensional", r.full_dimensional},
                {"pointed", r.pointed},
                {"proper", r.proper},
                {"primitivity_horizon", r.primitivity_horizon},
                {"invariant", r.invariant},
                {"members", members},
                {"inner_embedded", opt(r.inner_embedded)},
                {"inner_invariant", opt(r.inner_invariant)},
                {"constructed_pair", constructed}};
}

inline ConeCheckReport cone_check_from(const Json& j) {
    ConeCheckReport r;
    r.full_dimensional = j.at("full_dimensional").get<bool>();
    r.pointed = j.at("pointed").get<bool>();
    r.proper = j.at("proper").get<bool>();
    r.primitivity_horizon = j.at("primitivity_horizon").get<std::size_t>();
    r.invariant = j.at("invariant").get<bool>();
    for (const auto& m : j.at("members")) {
        r.members.push_back({m.at("index").get<std::size_t>(), m.at("invariant").get<bool>(),
                             get_opt<bool>(m.at("positive")), get_opt<bool>(m.at("primitive")),
                             get_opt<std::size_t>(m.at("primitivity_exponent"))});
    }
    r.inner_embedded = get_opt<bool>(j.at("inner_embedded"));
    r.inner_invariant = get_opt<bool>(j.at("inner_invariant"));
    const auto& c = j.at("constructed_pair");
    if (!c.is_null()) {
        r.constructed = ConstructedPair{get_num(c.at("column_ratio_c")), get_num(c.at("beta_bound")),
                                        get_opt_num(c.at("beta_estimate")), c.at("inner_generators").get<std::size_t>(),
                                        c.at("inner_invariant").get<bool>()};
    }
    return r;
}

inline Json to_json(const PerturbationReport& r) {
    Json levels = Json::array();
    for (const auto& lv : r.levels) {
        Json trials = Json::array();
        for (const auto& t : lv.trials) {
            trials.push_back(Json{{"hausdorff", num(t.hausdorff)},
                                  {"jsr", to_json(t.jsr)},
                                  {"sub", to_json(t.sub)},
                                  {"jsr_deviation", num(t.jsr_deviation)},
                                  {"sub_deviation", num(t.sub_deviation)}});
        }
        levels.push_back(Json{{"delta", num(lv.delta)},
                              {"max_hausdorff", num(lv.max_hausdorff)},
                              {"worst_jsr_deviation", num(lv.worst_jsr_deviation)},
                              {"worst_sub_deviation", num(lv.worst_sub_deviation)},
                              {"trials", trials}});
    }
    return Json{{"base_jsr", to_json(r.base_jsr)},
                {"base_sub", to_json(r.base_sub)},
                {"trials", r.trials},
                {"seed", r.seed},
                {"preserve_positivity", r.preserve_positivity},
                {"levels", levels},
                {"warnings", r.warnings}};
}

inline PerturbationReport perturbation_from(const Json& j) {
    PerturbationReport r;
    r.base_jsr = interval_from(j.at("base_jsr"));
    r.base_sub = interval_from(j.at("base_sub"));
    r.trials = j.at("trials").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.preserve_positivity = j.at("preserve_positivity").get<bool>();
    for (const auto& lj : j.at("levels")) {
        PerturbationLevel lv;
        lv.delta = get_num(lj.at("delta"));
        lv.max_hausdorff = get_num(lj.at("max_hausdorff"));
        lv.worst_jsr_deviation = get_num(lj.at("worst_jsr_deviation"));
        lv.worst_sub_deviation = get_num(lj.at("worst_sub_deviation"));
        for (const auto& t : lj.at("trials")) {
            lv.trials.push_back({get_num(t.at("hausdorff")), interval_from(t.at("jsr")), interval_from(t.at("sub")),
                                 get_num(t.at("jsr_deviation")), get_num(t.at("sub_deviation"))});
        }
        r.levels.push_back(std::move(lv));
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

inline Json to_json(const VerifyReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        checks.push_back(Json{{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
    }
    return Json{{"all_hold", r.all_hold()}, {"checks", checks}};
}

inline VerifyReport verify_from(const Json& j) {
    VerifyReport r;
    for (const auto& c : j.at("checks")) {
        r.checks.push_back({c.at("name").get<std::string>(), parse_check_status(c.at("status").get<std::string>()),
                            c.at("detail").get<std::string>()});
    }
    return r;
}

// ---- job and document ----

inline Json to_json(const JobSpec& s) {
    return Json{{"command", to_string(s.command)},
                {"input", s.input},
                {"t_max", s.t_max},
                {"k_max", s.k_max},
                {"tol", num(s.tol)},
                {"norm", to_string(s.norm)},
                {"deltas", nums(s.deltas)},
                {"trials", s.trials},
                {"seed", s.seed},
                {"budget", s.budget},
                {"dim_cap", s.dim_cap},
                {"cone", opt(s.cone)},
                {"preserve_positivity", s.preserve_positivity},
                {"beta_samples", s.beta_samples},
                {"format", to_string(s.format)},
                {"out", opt(s.out)}};
}

inline JobSpec job_from(const Json& j) {
    JobSpec s;
    s.command = parse_command(j.at("command").get<std::string>());
    s.input = j.at("input").get<std::string>();
    s.t_max = j.at("t_max").get<std::size_t>();
    s.k_max = j.at("k_max").get<std::size_t>();
    s.tol = get_num(j.at("tol"));
    s.norm = parse_norm_kind(j.at("norm").get<std::string>());
    s.deltas = get_nums(j.at("deltas"));
    s.trials = j.at("trials").get<std::size_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.budget = j.at("budget").get<std::uint64_t>();
    s.dim_cap = j.at("dim_cap").get<std::size_t>();
    s.cone = get_opt<std::string>(j.at("cone"));
    s.preserve_positivity = j.at("preserve_positivity").get<bool>();
    s.beta_samples = j.at("beta_samples").get<std::size_t>();
    s.format = parse_output_format(j.at("format").get<std::string>());
    s.out = get_opt<std::string>(j.at("out"));
    return s;
}

inline Json to_json(const InputSummary& s) {
    return Json{{"dim", s.dim},
                {"matrices", s.matrices},
                {"cone", s.cone},
                {"cone_generators", s.cone_generators},
                {"cone_origin", s.cone_origin}};
}

inline InputSummary input_summary_from(const Json& j) {
    return {j.at("dim").get<std::size_t>(), j.at("matrices").get<std::size_t>(), j.at("cone").get<std::string>(),
            j.at("cone_generators").get<std::size_t>(), j.at("cone_origin").get<std::string>()};
}

template <class T>
Json section(const std::optional<T>& v) {
    return v ? to_json(*v) : Json(nullptr);
}

inline Json to_json(const Document& d) {
    return Json{{"schema", d.schema},
                {"tool_version", d.version},
                {"job", to_json(d.job)},
                {"input", to_json(d.input)},
                {"bounds", section(d.bounds)},
                {"subradius", section(d.subradius)},
                {"kron", section(d.kron)},
                {"trace_sequence", section(d.trace)},
                {"cone_check", section(d.cone_check)},
                {"perturbation", section(d.perturbation)},
                {"verify", section(d.verify)},
                {"warnings", d.warnings}};
}

template <class T, class F>
std::optional<T> section_from(const Json& j, F&& parse) {
    if (j.is_null()) return std::nullopt;
    return parse(j);
}

inline Document document_from(const Json& j) {
    Document d;
    d.schema = j.at("schema").get<std::string>();
    if (d.schema != report_schema) throw ValidationError("unsupported report schema '" + d.schema + "'");
    d.version = j.at("tool_version").get<std::string>();
    d.job = job_from(j.at("job"));
    d.input = input_summary_from(j.at("input"));
    d.bounds = section_from<BoundReport>(j.at("bounds"), bound_report_from);
    d.subradius = section_from<SubradiusReport>(j.at("subradius"), subradius_report_from);
    d.kron = section_from<KronReport>(j.at("kron"), kron_report_from);
    d.trace = section_from<TraceSequence>(j.at("trace_sequence"), trace_sequence_from);
    d.cone_check = section_from<ConeCheckReport>(j.at("cone_check"), cone_check_from);
    d.perturbation = section_from<PerturbationReport>(j.at("perturbation"), perturbation_from);
    d.verify = section_from<VerifyReport>(j.at("verify"), verify_from);
    d.warnings = j.at("warnings").get<std::vector<std::string>>();
    return d;
}

// ---- text ----

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

inline bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

inline void dump(const Json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    if (j.is_number_float()) {
        out += format_double(j.get<double>());
    } else if (is_scalar(j)) {
        out += j.dump();
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return is_scalar(e); });
        out += '[';
        bool first = true;
        for (const auto& e : j) {
            out += first ? "" : ",";
            if (flat) out += first ? "" : " ";
            else out += "\n" + inner;
            dump(e, out, indent + 1);
            first = false;
        }
        if (!flat) out += "\n" + pad;
        out += ']';
    } else {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            out += first ? "\n" : ",\n";
            out += inner + Json(key).dump() + ": ";
            dump(value, out, indent + 1);
            first = false;
        }
        out += "\n" + pad + '}';
    }
}

} // namespace io

/// Machine-format text for a document (schema jsc-report/1).
inline std::string emit_machine(const Document& doc) {
    std::string out;
    io::dump(io::to_json(doc), out, 0);
    out += '\n';
    return out;
}

/// Inverse of emit_machine.
inline Document parse_machine(const std::string& text) {
    try {
        return io::document_from(Json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed report: ") + e.what());
    }
}

} // namespace jsc
