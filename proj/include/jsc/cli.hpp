#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jsc/errors.hpp"
#include "jsc/input.hpp"
#include "jsc/jobs.hpp"
#include "jsc/report_io.hpp"

namespace jsc {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;  // verify found a violated check
inline constexpr int validation = 2;
inline constexpr int resource = 3;
inline constexpr int numerical = 4;
} // namespace exit_code

namespace human {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string num(const std::optional<double>& v) { return v ? num(*v) : "-"; }

inline std::string word(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "." : "") + std::to_string(w[i]);
    return s.empty() ? "-" : s;
}

// Left-aligned columns padded to the widest cell.
class Table {
public:
    explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& os) const {
        std::vector<std::size_t> width;
        for (const auto& r : rows_) {
            width.resize(std::max(width.size(), r.size()), 0);
            for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
        }
        for (const auto& r : rows_) {
            std::string line;
            for (std::size_t i = 0; i < r.size(); ++i) {
                line += r[i];
                if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
            }
            os << "  " << line << '\n';
        }
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

inline std::string interval(const BoundInterval& iv) {
    std::string s = "[" + num(iv.lower) + ", " + num(iv.upper) + "]  lower: " + iv.lower_source +
                    "  upper: " + iv.upper_source;
    if (iv.collapsed) s += "  (collapsed)";
    return s;
}

inline void print(std::ostream& os, const BoundReport& r) {
    os << "bounds by product length (norm " << to_string(r.norm) << ", " << r.products << " products)\n";
    Table t({"t", "upper_jsr", "lower_jsr_rho", "lower_jsr_trace", "upper_sub_rho", "upper_sub_norm", "provenance"});
    for (std::size_t i = 0; i < r.t_values.size(); ++i) {
        t.add({std::to_string(r.t_values[i]), num(r.upper_jsr[i].value), num(r.lower_jsr_rho[i].value),
               num(r.lower_jsr_trace[i].value), num(r.upper_sub_rho[i].value), num(r.upper_sub_norm[i].value),
               "max-rho " + word(r.lower_jsr_rho[i].word) + ", min-rho " + word(r.upper_sub_rho[i].word)});
    }
    t.print(os);
    os << "jsr interval: " << interval(r.best_interval_jsr) << '\n';
    os << "subradius upper estimates: " << interval(r.best_interval_sub) << '\n';
}

inline void print(std::ostream& os, const SubradiusReport& r) {
    os << "subradius interval: " << interval(r.interval) << '\n';
    if (r.conic_lower) os << "conic lower bound: " << num(*r.conic_lower) << '\n';
}

inline void print(std::ostream& os, const KronReport& r) {
    os << "Kronecker lift (" << (r.certified ? "certified by an invariant cone" : "not certified") << ")\n";
    Table t({"k", "rho_sum", "lower_k", "upper_k", "provenance"});
    for (std::size_t i = 0; i < r.k_values.size(); ++i) {
        t.add({std::to_string(r.k_values[i]), num(r.rho_sum[i]), num(r.lower_k[i]), num(r.upper_k[i]),
               "kron-power-sum@k=" + std::to_string(r.k_values[i])});
    }
    t.print(os);
}

inline void print(std::ostream& os, const TraceSequence& s) {
    os << "trace sequence\n";
    Table t({"t", "s", "r", "provenance"});
    for (std::size_t i = 0; i < s.t_values.size(); ++i) {
        t.add({std::to_string(s.t_values[i]), num(s.s[i]), num(s.r[i]),
               "max-trace-root, max-spectral-radius@t=" + std::to_string(s.t_values[i])});
    }
    t.print(os);
    const auto& d = s.diagnostic;
    os << "primitive member: " << (d.primitive_member ? std::to_string(*d.primitive_member) : "none") << '\n';
    os << "window t = " << d.window_first << ".." << d.window_last << ": s width " << num(d.s_width)
       << ", r width " << num(d.r_width) << (d.persistent_oscillation ? ", persistent oscillation" : "") << '\n';
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }
inline std::string yes_no(const std::optional<bool>& b) { return b ? yes_no(*b) : "-"; }

inline void print(std::ostream& os, const ConeCheckReport& r) {
    os << "cone: full-dimensional " << yes_no(r.full_dimensional) << ", pointed " << yes_no(r.pointed)
       << ", primitivity horizon " << r.primitivity_horizon << '\n';
    Table t({"member", "invariant", "positive", "primitive", "exponent"});
    for (const auto& m : r.members) {
        t.add({std::to_string(m.index), yes_no(m.invariant), yes_no(m.positive), yes_no(m.primitive),
               m.primitivity_exponent ? std::to_string(*m.primitivity_exponent) : "-"});
    }
    t.print(os);
    os << (r.invariant ? "invariant" : "not invariant") << '\n';
    if (r.inner_embedded) {
        os << "inner cone: embedded " << yes_no(r.inner_embedded) << ", invariant " << yes_no(r.inner_invariant)
           << '\n';
    }
    if (r.constructed) {
        const auto& c = *r.constructed;
        os << "constructed pair: c " << num(c.column_ratio_c) << ", beta bound " << num(c.beta_bound)
           << ", beta estimate " << num(c.beta_estimate) << ", " << c.inner_generators << " inner generators"
           << ", inner invariant " << yes_no(c.inner_invariant) << '\n';
    }
}

inline void print(std::ostream& os, const PerturbationReport& r) {
    os << "base jsr " << interval(r.base_jsr) << '\n' << "base subradius " << interval(r.base_sub) << '\n';
    os << "perturbation (" << r.trials << " trials per delta, seed " << r.seed
       << (r.preserve_positivity ? ", positivity preserved" : "") << ")\n";
    Table t({"delta", "max_hausdorff", "worst_jsr_dev", "worst_sub_dev"});
    for (const auto& lv : r.levels) {
        t.add({num(lv.delta), num(lv.max_hausdorff), num(lv.worst_jsr_deviation), num(lv.worst_sub_deviation)});
    }
    t.print(os);
}

inline void print(std::ostream& os, const VerifyReport& r) {
    Table t({"check", "status", "detail"});
    for (const auto& c : r.checks) t.add({c.name, to_string(c.status), c.detail});
    t.print(os);
    os << (r.all_hold() ? "all checks hold" : "VIOLATION") << '\n';
}

} // namespace human

/// Aligned tables for a terminal, one block per populated section.
inline std::string emit_human(const Document& doc) {
    std::ostringstream os;
    os << "jsc " << to_string(doc.job.command) << ": " << doc.input.matrices << " matrices of dimension "
       << doc.input.dim << ", cone " << doc.input.cone << '\n';
    if (doc.bounds) human::print(os, *doc.bounds);
    if (doc.subradius) human::print(os, *doc.subradius);
    if (doc.kron) human::print(os, *doc.kron);
    if (doc.trace) human::print(os, *doc.trace);
    if (doc.cone_check) human::print(os, *doc.cone_check);
    if (doc.perturbation) human::print(os, *doc.perturbation);
    if (doc.verify) human::print(os, *doc.verify);
    for (const auto& w : doc.warnings) os << "warning: " << w << '\n';
    return os.str();
}

inline std::string emit_report(const Document& doc, OutputFormat format) {
    return format == OutputFormat::machine ? emit_machine(doc) : emit_human(doc);
}

inline int exit_code_for(const Document& doc) {
    return doc.verify && !doc.verify->all_hold() ? exit_code::check_failed : exit_code::ok;
}

/// Exit code for the exception currently being handled; writes a one-line
/// diagnostic to `err`. Call only from inside a catch block.
inline int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << '\n';
        return exit_code::validation;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return exit_code::validation;
    } catch (const SizeError& e) {
        err << "size limit: " << e.what() << '\n';
        return exit_code::resource;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << '\n';
        return exit_code::resource;
    } catch (const std::bad_alloc&) {
        err << "resource limit: out of memory\n";
        return exit_code::resource;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_code::numerical;
    }
}

/**
 * Parse the input file, execute the job and write the report: to `out` when
 * job.out is empty, otherwise to that path. Errors go to `err`; the return
 * value is the process exit code.
 */
inline int run(const JobSpec& job, std::ostream& out, std::ostream& err) {
    try {
        const auto input = parse_input_file(job.input);
        const auto doc = execute(job, input);
        const auto text = emit_report(doc, job.format);
        if (job.out) {
            std::ofstream f(*job.out);
            if (!f || !(f << text)) throw ValidationError("cannot write '" + *job.out + "'");
        } else {
            out << text;
        }
        return exit_code_for(doc);
    } catch (const Error&) {
        return exit_code_for_current_exception(err);
    } catch (const std::bad_alloc&) {
        return exit_code_for_current_exception(err);
    }
}

inline int run(const JobSpec& job) { return run(job, std::cout, std::cerr); }

} // namespace jsc
