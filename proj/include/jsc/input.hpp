#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "jsc/cones.hpp"
#include "jsc/errors.hpp"
#include "jsc/linalg.hpp"

namespace jsc {

struct InputData {
    MatrixSet sigma;
    std::optional<PolyhedralCone> cone;
    std::optional<PolyhedralCone> inner_cone;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

inline bool parse_integer(std::string_view s, long long& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

} // namespace detail

/**
 * Parse one numeric literal: a decimal (correctly rounded) or an integer
 * ratio p/q, with |p|, |q| < 2^53 so both convert exactly before the single
 * rounding of the division.
 */
inline double parse_number(std::string_view tok, std::size_t line) {
    const auto slash = tok.find('/');
    if (slash != std::string_view::npos) {
        long long p = 0;
        long long q = 0;
        if (!detail::parse_integer(tok.substr(0, slash), p) || !detail::parse_integer(tok.substr(slash + 1), q)) {
            throw ParseError(line, "malformed rational '" + std::string(tok) + "'");
        }
        constexpr long long exact = 1LL << 53;
        if (q == 0) throw ParseError(line, "zero denominator in '" + std::string(tok) + "'");
        if (p >= exact || p <= -exact || q >= exact || q <= -exact) {
            throw ParseError(line, "rational '" + std::string(tok) + "' has parts beyond 2^53");
        }
        return static_cast<double>(p) / static_cast<double>(q);
    }
    std::string_view s = tok;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError(line, "malformed number '" + std::string(tok) + "'");
    }
    return v;
}

namespace detail {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-empty line, comments (#...) stripped. False at end of input.
    bool next(std::vector<std::string_view>& tokens) {
        while (std::getline(in_, buf_)) {
            ++line_;
            const auto hash = buf_.find('#');
            if (hash != std::string::npos) buf_.erase(hash);
            tokens = split_ws(buf_);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    std::size_t line() const { return line_; }

private:
    std::istream& in_;
    std::string buf_;
    std::size_t line_ = 0;
};

inline std::size_t parse_count(std::string_view tok, std::size_t line, const char* what) {
    long long v = 0;
    if (!parse_integer(tok, v) || v < 1) throw ParseError(line, std::string(what) + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

inline std::vector<double> parse_row(LineReader& r, std::size_t n, const std::string& context) {
    std::vector<std::string_view> toks;
    if (!r.next(toks)) throw ParseError(r.line() + 1, "unexpected end of input in " + context);
    if (toks.size() != n) {
        throw ValidationError("line " + std::to_string(r.line()) + ": " + context + " row has " +
                              std::to_string(toks.size()) + " entries, expected " + std::to_string(n));
    }
    std::vector<double> row;
    for (auto t : toks) row.push_back(parse_number(t, r.line()));
    return row;
}

inline PolyhedralCone parse_cone(LineReader& r, const std::vector<std::string_view>& head, std::size_t n) {
    const std::string key(head[0]);
    if (head.size() == 2 && head[1] == "orthant") return PolyhedralCone::orthant(n);
    if (head.size() == 3 && head[1] == "generators") {
        const std::size_t g = parse_count(head[2], r.line(), "generator count");
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < g; ++i) rows.push_back(parse_row(r, n, key + " generator"));
        try {
            return PolyhedralCone::from_generators(rows);
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(r.line()) + ": " + e.what());
        }
    }
    throw ParseError(r.line(), "expected '" + key + " orthant' or '" + key + " generators <count>'");
}

} // namespace detail

/**
 * Read the line-oriented input format:
 *
 *   dim <n>
 *   matrices <m>
 *   <m blocks of n rows of n numbers>
 *   [cone orthant | cone generators <g> + g rows]
 *   [inner_cone orthant | inner_cone generators <g> + g rows]
 *
 * '#' starts a comment. Numbers are decimals or integer ratios such as -1/3.
 */
inline InputData parse_input(std::istream& in) {
    detail::LineReader r(in);
    std::vector<std::string_view> toks;
    if (!r.next(toks) || toks.size() != 2 || toks[0] != "dim") throw ParseError(r.line(), "expected 'dim <n>'");
    const std::size_t n = detail::parse_count(toks[1], r.line(), "dim");
    if (!r.next(toks) || toks.size() != 2 || toks[0] != "matrices") {
        throw ParseError(r.line(), "expected 'matrices <m>'");
    }
    const std::size_t m = detail::parse_count(toks[1], r.line(), "matrix count");
    std::vector<Matrix> members;
    for (std::size_t k = 0; k < m; ++k) {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = detail::parse_row(r, n, "matrix " + std::to_string(k));
            for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
        }
        members.emplace_back(std::move(a));
    }
    std::optional<PolyhedralCone> cone;
    std::optional<PolyhedralCone> inner;
    while (r.next(toks)) {
        if (toks[0] == "cone" && !cone) {
            cone = detail::parse_cone(r, toks, n);
        } else if (toks[0] == "inner_cone" && !inner) {
            inner = detail::parse_cone(r, toks, n);
        } else {
            throw ParseError(r.line(), "unexpected '" + std::string(toks[0]) + "'");
        }
    }
    return {MatrixSet(std::move(members)), std::move(cone), std::move(inner)};
}

inline InputData parse_input_string(const std::string& text) {
    std::istringstream in(text);
    return parse_input(in);
}

inline InputData parse_input_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file '" + path + "'");
    return parse_input(in);
}

} // namespace jsc
