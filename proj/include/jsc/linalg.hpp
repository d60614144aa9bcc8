#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "jsc/errors.hpp"

namespace jsc {

using Word = std::vector<std::size_t>;

// Largest n^k admitted for Kronecker products and powers.
inline constexpr std::size_t default_kron_cap = 4096;

// Absolute tolerance for small matrices, relative above.
inline double default_spectral_tol(std::size_t n) { return n <= 8 ? 1e-10 : 1e-8; }

/**
 * Dense real square matrix with finite entries.
 *
 * Immutable once built; every constructor validates shape and finiteness and
 * throws ValidationError otherwise.
 */
class Matrix {
public:
    explicit Matrix(Eigen::MatrixXd values) : m_(std::move(values)) { validate(); }

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        const auto n = rows.size();
        m_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        Eigen::Index i = 0;
        for (const auto& row : rows) {
            if (row.size() != n) {
                throw ValidationError("matrix is not square: row " + std::to_string(i) + " has " +
                                      std::to_string(row.size()) + " entries, expected " + std::to_string(n));
            }
            Eigen::Index j = 0;
            for (double v : row) m_(i, j++) = v;
            ++i;
        }
        validate();
    }

    static Matrix identity(std::size_t n) {
        return Matrix(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    }
    static Matrix zero(std::size_t n) {
        return Matrix(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    const Eigen::MatrixXd& values() const noexcept { return m_; }

    bool is_zero() const { return (m_.array() == 0.0).all(); }
    bool is_nonnegative() const { return (m_.array() >= 0.0).all(); }
    bool is_positive() const { return (m_.array() > 0.0).all(); }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        require_same_dim(a, b);
        return Matrix(a.m_ * b.m_);
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        require_same_dim(a, b);
        return Matrix(a.m_ + b.m_);
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        require_same_dim(a, b);
        return Matrix(a.m_ - b.m_);
    }
    friend Matrix operator*(double s, const Matrix& a) { return Matrix(s * a.m_); }

    // Exact entrywise equality.
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
    }

private:
    static void require_same_dim(const Matrix& a, const Matrix& b) {
        if (a.dim() != b.dim()) {
            throw DomainError("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
        }
    }

    void validate() const {
        if (m_.rows() < 1) throw ValidationError("matrix dimension must be at least 1");
        if (m_.rows() != m_.cols()) {
            throw ValidationError("matrix is not square: " + std::to_string(m_.rows()) + "x" +
                                  std::to_string(m_.cols()));
        }
        if (!m_.allFinite()) throw ValidationError("matrix has non-finite entries");
    }

    Eigen::MatrixXd m_;
};

/// Finite, nonempty, ordered list of matrices of one dimension.
class MatrixSet {
public:
    MatrixSet(std::vector<Matrix> members) : members_(std::move(members)) {
        if (members_.empty()) throw ValidationError("matrix set must be nonempty");
        for (std::size_t i = 1; i < members_.size(); ++i) {
            if (members_[i].dim() != members_[0].dim()) {
                throw ValidationError("matrix " + std::to_string(i) + " has dimension " +
                                      std::to_string(members_[i].dim()) + ", expected " +
                                      std::to_string(members_[0].dim()));
            }
        }
    }
    MatrixSet(std::initializer_list<Matrix> members) : MatrixSet(std::vector<Matrix>(members)) {}

    std::size_t size() const noexcept { return members_.size(); }
    std::size_t dim() const noexcept { return members_.front().dim(); }
    const Matrix& operator[](std::size_t i) const { return members_[i]; }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }
    const std::vector<Matrix>& members() const noexcept { return members_; }

    MatrixSet scaled(double alpha) const {
        std::vector<Matrix> out;
        out.reserve(members_.size());
        for (const auto& a : members_) out.push_back(alpha * a);
        return MatrixSet(std::move(out));
    }

    friend bool operator==(const MatrixSet& a, const MatrixSet& b) { return a.members_ == b.members_; }

private:
    std::vector<Matrix> members_;
};

enum class NormKind { two, one, inf, max_entry };

inline std::string_view to_string(NormKind k) {
    switch (k) {
    case NormKind::two: return "two";
    case NormKind::one: return "one";
    case NormKind::inf: return "inf";
    case NormKind::max_entry: return "max";
    }
    return "two";
}

inline NormKind parse_norm_kind(std::string_view s) {
    if (s == "two") return NormKind::two;
    if (s == "one") return NormKind::one;
    if (s == "inf") return NormKind::inf;
    if (s == "max") return NormKind::max_entry;
    throw ValidationError("unknown norm kind '" + std::string(s) + "' (expected two, one, inf or max)");
}

namespace detail {

inline double two_norm(const Eigen::MatrixXd& a) {
    const auto n = a.rows();
    if (n == 1) return std::abs(a(0, 0));
    if (n == 2) {
        // largest eigenvalue of the symmetric 2x2 matrix A^T A
        const double p = a(0, 0) * a(0, 0) + a(1, 0) * a(1, 0);
        const double r = a(0, 1) * a(0, 1) + a(1, 1) * a(1, 1);
        const double q = a(0, 0) * a(0, 1) + a(1, 0) * a(1, 1);
        const double half = 0.5 * (p - r);
        return std::sqrt(std::max(0.0, 0.5 * (p + r) + std::hypot(half, q)));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline double matrix_norm(const Eigen::MatrixXd& a, NormKind kind) {
    if ((a.array() == 0.0).all()) return 0.0;
    switch (kind) {
    case NormKind::two: return two_norm(a);
    case NormKind::one: return a.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::inf: return a.cwiseAbs().rowwise().sum().maxCoeff();
    case NormKind::max_entry: return a.cwiseAbs().maxCoeff();
    }
    return two_norm(a);
}

// Gelfand estimate ||A^(2^j)||^(1/2^j), iterated until successive values
// agree within tol. Powers are renormalised at every squaring; the
// accumulated scale is kept in log space.
inline double gelfand_radius(const Eigen::MatrixXd& a, double tol, int max_squarings = 64) {
    Eigen::MatrixXd p = a;
    double log_scale = 0.0;
    double prev = -1.0;
    double exponent = 1.0;
    for (int j = 0; j <= max_squarings; ++j) {
        const double nrm = two_norm(p);
        if (nrm == 0.0) return 0.0;
        const double est = std::exp((log_scale + std::log(nrm)) / exponent);
        if (prev >= 0.0 && std::abs(est - prev) < tol) return est;
        prev = est;
        p /= nrm;
        p = (p * p).eval();
        log_scale = 2.0 * (log_scale + std::log(nrm));
        exponent *= 2.0;
    }
    throw NumericalError("Gelfand estimate did not settle within " + std::to_string(max_squarings) +
                         " squarings (last estimate " + std::to_string(prev) + ", tol " + std::to_string(tol) +
                         ")");
}

inline double spectral_radius(const Eigen::MatrixXd& a, double tol) {
    const auto n = a.rows();
    if ((a.array() == 0.0).all()) return 0.0;
    if (n == 1) return std::abs(a(0, 0));
    if (n == 2) {
        const double half_tr = 0.5 * (a(0, 0) + a(1, 1));
        const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        const double disc = half_tr * half_tr - det;
        if (disc >= 0.0) return std::abs(half_tr) + std::sqrt(disc);
        return std::sqrt(det);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
    if (es.info() == Eigen::Success) return es.eigenvalues().cwiseAbs().maxCoeff();
    return gelfand_radius(a, tol);
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// n^k, or 0 when it exceeds cap.
inline std::size_t capped_power(std::size_t n, std::size_t k, std::size_t cap) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (out > cap / n) return 0;
        out *= n;
    }
    return out <= cap ? out : 0;
}

inline Eigen::MatrixXd kron_power(const Eigen::MatrixXd& a, std::size_t k) {
    Eigen::MatrixXd out = a;
    for (std::size_t i = 1; i < k; ++i) out = kron(a, out);
    return out;
}

} // namespace detail

/// Left-to-right product of the members indexed by word.
inline Matrix mat_product(std::span<const std::size_t> word, const MatrixSet& sigma) {
    if (word.empty()) throw DomainError("product word must be nonempty");
    for (std::size_t idx : word) {
        if (idx >= sigma.size()) {
            throw DomainError("word index " + std::to_string(idx) + " out of range for a set of " +
                              std::to_string(sigma.size()) + " matrices");
        }
    }
    Eigen::MatrixXd p = sigma[word[0]].values();
    for (std::size_t i = 1; i < word.size(); ++i) p = (p * sigma[word[i]].values()).eval();
    return Matrix(std::move(p));
}

inline Matrix mat_power(const Matrix& a, std::size_t t) {
    if (t == 0) return Matrix::identity(a.dim());
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(a.values().rows(), a.values().cols());
    Eigen::MatrixXd base = a.values();
    while (t > 0) {
        if (t & 1U) result = (result * base).eval();
        t >>= 1U;
        if (t > 0) base = (base * base).eval();
    }
    return Matrix(std::move(result));
}

/**
 * Largest eigenvalue modulus.
 *
 * Uses closed forms for n <= 2 and a real Schur reduction above. If the
 * reduction fails to converge, falls back to the Gelfand estimate, which
 * approaches rho(A) from above. Exactly 0 for the zero matrix.
 */
inline double spectral_radius(const Matrix& a, double tol) {
    if (!(tol > 0.0)) throw DomainError("spectral_radius: tol must be positive");
    return detail::spectral_radius(a.values(), tol);
}
inline double spectral_radius(const Matrix& a) { return spectral_radius(a, default_spectral_tol(a.dim())); }

inline double spectral_radius_gelfand(const Matrix& a, double tol) {
    if (!(tol > 0.0)) throw DomainError("spectral_radius_gelfand: tol must be positive");
    return detail::gelfand_radius(a.values(), tol);
}

/// Full spectrum; used for the Perron-Frobenius checks.
inline std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a.values(), false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration did not converge");
    std::vector<std::complex<double>> out(es.eigenvalues().begin(), es.eigenvalues().end());
    return out;
}

/// Induced operator norm (two, one or inf).
inline double operator_norm(const Matrix& a, NormKind kind = NormKind::two) {
    if (kind == NormKind::max_entry) throw DomainError("max-entry norm is not an induced operator norm");
    return detail::matrix_norm(a.values(), kind);
}

/// Any supported norm, including the max-entry norm.
inline double matrix_norm(const Matrix& a, NormKind kind) { return detail::matrix_norm(a.values(), kind); }

inline double trace(const Matrix& a) { return a.values().trace(); }

inline Matrix kron(const Matrix& a, const Matrix& b, std::size_t cap = default_kron_cap) {
    if (a.dim() > cap / b.dim() || a.dim() * b.dim() > cap) {
        throw SizeError("Kronecker product dimension " + std::to_string(a.dim()) + "*" + std::to_string(b.dim()) +
                        " exceeds cap " + std::to_string(cap));
    }
    return Matrix(detail::kron(a.values(), b.values()));
}

inline Matrix kron_power(const Matrix& a, std::size_t k, std::size_t cap = default_kron_cap) {
    if (k < 1) throw DomainError("kron_power: k must be at least 1");
    if (detail::capped_power(a.dim(), k, cap) == 0) {
        throw SizeError("Kronecker power dimension " + std::to_string(a.dim()) + "^" + std::to_string(k) +
                        " exceeds cap " + std::to_string(cap));
    }
    return Matrix(detail::kron_power(a.values(), k));
}

} // namespace jsc
