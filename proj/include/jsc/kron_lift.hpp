#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jsc/cones.hpp"
#include "jsc/errors.hpp"
#include "jsc/linalg.hpp"

namespace jsc {

struct KronReport {
    std::vector<std::size_t> k_values;
    std::vector<double> rho_sum;  // rho(A_1^{(x)k} + ... + A_m^{(x)k})
    std::vector<double> upper_k;  // rho_sum^(1/k)
    std::vector<double> lower_k;  // (rho_sum / m)^(1/k)
    bool certified = false;       // a common invariant cone was supplied and verified
    std::vector<std::string> warnings;

    friend bool operator==(const KronReport&, const KronReport&) = default;
};

/// Sum of the k-th Kronecker powers of the members.
inline Matrix kron_power_sum(const MatrixSet& sigma, std::size_t k, std::size_t cap = default_kron_cap) {
    if (k < 1) throw DomainError("kron_power_sum: k must be at least 1");
    const auto dim = detail::capped_power(sigma.dim(), k, cap);
    if (dim == 0) {
        throw SizeError("Kronecker lift dimension " + std::to_string(sigma.dim()) + "^" + std::to_string(k) +
                        " exceeds cap " + std::to_string(cap));
    }
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& a : sigma) sum += detail::kron_power(a.values(), k);
    return Matrix(std::move(sum));
}

/**
 * Kronecker-lift sandwich: for a set sharing an invariant cone,
 * (rho_sum/m)^(1/k) <= rho(Sigma) <= rho_sum^(1/k) for every k.
 *
 * The upper half relies on the common cone; without a verified cone the
 * report carries a warning and certified = false.
 */
inline KronReport kron_lift_bounds(const MatrixSet& sigma, std::size_t k_max,
                                   const std::optional<PolyhedralCone>& cone = std::nullopt,
                                   std::size_t cap = default_kron_cap) {
    if (k_max < 1) throw DomainError("k_max must be at least 1");
    if (detail::capped_power(sigma.dim(), k_max, cap) == 0) {
        throw SizeError("Kronecker lift dimension " + std::to_string(sigma.dim()) + "^" + std::to_string(k_max) +
                        " exceeds cap " + std::to_string(cap));
    }
    KronReport rep;
    if (!cone) {
        rep.warnings.push_back("no invariant cone supplied; the upper sandwich bound is not certified");
    } else if (cone->dim() != sigma.dim()) {
        throw DomainError("cone dimension does not match the matrices");
    } else if (!is_invariant(sigma, *cone)) {
        rep.warnings.push_back("supplied cone is not invariant under every member; the upper sandwich bound is not certified");
    } else {
        rep.certified = true;
    }
    const auto m = static_cast<double>(sigma.size());
    for (std::size_t k = 1; k <= k_max; ++k) {
        const auto sum = kron_power_sum(sigma, k, cap);
        const double rho = spectral_radius(sum);
        const double inv_k = 1.0 / static_cast<double>(k);
        rep.k_values.push_back(k);
        rep.rho_sum.push_back(rho);
        rep.upper_k.push_back(std::pow(rho, inv_k));
        rep.lower_k.push_back(std::pow(rho / m, inv_k));
    }
    return rep;
}

} // namespace jsc
