#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "jsc/linalg.hpp"

using namespace jsc;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = u(rng);
    return Matrix(a);
}

const MatrixSet odd_even{Matrix{{0, 1}, {0, 0}}, Matrix{{0, 0}, {1, 0}}};
const MatrixSet sigma3{Matrix{{1, 1}, {0, 1}}, Matrix{{0, 0}, {-1.0 / 3.0, 1}}};

} // namespace

TEST(Matrix, RejectsNonSquareEmptyAndNonFinite) {
    EXPECT_THROW(Matrix(Eigen::MatrixXd(2, 3)), ValidationError);
    EXPECT_THROW(Matrix(Eigen::MatrixXd(0, 0)), ValidationError);
    EXPECT_THROW((Matrix{{1, NAN}, {0, 1}}), ValidationError);
    EXPECT_THROW((Matrix{{1, INFINITY}, {0, 1}}), ValidationError);
    EXPECT_THROW((Matrix{{1, 2}, {3}}), ValidationError);
}

TEST(MatrixSet, RejectsEmptyAndMixedDimensions) {
    EXPECT_THROW(MatrixSet(std::vector<Matrix>{}), ValidationError);
    EXPECT_THROW((MatrixSet{Matrix::identity(2), Matrix::identity(3)}), ValidationError);
}

TEST(MatProduct, IdentityWord) {
    const MatrixSet s{Matrix::identity(2)};
    const std::vector<std::size_t> w{0};
    EXPECT_EQ(mat_product(w, s), Matrix::identity(2));
}

TEST(MatProduct, LeftToRight) {
    const std::vector<std::size_t> w{0, 1};
    EXPECT_EQ(mat_product(w, odd_even), (Matrix{{1, 0}, {0, 0}}));
}

TEST(MatProduct, ZeroProductFactor) {
    const std::vector<std::size_t> w{1, 0, 0, 0};
    const auto p = mat_product(w, sigma3);
    // zero in exact arithmetic; rounding of -1/3 leaves ~1e-17
    auto residue = [](const Matrix& m) { return m.values().cwiseAbs().maxCoeff(); };
    EXPECT_FALSE(p.is_zero());
    EXPECT_LE(residue(p * p), 1e-15);
    const std::vector<std::size_t> ww{1, 0, 0, 0, 1, 0, 0, 0};
    EXPECT_LE(residue(mat_product(ww, sigma3)), 1e-15);
    const std::vector<std::size_t> given{0, 0, 0, 1};
    const auto q = mat_product(given, sigma3);
    EXPECT_FALSE(q.is_zero());
    EXPECT_TRUE((q * q).is_zero());
}

TEST(MatProduct, Errors) {
    const std::vector<std::size_t> empty;
    const std::vector<std::size_t> bad{0, 2};
    EXPECT_THROW(mat_product(empty, odd_even), DomainError);
    EXPECT_THROW(mat_product(bad, odd_even), DomainError);
}

TEST(SpectralRadius, Examples) {
    EXPECT_NEAR(spectral_radius(Matrix::identity(2)), 1.0, 1e-12);
    EXPECT_EQ(spectral_radius(Matrix{{0, 1}, {0, 0}}), 0.0);
    EXPECT_NEAR(spectral_radius(Matrix{{0, -1}, {1, 0}}), 1.0, 1e-12);
    EXPECT_EQ(spectral_radius(Matrix::zero(4)), 0.0);
    EXPECT_NEAR(spectral_radius(Matrix{{2, 1}, {1, 2}}), 3.0, 1e-12);
}

TEST(SpectralRadius, LargerMatricesAgreeWithGelfand) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const auto a = random_matrix(rng, 2 + static_cast<std::size_t>(i % 5), 0.0, 1.0);
        EXPECT_NEAR(spectral_radius(a), spectral_radius_gelfand(a, 1e-12), 1e-6);
    }
}

TEST(OperatorNorm, Examples) {
    for (auto k : {NormKind::two, NormKind::one, NormKind::inf}) {
        EXPECT_NEAR(operator_norm(Matrix::identity(3), k), 1.0, 1e-14);
    }
    EXPECT_NEAR(operator_norm(Matrix{{3, 0}, {0, 1}}, NormKind::two), 3.0, 1e-14);
    EXPECT_NEAR(operator_norm(Matrix{{0, 1}, {0, 0}}, NormKind::two), 1.0, 1e-14);
    EXPECT_NEAR(operator_norm(Matrix{{1, -2}, {3, 4}}, NormKind::one), 6.0, 1e-14);
    EXPECT_NEAR(operator_norm(Matrix{{1, -2}, {3, 4}}, NormKind::inf), 7.0, 1e-14);
    EXPECT_THROW(operator_norm(Matrix::identity(2), NormKind::max_entry), DomainError);
    EXPECT_EQ(parse_norm_kind("inf"), NormKind::inf);
    EXPECT_THROW(parse_norm_kind("fro"), ValidationError);
}

TEST(OperatorNorm, TwoNormMatchesSingularValues) {
    std::mt19937_64 rng(3);
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto a = random_matrix(rng, n);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.values());
        EXPECT_NEAR(operator_norm(a), svd.singularValues()(0), 1e-12);
    }
}

TEST(Trace, Examples) {
    EXPECT_EQ(trace(Matrix::identity(3)), 3.0);
    EXPECT_EQ(trace(Matrix{{1, 1}, {0, 1}}), 2.0);
    EXPECT_EQ(trace(Matrix{{0, 1}, {1, 0}}), 0.0);
}

TEST(Kron, Examples) {
    EXPECT_EQ(kron(Matrix::identity(2), Matrix::identity(2)), Matrix::identity(4));
    const Matrix a{{1, 2}, {3, 4}};
    EXPECT_EQ(trace(kron(a, a)), 25.0);
    const auto k = kron(a, Matrix{{0, 1}, {1, 0}});
    EXPECT_EQ(k(0, 1), 1.0);
    EXPECT_EQ(k(2, 3), 4.0);
    EXPECT_EQ(k(3, 2), 4.0);
    EXPECT_EQ(k(1, 2), 2.0);
    EXPECT_EQ(k(1, 3), 0.0);
}

TEST(Kron, PowerExamples) {
    const Matrix a{{2, 1}, {1, 2}};
    EXPECT_EQ(kron_power(a, 1), a);
    EXPECT_NEAR(spectral_radius(kron_power(a, 2)), 9.0, 1e-10);
}

TEST(Kron, CapRaisesSizeError) {
    EXPECT_THROW(kron_power(Matrix::identity(2), 13), SizeError);
    EXPECT_NO_THROW(kron_power(Matrix::identity(2), 12));
    EXPECT_THROW(kron(Matrix::identity(3), Matrix::identity(3), 8), SizeError);
    EXPECT_THROW(kron_power(Matrix::identity(2), 0), DomainError);
}

TEST(KronProperty, MixedProduct) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const auto a = random_matrix(rng, 2), b = random_matrix(rng, 2), c = random_matrix(rng, 2),
                   d = random_matrix(rng, 2);
        const auto lhs = kron(a, b) * kron(c, d);
        const auto rhs = kron(a * c, b * d);
        EXPECT_LE((lhs.values() - rhs.values()).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(KronProperty, TracePower) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        const auto a = random_matrix(rng, 2);
        for (std::size_t k : {2U, 3U}) {
            const double tr = trace(a);
            EXPECT_LE(std::abs(trace(kron_power(a, k)) - std::pow(tr, static_cast<double>(k))),
                      1e-10 * std::max(1.0, std::pow(std::abs(tr), static_cast<double>(k))));
        }
    }
    EXPECT_EQ(trace(kron_power(Matrix{{1, 2}, {3, -1}}, 3)), 0.0);
}

TEST(KronProperty, SpectralRadiusMultiplicative) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto a = random_matrix(rng, 2 + static_cast<std::size_t>(i % 2));
        for (std::size_t k : {2U, 3U}) {
            const double r = spectral_radius(a);
            EXPECT_NEAR(spectral_radius(kron_power(a, k)), std::pow(r, static_cast<double>(k)),
                        1e-8 * std::max(1.0, std::pow(r, static_cast<double>(k))));
        }
    }
}

TEST(NormProperty, DominatesSpectralRadiusAndGelfand) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_matrix(rng, 2 + static_cast<std::size_t>(i % 4));
        const double r = spectral_radius(a);
        for (auto k : {NormKind::two, NormKind::one, NormKind::inf}) EXPECT_GE(operator_norm(a, k), r - 1e-10);
        for (std::size_t t : {1U, 2U, 4U, 8U}) {
            EXPECT_LE(r, std::pow(operator_norm(mat_power(a, t)), 1.0 / static_cast<double>(t)) + 1e-10);
        }
    }
}

TEST(Eigenvalues, ComplexPair) {
    const auto ev = eigenvalues(Matrix{{0, -1}, {1, 0}});
    ASSERT_EQ(ev.size(), 2U);
    for (const auto& z : ev) EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
}

TEST(MatPower, ZeroAndPositive) {
    const Matrix a{{1, 1}, {0, 1}};
    EXPECT_EQ(mat_power(a, 0), Matrix::identity(2));
    EXPECT_EQ(mat_power(a, 5), (Matrix{{1, 5}, {0, 1}}));
}
