#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "jsc/subradius.hpp"

using namespace jsc;

namespace {

const MatrixSet sigma_limit{Matrix{{1, 1}, {0, 1}}, Matrix{{0, 0}, {0, 1}}};

MatrixSet sigma_k(int k) { return MatrixSet{Matrix{{1, 1}, {0, 1}}, Matrix{{0, 0}, {-1.0 / k, 1}}}; }

MatrixSet random_positive(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<Matrix> out;
    for (int m = 0; m < 2; ++m) {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = u(rng);
        out.emplace_back(a);
    }
    return MatrixSet(out);
}

} // namespace

TEST(ConicLower, LimitSetReachesOne) {
    const auto c = conic_subradius_lower(sigma_limit, PolyhedralCone::orthant(2));
    EXPECT_NEAR(c.r, 1.0, 1e-8);
    // witness is a multiple of e2
    EXPECT_NEAR(c.witness(0), 0.0, 1e-9);
    EXPECT_GT(c.witness(1), 0.0);
}

TEST(ConicLower, ScaledIdentity) {
    const auto c = conic_subradius_lower(MatrixSet{2.0 * Matrix::identity(2)}, PolyhedralCone::orthant(2));
    EXPECT_NEAR(c.r, 2.0, 1e-9);
}

TEST(ConicLower, AgreesWithMinProductEstimate) {
    const MatrixSet s{Matrix{{2, 1}, {1, 2}}, Matrix{{3, 1}, {1, 3}}};
    const auto c = conic_subradius_lower(s, PolyhedralCone::orthant(2));
    const auto e = enumerate_bounds(s, 10);
    EXPECT_NEAR(c.r, e.best_interval_sub.upper, 0.02 * e.best_interval_sub.upper);
    EXPECT_NEAR(c.r, 3.0, 1e-8);
}

TEST(ConicLower, NonOrthantCone) {
    const auto wedge = PolyhedralCone::from_generators(std::vector<std::vector<double>>{{1, 2}, {2, 1}});
    const MatrixSet s{Matrix{{2, 1}, {1, 2}}, Matrix{{3, 1}, {1, 3}}};
    EXPECT_NEAR(conic_subradius_lower(s, wedge).r, 3.0, 1e-8);
}

TEST(ConicLower, RejectsNonInvariantSets) {
    EXPECT_THROW(conic_subradius_lower(sigma_k(3), PolyhedralCone::orthant(2)), DomainError);
    EXPECT_THROW(conic_subradius_lower(sigma_limit, PolyhedralCone::orthant(3)), DomainError);
}

TEST(SubradiusBounds, Examples) {
    const auto lim = subradius_bounds(sigma_limit, 8, PolyhedralCone::orthant(2));
    EXPECT_NEAR(lim.interval.lower, 1.0, 1e-8);
    EXPECT_NEAR(lim.interval.upper, 1.0, 1e-12);
    EXPECT_EQ(lim.interval.lower_source, rule::conic);

    const auto two = subradius_bounds(MatrixSet{2.0 * Matrix::identity(2)}, 4, PolyhedralCone::orthant(2));
    EXPECT_NEAR(two.interval.lower, 2.0, 1e-9);
    EXPECT_NEAR(two.interval.upper, 2.0, 1e-12);

    const auto plain = subradius_bounds(sigma_k(3), 8);
    EXPECT_EQ(plain.interval.lower, 0.0);
    EXPECT_EQ(plain.interval.upper, 0.0);
    EXPECT_EQ(plain.interval.lower_source, rule::trivial);
}

TEST(SubradiusBounds, DiscontinuityFamilyHitsZero) {
    for (int k = 1; k <= 3; ++k) {
        const auto r = subradius_bounds(sigma_k(k), static_cast<std::size_t>(2 * (k + 1)));
        EXPECT_EQ(r.interval.upper, 0.0) << "k=" << k;
        EXPECT_EQ(r.interval.lower, 0.0) << "k=" << k;
    }
}

TEST(SubradiusBounds, NonInvariantConeFallsBackWithWarning) {
    const auto r = subradius_bounds(sigma_k(3), 8, PolyhedralCone::orthant(2));
    EXPECT_EQ(r.interval.lower, 0.0);
    EXPECT_EQ(r.interval.upper, 0.0);
    EXPECT_FALSE(r.conic_lower.has_value());
    ASSERT_EQ(r.warnings.size(), 1U);
}

TEST(SubradiusProperty, ConicBelowEverySingleProductCertificate) {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 10; ++i) {
        const auto s = random_positive(rng, 2 + static_cast<std::size_t>(i % 2));
        const auto c = conic_subradius_lower(s, PolyhedralCone::orthant(s.dim()));
        const auto e = enumerate_bounds(s, 6);
        for (const auto& v : e.upper_sub_rho) EXPECT_LE(c.r, *v.value + 1e-9);
    }
}

TEST(SubradiusProperty, EmbeddedPairAchievability) {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 6; ++i) {
        const auto s = random_positive(rng, 2 + static_cast<std::size_t>(i % 2));
        const auto pair = construct_embedded_pair(s);
        const auto c = conic_subradius_lower(s, pair.outer);
        const auto e = enumerate_bounds(s, 8);
        EXPECT_GE(c.r, e.best_interval_sub.upper / *pair.beta_bound - 1e-6);
    }
}

TEST(SubradiusProperty, ScaleEquivariance) {
    std::mt19937_64 rng(47);
    const auto s = random_positive(rng, 3);
    const auto base = subradius_bounds(s, 6, PolyhedralCone::orthant(3));
    const auto scaled = subradius_bounds(s.scaled(2.5), 6, PolyhedralCone::orthant(3));
    EXPECT_NEAR(scaled.interval.lower, 2.5 * base.interval.lower, 1e-8);
    EXPECT_NEAR(scaled.interval.upper, 2.5 * base.interval.upper, 1e-10);
}
