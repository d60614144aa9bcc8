#include <array>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "jsc/enumerate.hpp"
#include "jsc/kron_lift.hpp"

using namespace jsc;

namespace {

struct Fixture {
    MatrixSet sigma;
    std::array<double, 4> upper;
    std::array<double, 4> lower;
};

// Values from an independent numpy run (Kronecker sums and eigvals).
std::vector<Fixture> fixtures() {
    return {
        {MatrixSet{Matrix{{2, 1}, {1, 2}}, Matrix{{1, 2}, {2, 1}}},
         {6.0, 4.242640687119285, 3.779763149684618, 3.5676213450081633},
         {3.0, 3.0, 3.0, 3.0}},
        {MatrixSet{Matrix{{1, 1}, {0, 1}}, Matrix{{1, 0}, {1, 1}}},
         {3.0, 2.135779205069857, 1.912931182772389, 1.8134574202660312},
         {1.5, 1.5102239590221098, 1.5182944859378311, 1.5249298439169545}},
        {MatrixSet{Matrix{{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}, Matrix{{1, 0, 1}, {1, 0, 0}, {0, 1, 0}}},
         {2.6510934089371765, 1.894095038443763, 1.7018879410990928, 1.6178754548503438},
         {1.3255467044685882, 1.3393274458953792, 1.3507893540163465, 1.360465670310627}},
    };
}

} // namespace

TEST(KronLift, SingletonIsExact) {
    const Matrix a{{2, 1}, {1, 3}};
    const auto r = kron_lift_bounds(MatrixSet{a}, 4, PolyhedralCone::orthant(2));
    const double rho = spectral_radius(a);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(r.upper_k[i], rho, 1e-10);
        EXPECT_NEAR(r.lower_k[i], rho, 1e-10);
    }
    EXPECT_TRUE(r.certified);
    EXPECT_TRUE(r.warnings.empty());
}

TEST(KronLift, OddEvenPairFirstLevel) {
    const MatrixSet s{Matrix{{0, 1}, {0, 0}}, Matrix{{0, 0}, {1, 0}}};
    const auto r = kron_lift_bounds(s, 1, PolyhedralCone::orthant(2));
    EXPECT_NEAR(r.rho_sum[0], 1.0, 1e-12);
    EXPECT_NEAR(r.upper_k[0], 1.0, 1e-12);
    EXPECT_NEAR(r.lower_k[0], 0.5, 1e-12);
}

TEST(KronLift, MatchesFrozenOracle) {
    for (const auto& f : fixtures()) {
        const auto r = kron_lift_bounds(f.sigma, 4, PolyhedralCone::orthant(f.sigma.dim()));
        ASSERT_EQ(r.k_values.size(), 4U);
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_NEAR(r.upper_k[i], f.upper[i], 1e-9 * f.upper[i]);
            EXPECT_NEAR(r.lower_k[i], f.lower[i], 1e-9 * f.lower[i]);
            EXPECT_LE(r.lower_k[i], r.upper_k[i]);
        }
    }
}

TEST(KronLift, UpperNonincreasingTowardEnumeration) {
    const auto f = fixtures()[0];
    const auto r = kron_lift_bounds(f.sigma, 3, PolyhedralCone::orthant(2));
    const auto e = enumerate_bounds(f.sigma, 10);
    for (std::size_t i = 1; i < 3; ++i) EXPECT_LE(r.upper_k[i], r.upper_k[i - 1]);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_GE(r.upper_k[i], e.best_interval_jsr.lower - 1e-8);
}

TEST(KronLift, SandwichConsistentWithEnumeration) {
    for (const auto& f : fixtures()) {
        const auto r = kron_lift_bounds(f.sigma, 4, PolyhedralCone::orthant(f.sigma.dim()));
        const auto e = enumerate_bounds(f.sigma, 10);
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_LE(r.lower_k[i], e.best_interval_jsr.upper + 1e-8);
            EXPECT_GE(r.upper_k[i], e.best_interval_jsr.lower - 1e-8);
        }
        EXPECT_LE(r.upper_k[3] - r.lower_k[3], r.upper_k[0] - r.lower_k[0]);
    }
}

TEST(KronLift, CertificationWarnings) {
    const auto f = fixtures()[1];
    const auto none = kron_lift_bounds(f.sigma, 2);
    EXPECT_FALSE(none.certified);
    ASSERT_EQ(none.warnings.size(), 1U);
    const MatrixSet rot{Matrix{{0, -1}, {1, 0}}};
    const auto bad = kron_lift_bounds(rot, 2, PolyhedralCone::orthant(2));
    EXPECT_FALSE(bad.certified);
    EXPECT_EQ(bad.warnings.size(), 1U);
    EXPECT_THROW(kron_lift_bounds(f.sigma, 2, PolyhedralCone::orthant(3)), DomainError);
}

TEST(KronLift, CapAndArguments) {
    const auto f = fixtures()[2];
    EXPECT_THROW(kron_lift_bounds(f.sigma, 8), SizeError);
    EXPECT_THROW(kron_lift_bounds(f.sigma, 3, std::nullopt, 20), SizeError);
    EXPECT_THROW(kron_lift_bounds(f.sigma, 0), DomainError);
}

TEST(KronPowerSum, SumsLiftedMembers) {
    const auto f = fixtures()[1];
    const auto s = kron_power_sum(f.sigma, 2);
    const auto expected = kron_power(f.sigma[0], 2) + kron_power(f.sigma[1], 2);
    EXPECT_EQ(s, expected);
}
