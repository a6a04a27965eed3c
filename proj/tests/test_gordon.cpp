#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "quasispec/gordon.hpp"

using namespace quasispec;

TEST(FourNorm, LemmaHoldsForRandomUnimodularMatrices) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 20000; ++i) {
        const double s = std::exp(u(rng));
        const Mat2 a = rotation(u(rng)) * Mat2{s, 0.0, 0.0, 1.0 / s} * rotation(u(rng));
        const double phi = u(rng);
        EXPECT_GE(cfks_max_norm(a, {std::cos(phi), std::sin(phi)}), 0.5);
    }
}

TEST(FourNorm, RotationIsTight) {
    EXPECT_NEAR(cfks_max_norm(rotation(1.0), {1.0, 0.0}), 1.0, 1e-15);
}

TEST(FourNorm, Validation) {
    EXPECT_THROW(cfks_max_norm({2.0, 0.0, 0.0, 2.0}, {1.0, 0.0}), DomainError);
    EXPECT_THROW(cfks_max_norm(Mat2::identity(), {1.0, 1.0}), DomainError);
}

TEST(PotentialError, StaysBelowLinearBound) {
    const ModelParams p(2.0, {1.0, 0.5}, Frequency::golden());
    for (auto [pp, qq] : {std::pair{8, 13}, std::pair{21, 34}, std::pair{55, 89}}) {
        const auto r = approximant_potential_error(p, pp, qq);
        EXPECT_TRUE(r.is_convergent);
        EXPECT_LE(r.measured, r.bound);
        EXPECT_GT(r.measured, 0.1 * r.bound);
    }
    EXPECT_FALSE(approximant_potential_error(p, 3, 7).is_convergent);
}

TEST(Gordon, ExactApproximantHasZeroDiscrepancy) {
    const ModelParams p(1.0, {3.0, 2.0}, Frequency::rational(3, 7));
    const auto r = gordon_diagnostics(p, 0.0, 0.3, 2);  // 3/7 = [0; 2, 3]
    EXPECT_TRUE(r.exact_approximant);
    EXPECT_EQ(r.discrepancy, 0.0);
    EXPECT_EQ(r.witness, r.four_norm);
    EXPECT_GE(r.four_norm, 0.5);
    EXPECT_TRUE(r.hypothesis_met);
}

TEST(Gordon, DiscrepancyBelowTelescopingBound) {
    const ModelParams p(3.0, {1.0, 1.0}, Frequency::golden());
    for (std::size_t level = 3; level <= 6; ++level) {
        const auto r = gordon_diagnostics(p, 0.2, 0.1, level);
        EXPECT_EQ(r.block_period, 2 * r.q);
        EXPECT_LE(std::log(r.discrepancy), r.log_discrepancy_bound);
        EXPECT_GE(r.four_norm, 0.5);
        EXPECT_GE(r.worst_direction_witness, 0.5 - r.discrepancy);
    }
}

TEST(Gordon, RejectsOversizedBlocks) {
    const ModelParams p(3.0, {1.0}, Frequency::golden());
    EXPECT_THROW(gordon_diagnostics(p, 0.0, 0.0, 35), DomainError);
    EXPECT_THROW(gordon_diagnostics(p, 0.0, 0.0, 0), DomainError);
}
