#include <gtest/gtest.h>

#include <cmath>

#include "quasispec/model.hpp"

using namespace quasispec;

TEST(Frequency, ParsesEveryForm) {
    EXPECT_NEAR(parse_frequency("golden").alpha(), (std::sqrt(5.0) - 1.0) / 2.0, 1e-16);
    EXPECT_NEAR(parse_frequency("sqrt2").alpha(), std::sqrt(2.0) - 1.0, 1e-16);
    const auto r = parse_frequency(" 10/16 ");
    ASSERT_TRUE(r.is_rational());
    EXPECT_EQ(r.exact()->p, 5);
    EXPECT_EQ(r.exact()->q, 8);
    EXPECT_NEAR(parse_frequency("cf:[2,2,1]").alpha(), 3.0 / 7.0, 1e-16);
    EXPECT_DOUBLE_EQ(parse_frequency("0.25").alpha(), 0.25);
}

TEST(Frequency, RejectsOutOfRange) {
    EXPECT_THROW(Frequency::from_alpha(0.0), DomainError);
    EXPECT_THROW(Frequency::from_alpha(1.5), DomainError);
    EXPECT_THROW(Frequency::rational(3, 3), DomainError);
    EXPECT_THROW(parse_frequency("banana"), DomainError);
    EXPECT_THROW(parse_frequency("cf:[0,1]"), DomainError);
}

TEST(Frequency, HalfShift) {
    EXPECT_EQ(*Frequency::rational(1, 3).shifted_by_half().exact(), (Rational{5, 6}));
    EXPECT_DOUBLE_EQ(Frequency::from_alpha(0.75).shifted_by_half().alpha(), 0.25);
}

TEST(ModelParams, ValidatesAndExtendsCoupling) {
    EXPECT_THROW(ModelParams(1.0, {}, Frequency::golden()), DomainError);
    EXPECT_THROW(ModelParams(NAN, {1.0}, Frequency::golden()), DomainError);
    const ModelParams p(2.0, {1.0, -3.0}, Frequency::golden());
    EXPECT_EQ(p.coupling_at(-1), -3.0);
    EXPECT_EQ(p.coupling_at(4), 1.0);
    EXPECT_DOUBLE_EQ(p.potential_bound(), 6.0);
    EXPECT_DOUBLE_EQ(p.energy_bound(), 8.0);
}

TEST(Cocycle, TransferMatricesAreUnimodular) {
    const ModelParams p(2.5, {1.0, 0.3, -2.0}, Frequency::sqrt2());
    for (std::int64_t n = -5; n < 5; ++n) {
        const Mat2 a = transfer_matrix(p, 0.7, 1.1, n);
        EXPECT_DOUBLE_EQ(det(a), 1.0);
        EXPECT_EQ(inverse_transfer_matrix(p, 0.7, 1.1, n) * a, Mat2::identity());
    }
}

TEST(Cocycle, ProductMatchesNaiveMultiplication) {
    const ModelParams p(1.3, {1.0, 2.0}, Frequency::golden());
    const double E = 0.4, theta = 0.9;
    Mat2 naive = Mat2::identity();
    for (std::int64_t n = 0; n < 40; ++n) naive = transfer_matrix(p, E, theta, n) * naive;
    const Mat2 walked = cocycle_product(p, E, {theta, 0}, 40).reassemble();
    EXPECT_LT(max_abs_entry_diff(naive, walked) / schmidt_norm(naive), 1e-12);
}

TEST(Cocycle, ForwardThenBackwardIsIdentity) {
    const ModelParams p(0.8, {1.0, -1.0, 2.0}, Frequency::sqrt2());
    const double E = -0.3;
    const PhasePoint x{2.0, 1};
    CocycleWalk fwd(p, E, x);
    fwd.advance(25);
    const PhasePoint y = fwd.position();
    const Mat2 back = inverse_cocycle_product(p, E, y, 25).reassemble();
    const Mat2 round = back * fwd.product().reassemble();
    EXPECT_LT(max_abs_entry_diff(round, Mat2::identity()), 1e-9);
}

TEST(Cocycle, SkewStepAndPositionAgree) {
    const ModelParams p(1.0, {1.0, 2.0, 3.0}, Frequency::golden());
    PhasePoint x{0.5, 2};
    CocycleWalk walk(p, 0.0, x);
    for (int i = 0; i < 10; ++i) x = skew_step(x, p);
    walk.advance(10);
    EXPECT_EQ(walk.position().residue, x.residue);
    EXPECT_NEAR(walk.position().theta, x.theta, 1e-12);
    EXPECT_NEAR(skew_step_back(skew_step(x, p), p).theta, x.theta, 1e-15);
}

TEST(Cocycle, OrbitPhaseDoesNotDrift) {
    const double alpha = (std::sqrt(5.0) - 1.0) / 2.0;
    const std::int64_t n = 123456789;
    const double expected = std::fmod(0.1 + kTwoPi * std::fmod(static_cast<long double>(n) * alpha, 1.0L), kTwoPi);
    EXPECT_NEAR(wrap_phase(orbit_phase(0.1, alpha, n)), expected, 1e-9);
}

TEST(Cocycle, ReducedCocycleIsKSteps) {
    const ModelParams p(1.7, {0.5, -1.5}, Frequency::golden());
    const Mat2 b = reduced_cocycle(p, 0.2, 0.3);
    const Mat2 two = transfer_matrix(p, 0.2, 0.3, 1) * transfer_matrix(p, 0.2, 0.3, 0);
    EXPECT_LT(max_abs_entry_diff(b, two), 1e-14);
}

TEST(Model, TwoFrequencyReductionIdentity) {
    for (std::int64_t n = -50; n <= 50; n += 7) EXPECT_LT(two_dim_reduction_check(2.0, 0.7, 1.9, 0.4, n), 1e-11);
}

TEST(Model, BirkhoffAverageOfCosineVanishes) {
    const ModelParams p(1.0, {1.0}, Frequency::golden());
    const double avg = birkhoff_average(p, [](const PhasePoint& x) { return std::cos(x.theta); }, {0.3, 0}, 100000);
    EXPECT_LT(std::abs(avg), 1e-3);
}
