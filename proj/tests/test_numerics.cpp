#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "quasispec/numerics.hpp"
#include "quasispec/parallel.hpp"

using namespace quasispec;

TEST(Mat2, ComposeAndDeterminant) {
    const Mat2 a{2.0, 1.0, 1.0, 1.0};
    const Mat2 b{1.0, -1.0, 0.0, 1.0};
    EXPECT_EQ(compose(a, b), (Mat2{2.0, -1.0, 1.0, 0.0}));
    EXPECT_DOUBLE_EQ(det(a * b), det(a) * det(b));
    EXPECT_EQ(unimodular_inverse(a) * a, Mat2::identity());
}

TEST(Mat2, NormsOfDiagonalMatrix) {
    const Mat2 d{3.0, 0.0, 0.0, 1.0 / 3.0};
    EXPECT_NEAR(operator_norm(d), 3.0, 1e-14);
    EXPECT_NEAR(schmidt_norm(d), std::sqrt(9.0 + 1.0 / 9.0), 1e-14);
}

TEST(Mat2, SchmidtNormSurvivesHugeEntries) {
    const Mat2 big{1e200, 0.0, 0.0, 1e-200};
    EXPECT_NEAR(schmidt_norm(big) / 1e200, 1.0, 1e-15);
}

TEST(Mat2, OperatorNormAtLeastOneForUnimodular) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double s = std::exp(u(rng));
        const Mat2 m = rotation(u(rng)) * Mat2{s, 0.0, 0.0, 1.0 / s} * rotation(u(rng));
        EXPECT_GE(operator_norm(m), 1.0 - 1e-12);
        EXPECT_LE(operator_norm(m), schmidt_norm(m) * (1.0 + 1e-12));
    }
}

TEST(RescaledMat, CanonicalFormKeepsNormInRange) {
    RescaledMat p;
    const Mat2 step{3.0, -1.0, 1.0, 0.0};
    for (int i = 0; i < 500; ++i) {
        p.matrix = step * p.matrix;
        p.canonicalize();
        const double n = schmidt_norm(p.matrix);
        EXPECT_GE(n, 1.0 - 1e-12);
        EXPECT_LE(n, std::numbers::e + 1e-12);
    }
    // Growth rate of [[3,-1],[1,0]] is the larger root of x^2 - 3x + 1.
    EXPECT_NEAR(p.log_norm() / 500.0, std::log((3.0 + std::sqrt(5.0)) / 2.0), 1e-2);
}

TEST(RescaledMat, DifferenceAtCommonScale) {
    RescaledMat a{Mat2::identity(), 2.0};
    RescaledMat b{Mat2::identity(), 2.0};
    EXPECT_EQ(rescaled_difference(a, b).matrix, (Mat2{0.0, 0.0, 0.0, 0.0}));
    b.log_scale = 0.0;
    const auto d = rescaled_difference(a, b);
    EXPECT_DOUBLE_EQ(d.log_scale, 2.0);
    EXPECT_NEAR(d.matrix.a11, 1.0 - std::exp(-2.0), 1e-15);
}

TEST(IntervalUnion, MergesAndMeasures) {
    const IntervalUnion u({{3.0, 4.0}, {0.0, 1.0}, {0.5, 2.0}});
    ASSERT_EQ(u.size(), 2u);
    EXPECT_DOUBLE_EQ(u.measure(), 3.0);
    EXPECT_TRUE(u.contains(1.5));
    EXPECT_FALSE(u.contains(2.5));
    EXPECT_DOUBLE_EQ(u.distance(2.5), 0.5);
}

TEST(IntervalUnion, HausdorffDistance) {
    const IntervalUnion a({{0.0, 1.0}});
    const IntervalUnion b({{0.0, 1.0}, {3.0, 3.5}});
    EXPECT_DOUBLE_EQ(hausdorff_distance(a, b), 2.5);
    EXPECT_DOUBLE_EQ(hausdorff_distance(a, a), 0.0);
    EXPECT_DOUBLE_EQ(hausdorff_distance(IntervalUnion::from_points({0.25, 0.75}), a), 0.25);
}

TEST(IntervalUnion, RejectsInvertedInterval) { EXPECT_THROW(IntervalUnion({{1.0, 0.0}}), DomainError); }

TEST(TrigPolynomial, HornerMatchesDirectSum) {
    TrigPolynomial p(6);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int n = 0; n <= 6; ++n) {
        p.coeff(n) = {g(rng), n == 0 ? 0.0 : g(rng)};
        p.coeff(-n) = std::conj(p.coeff(n));
    }
    EXPECT_TRUE(p.is_real_valued());
    for (double phi : {0.0, 0.3, 1.7, 4.0, 6.2})
        EXPECT_NEAR(std::abs(p.evaluate(phi) - p.evaluate_direct(phi)), 0.0, 1e-13);
    const auto s = p.shifted(0.4);
    EXPECT_NEAR(s(1.0), p(1.4), 1e-13);
}

TEST(TrigPolynomial, CosineAndDegreeGuard) {
    const auto c = TrigPolynomial::cosine(2.0, 0.5);
    EXPECT_NEAR(c(0.7), 2.0 * std::cos(1.2), 1e-15);
    EXPECT_THROW(c.coeff(2), DomainError);
}

TEST(Parallel, ForCoversEveryIndexOnce) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Parallel, ExceptionPropagates) {
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                     if (i == 7) throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
}

TEST(Parallel, PairwiseSumIsExactOnIntegers) {
    std::vector<double> xs(10001);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
    EXPECT_EQ(pairwise_sum(xs), 10000.0 * 10001.0 / 2.0);
}
