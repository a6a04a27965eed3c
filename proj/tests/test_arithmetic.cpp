#include <gtest/gtest.h>

#include <cmath>

#include "quasispec/arithmetic.hpp"

using namespace quasispec;

TEST(ContinuedFraction, GoldenMeanHasFibonacciDenominators) {
    const auto cf = continued_fraction_expand((std::sqrt(5.0) - 1.0) / 2.0, 20);
    const long fib[] = {1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144};
    for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(cf.convergent(i).q, fib[i]) << "index " << i;
    for (std::size_t i = 0; i + 1 < 12; ++i) EXPECT_EQ(cf.quotients()[i], 1);
}

TEST(ContinuedFraction, Sqrt2MinusOneHasQuotientsTwo) {
    const auto cf = continued_fraction_expand(std::sqrt(2.0) - 1.0, 12);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(cf.quotients()[i], 2);
    EXPECT_EQ(cf.convergent(3).p, 5);
    EXPECT_EQ(cf.convergent(3).q, 12);
}

TEST(ContinuedFraction, ExactRationalTerminates) {
    const auto cf = continued_fraction_expand(BigRational(BigInt(55), BigInt(89)), 100);
    EXPECT_TRUE(cf.terminated());
    EXPECT_EQ(cf.convergents().back().p, 55);
    EXPECT_EQ(cf.convergents().back().q, 89);
}

TEST(ContinuedFraction, ConvergentsSatisfyClassicalBound) {
    const auto cf = continued_fraction_expand(std::sqrt(2.0) - 1.0, 15);
    for (std::size_t n = 0; n + 1 < cf.size(); ++n) {
        const auto q = approximation_quality(cf, n);
        EXPECT_LE(q.error, q.bound) << "n = " << n;
    }
}

TEST(ContinuedFraction, NeighbouringDeterminantIsPlusMinusOne) {
    const auto cf = continued_fraction_expand(0.7390851332151607, 18);
    for (std::size_t n = 1; n < cf.size(); ++n) {
        const BigInt d = cf.convergent(n).p * cf.convergent(n - 1).q - cf.convergent(n - 1).p * cf.convergent(n).q;
        EXPECT_EQ(abs(d), 1);
    }
}

TEST(ContinuedFraction, RejectsBadQuotients) {
    EXPECT_THROW(ContinuedFraction::from_quotients({}), DomainError);
    EXPECT_THROW(ContinuedFraction::from_quotients({BigInt(0)}), DomainError);
    EXPECT_THROW(ContinuedFraction::from_quotients({BigInt(1)}), DomainError);
}

TEST(Beta, GoldenMeanEstimateIsSmall) {
    const auto cf = continued_fraction_expand((std::sqrt(5.0) - 1.0) / 2.0, 30);
    EXPECT_LE(beta_estimate(cf).value, std::log(2.0) + 1e-12);
}

TEST(Liouville, DenominatorsAndBounds) {
    const auto lc = liouville_construct(3);
    const auto& cf = lc.cf;
    ASSERT_EQ(cf.size(), 5u);
    EXPECT_EQ(cf.convergent(1).q, 2);
    EXPECT_EQ(cf.convergent(2).q, 5);
    EXPECT_EQ(cf.convergent(3).q, 7);
    EXPECT_EQ(cf.convergent(4).q, 313);
    for (std::size_t j = 2; j <= 3; ++j) EXPECT_TRUE(satisfies_liouville_bound(cf, j)) << "level " << j;
}

TEST(Liouville, BudgetIsEnforced) {
    try {
        liouville_construct(6, 100.0);
        FAIL() << "expected a budget error";
    } catch (const BudgetExceededError& e) {
        EXPECT_GE(e.achieved_level(), 1);
    }
}
