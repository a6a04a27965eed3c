#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "quasispec/cohomology.hpp"

using namespace quasispec;

TEST(Cohomology, SolutionMatchesClosedForm) {
    const ModelParams p(1.0, {0.0, 2.5}, Frequency::golden());
    const auto sol = solve_conjugation(p);
    const double w = p.omega();
    for (double phi : {0.0, 0.4, 2.0, 5.5})
        EXPECT_NEAR(sol.h(phi), closed_form_solution(2.5, w, phi), 1e-13);
    EXPECT_LT(sol.residual_sup, 1e-13);
}

TEST(Cohomology, HigherModesSolvedIndependently) {
    TrigPolynomial rhs(3);
    rhs.coeff(2) = {0.3, -0.1};
    rhs.coeff(-2) = std::conj(rhs.coeff(2));
    rhs.coeff(3) = {0.0, 0.5};
    rhs.coeff(-3) = std::conj(rhs.coeff(3));
    const auto sol = solve_cohomological(rhs, 1.234);
    EXPECT_LT(cohomological_residual(sol.h, rhs, 1.234, 512), 1e-13);
}

TEST(Cohomology, NonzeroMeanHasNoSolution) {
    TrigPolynomial rhs = TrigPolynomial::cosine(1.0);
    rhs.coeff(0) = 0.5;
    EXPECT_THROW(solve_cohomological(rhs, 1.0), DomainError);
}

TEST(Cohomology, SmallDivisorIsReported) {
    const TrigPolynomial rhs = TrigPolynomial::cosine(1.0);
    try {
        solve_cohomological(rhs, kTwoPi + 1e-10, 1e-8);
        FAIL() << "expected a small-divisor error";
    } catch (const SmallDivisorError& e) {
        EXPECT_EQ(e.mode(), 1);
        EXPECT_LT(e.divisor(), 1e-8);
    }
}

TEST(Cohomology, ConjugatedCocycleIsMinusIdentityAtZeroEnergy) {
    const ModelParams p(1.5, {0.0, 1.0}, Frequency::sqrt2());
    const auto sol = solve_conjugation(p);
    EXPECT_LT(residual_sup(p, 0.0, sol.h, 512), 1e-12);
    EXPECT_GT(residual_sup(p, 0.05, sol.h, 512), 1e-3);
}

TEST(Cohomology, ResidualGrowsLinearlyInEnergy) {
    const ModelParams p(1.0, {0.0, 1.0}, Frequency::golden());
    const auto sol = solve_conjugation(p);
    std::vector<double> e{1e-3, 1e-2, 1e-1}, r;
    for (double x : e) r.push_back(residual_sup(p, x, sol.h, 256));
    EXPECT_NEAR(log_log_slope(e, r).slope, 1.0, 0.1);
}

TEST(Cohomology, RequiresTwoPeriodicCouplingWithZeroFirstEntry) {
    EXPECT_THROW(solve_conjugation(ModelParams(1.0, {1.0}, Frequency::golden())), DomainError);
    EXPECT_THROW(residual_sup(ModelParams(1.0, {1.0, 1.0}, Frequency::golden()), 0.0, TrigPolynomial(1), 8),
                 DomainError);
}

TEST(Equivalence, AlternatingCouplingIsAlmostMathieuShiftedByHalf) {
    EXPECT_LT(amo_equivalence_check(3.0, Frequency::golden(), 0.4, 1.0, 10000), 1e-8);
    EXPECT_LT(amo_equivalence_check(1.0, Frequency::rational(3, 8), -1.2, 0.2, 500), 1e-12);
    EXPECT_THROW(amo_equivalence_check(1.0, Frequency::golden(), 0.0, 0.0, 0), DomainError);
}

TEST(SlopeFit, RecoversPowerLaw) {
    std::vector<double> x{1.0, 2.0, 4.0, 8.0}, y;
    for (double v : x) y.push_back(3.0 * v * v);
    const auto f = log_log_slope(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
}
