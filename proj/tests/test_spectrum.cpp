#include <gtest/gtest.h>

#include <cmath>

#include "quasispec/spectrum.hpp"

using namespace quasispec;

TEST(Spectrum, FreeOperatorIsOneBand) {
    const auto b = rational_bands(ModelParams(0.0, {1.0}, Frequency::rational(55, 89)));
    ASSERT_EQ(b.bands.size(), 1u);
    EXPECT_NEAR(b.bands.min(), -2.0, 1e-9);
    EXPECT_NEAR(b.bands.max(), 2.0, 1e-9);
}

TEST(Spectrum, PeriodCountsBandsAtOnePhase) {
    const ModelParams p(1.5, {1.0}, Frequency::rational(2, 5));
    EXPECT_EQ(spectral_period(p), 5);
    const auto b = bands_at_phase(p, 0.37, 1e-4);
    EXPECT_EQ(b.bands.size(), 5u);
}

TEST(Spectrum, PeriodIsLcmOfDenominatorAndCoupling) {
    EXPECT_EQ(spectral_period(ModelParams(1.0, {1.0, 2.0}, Frequency::rational(1, 3))), 6);
    EXPECT_EQ(spectral_period(ModelParams(1.0, {1.0, 2.0}, Frequency::rational(1, 4))), 4);
    EXPECT_THROW(spectral_period(ModelParams(1.0, {1.0}, Frequency::golden())), DomainError);
}

TEST(Spectrum, DiscriminantIsTraceOfMonodromy) {
    const ModelParams p(2.0, {1.0, -1.0}, Frequency::rational(3, 7));
    const PeriodicPotential pot(p, 0.2);
    Mat2 m = Mat2::identity();
    for (std::int64_t n = 0; n < 14; ++n) m = transfer_matrix(p, 0.5, 0.2, n) * m;
    EXPECT_NEAR(pot.discriminant(0.5), trace(m), 1e-9 * std::max(1.0, std::abs(trace(m))));
}

TEST(Spectrum, SinglePhaseBandsMatchTruncation) {
    const ModelParams p(1.2, {1.0}, Frequency::rational(3, 8));
    const auto b = bands_at_phase(p, 0.5, 1e-4);
    // A long Dirichlet truncation lies in the periodic spectrum apart from a few
    // edge states sitting in the gaps, and never leaves the convex hull.
    const auto eig = truncated_spectrum_oracle(p, 0.5, 8 * 60);
    std::size_t outside = 0;
    for (double e : eig) {
        outside += b.bands.distance(e) > 1e-6;
        EXPECT_GE(e, b.bands.min() - 1e-9);
        EXPECT_LE(e, b.bands.max() + 1e-9);
    }
    EXPECT_LE(outside, 2u * 7u);
}

TEST(Spectrum, SturmCountOfDiagonalMatrix) {
    EXPECT_EQ(sturm_count({0.0, 0.0}, 0.0), 1u);  // eigenvalues -1, 1
    EXPECT_EQ(sturm_count({0.0, 0.0}, 1.5), 2u);
    EXPECT_EQ(sturm_count({0.0, 0.0}, -1.5), 0u);
}

TEST(Spectrum, ExactUnionContainsGridUnion) {
    const ModelParams p(3.0, {1.0}, Frequency::rational(5, 13));
    BandOptions grid;
    grid.theta_samples = 16;
    BandOptions exact = grid;
    exact.phase_union = PhaseUnion::Exact;
    const auto g = rational_bands(p, grid);
    const auto x = rational_bands(p, exact);
    EXPECT_GE(x.bands.measure(), g.bands.measure() - 1e-6);
    EXPECT_LE(g.bands.directed_distance_to(x.bands), 1e-6);
}

TEST(Spectrum, CriticalMeasureNearZeroAndDualityAtLargeCoupling) {
    BandOptions o;
    o.phase_union = PhaseUnion::Exact;
    const auto f = Frequency::rational(34, 55);
    EXPECT_LT(spectrum_measure(rational_bands(ModelParams::almost_mathieu(2.0, f), o)), 0.3);
    const auto p = ModelParams::almost_mathieu(5.0, f);
    EXPECT_NEAR(spectrum_measure(rational_bands(p, o)), spectrum_measure(duality_oracle_bands(p, o)), 0.05);
}

TEST(Spectrum, ExactUnionIndependentOfThreadCount) {
    const ModelParams p(2.5, {1.0}, Frequency::rational(34, 55));
    BandOptions o;
    o.phase_union = PhaseUnion::Exact;
    const auto serial = rational_bands(p, o);
    o.threads = 3;
    const auto threaded = rational_bands(p, o);
    EXPECT_EQ(serial.bands.intervals(), threaded.bands.intervals());
}
