#pragma once

// The small-divisor cohomological equation h(phi + step) - h(phi) = r(phi) and
// the triangular conjugation it induces when k = 2 and T(0) = 0.
//
// The T = {1, -1} versus almost Mathieu equivalence check lives here as well.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "quasispec/errors.hpp"
#include "quasispec/model.hpp"
#include "quasispec/numerics.hpp"

namespace quasispec {

struct CohomologySolution {
    TrigPolynomial h;
    double step{0.0};
    double smallest_divisor{std::numeric_limits<double>::infinity()};
    double residual_sup{0.0};
};

inline constexpr double kDefaultDivisorFloor = 1e-8;
inline constexpr std::size_t kMaxCohomologyDegree = 10'000;

/// sup over a uniform grid of |h(phi + step) - h(phi) - rhs(phi)|.
inline double cohomological_residual(const TrigPolynomial& h, const TrigPolynomial& rhs, double step,
                                     std::size_t grid) {
    double sup = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
        const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(grid);
        sup = std::max(sup, std::abs(h(phi + step) - h(phi) - rhs(phi)));
    }
    return sup;
}

/// Fourier mode division h^(n) = r^(n) / (e^{i n step} - 1), h^(0) = 0.
inline CohomologySolution solve_cohomological(const TrigPolynomial& rhs, double step,
                                              double divisor_floor = kDefaultDivisorFloor) {
    if (rhs.degree() > kMaxCohomologyDegree) throw DomainError("solve_cohomological: degree above 10^4");
    if (!rhs.is_real_valued()) throw DomainError("solve_cohomological: right-hand side is not real-valued");
    const double scale = std::max(1.0, rhs.max_abs_coeff());
    if (std::abs(rhs.mean()) > 1e-14 * scale)
        throw DomainError("solve_cohomological: right-hand side has nonzero mean, no solution exists");

    CohomologySolution sol{TrigPolynomial(rhs.degree()), step};
    const auto N = static_cast<std::int64_t>(rhs.degree());
    for (std::int64_t n = 1; n <= N; ++n) {
        if (rhs.coeff(n) == std::complex<double>{} && rhs.coeff(-n) == std::complex<double>{}) continue;
        const std::complex<double> d = std::polar(1.0, static_cast<double>(n) * step) - 1.0;
        const double mag = std::abs(d);
        if (mag < divisor_floor) throw SmallDivisorError(n, mag, divisor_floor);
        sol.smallest_divisor = std::min(sol.smallest_divisor, mag);
        sol.h.coeff(n) = rhs.coeff(n) / d;
        sol.h.coeff(-n) = std::conj(sol.h.coeff(n));
    }
    sol.residual_sup = cohomological_residual(sol.h, rhs, step, std::max<std::size_t>(4096, 4 * rhs.degree()));
    return sol;
}

/// The right-hand side lambda T(1) cos(phi) for k = 2, T(0) = 0.
inline TrigPolynomial conjugation_rhs(const ModelParams& params) {
    return TrigPolynomial::cosine(params.lambda() * params.coupling()[1]);
}

/// h solving h(phi + 2 omega) - h(phi) = lambda T(1) cos(phi).
inline CohomologySolution solve_conjugation(const ModelParams& params, double divisor_floor = kDefaultDivisorFloor) {
    if (params.period() != 2) throw DomainError("solve_conjugation: requires k = 2");
    return solve_cohomological(conjugation_rhs(params), 2.0 * params.omega(), divisor_floor);
}

/// lambda T(1) sin(phi - omega) / (2 sin omega), the closed form of the solution above.
inline double closed_form_solution(double amplitude, double omega, double phi) {
    return amplitude * std::sin(phi - omega) / (2.0 * std::sin(omega));
}

namespace detail {

inline void require_zero_first_coupling(const ModelParams& params) {
    if (params.period() != 2) throw DomainError("conjugated_cocycle: requires k = 2");
    if (params.coupling()[0] != 0.0) throw DomainError("conjugated_cocycle: requires T(0) = 0");
}

inline Mat2 unipotent(double x) { return {1.0, x, 0.0, 1.0}; }

} // namespace detail

/// [[1, -h(theta + 3 omega)], [0, 1]] . B'(theta) . [[1, h(theta + omega)], [0, 1]],
/// with B' = D B D, D = diag(1, -1), the reduced cocycle in the (u_n, -u_{n-1}) basis.
inline Mat2 conjugated_cocycle(const ModelParams& params, double energy, double theta, const TrigPolynomial& h) {
    detail::require_zero_first_coupling(params);
    const Mat2 D{1.0, 0.0, 0.0, -1.0};
    const Mat2 b = D * reduced_cocycle(params, energy, theta) * D;
    const double w = params.omega();
    return detail::unipotent(-h(theta + 3.0 * w)) * b * detail::unipotent(h(theta + w));
}

/// sup over a uniform phase grid of the Schmidt norm of conjugated_cocycle + I.
inline double residual_sup(const ModelParams& params, double energy, const TrigPolynomial& h, std::size_t grid) {
    detail::require_zero_first_coupling(params);
    if (grid < 1) throw DomainError("residual_sup: grid must be >= 1");
    double sup = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
        const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(grid);
        sup = std::max(sup, schmidt_norm(conjugated_cocycle(params, energy, theta, h) + Mat2::identity()));
    }
    return sup;
}

struct SlopeFit {
    double slope{0.0};
    double intercept{0.0};
};

/// Least-squares line through (log x, log y).
inline SlopeFit log_log_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("log_log_slope: need at least two paired points");
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log_log_slope: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0) throw DomainError("log_log_slope: x values are all equal");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

/// Relative entrywise difference between the m-step cocycles of the T = {1, -1}
/// model at alpha and the almost Mathieu operator at alpha + 1/2, both from
/// (theta, 0). Both products are brought to a common scale first.
inline double amo_equivalence_check(double lambda, const Frequency& frequency, double energy, double theta,
                                    std::int64_t m) {
    if (m < 1 || m > 1'000'000) throw DomainError("amo_equivalence_check: m must lie in [1, 10^6]");
    const ModelParams alternating(lambda, {1.0, -1.0}, frequency);
    const ModelParams amo = ModelParams::almost_mathieu(lambda, frequency.shifted_by_half());
    const PhasePoint start{wrap_phase(theta), 0};
    const RescaledMat a = cocycle_product(alternating, energy, start, m);
    const RescaledMat b = cocycle_product(amo, energy, start, m);
    const RescaledMat d = rescaled_difference(a, b);
    const Mat2& x = d.matrix;
    return std::max({std::abs(x.a11), std::abs(x.a12), std::abs(x.a21), std::abs(x.a22)});
}

} // namespace quasispec
