#pragma once

// Gordon-type diagnostics for Liouville frequencies.
//
// Near a good rational approximation p/q the operator is close, on a window of
// a few periods, to the periodic operator with frequency p/q. For the periodic
// block A = B_k^{T_k} the four-norm lemma max(|Av|, |A^2 v|, |A^-1 v|, |A^-2 v|) >= 1/2
// holds for every unit v, and the true blocks inherit it up to the block
// discrepancy D_k.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "quasispec/arithmetic.hpp"
#include "quasispec/errors.hpp"
#include "quasispec/lyapunov.hpp"
#include "quasispec/model.hpp"
#include "quasispec/numerics.hpp"

namespace quasispec {

/// max(|Av|, |A^2 v|, |A^-1 v|, |A^-2 v|) for unimodular A and unit v.
inline double cfks_max_norm(const Mat2& A, const Vec2& v) {
    if (std::abs(det(A) - 1.0) > 1e-9) throw DomainError("cfks_max_norm: matrix is not unimodular (|det - 1| > 1e-9)");
    if (std::abs(v.norm() - 1.0) > 1e-12) throw DomainError("cfks_max_norm: vector is not a unit vector");
    const Mat2 inv = unimodular_inverse(A);
    const Vec2 f1 = A * v;
    const Vec2 f2 = A * f1;
    const Vec2 b1 = inv * v;
    const Vec2 b2 = inv * b1;
    return std::max({f1.norm(), f2.norm(), b1.norm(), b2.norm()});
}

struct PotentialErrorReport {
    double measured{0.0};      ///< sup over |n| <= window, theta grid of |V_approx(n) - V(n)|
    double bound{0.0};         ///< 2 pi C window |alpha - p/q|, C = |lambda| max|T|
    double alpha_error{0.0};   ///< |alpha - p/q|
    std::int64_t window{0};
    bool is_convergent{true};  ///< false when p/q is not a convergent of alpha
};

namespace detail {

/// |alpha - p/q| evaluated exactly from the double alpha.
inline double exact_alpha_error(double alpha, std::int64_t p, std::int64_t q) {
    const BigRational d = BigRational(alpha) - BigRational(BigInt(p), BigInt(q));
    return std::abs(to_double(d));
}

/// |lambda T(n) (cos(2 pi (p/q) n + theta) - cos(omega n + theta))| through
/// cos a - cos b = -2 sin((a + b)/2) sin((a - b)/2), with a - b = 2 pi n (p/q - alpha)
/// formed from the exactly computed difference so no cancellation occurs.
inline double potential_difference(const ModelParams& params, std::int64_t p, std::int64_t q, double delta,
                                   double theta, std::int64_t n) {
    const auto residue = static_cast<std::int64_t>(((static_cast<__int128>(p) * n) % q + q) % q);
    const double a = theta + kTwoPi * static_cast<double>(residue) / static_cast<double>(q);
    const double half_diff = std::numbers::pi * static_cast<double>(n) * delta;
    const double mid = a - half_diff;
    return std::abs(params.lambda() * params.coupling_at(n) * 2.0 * std::sin(mid) * std::sin(half_diff));
}

/// Signed p/q - alpha computed exactly and rounded once.
inline double signed_alpha_gap(double alpha, std::int64_t p, std::int64_t q) {
    return to_double(BigRational(BigInt(p), BigInt(q)) - BigRational(alpha));
}

inline bool is_convergent_of(double alpha, std::int64_t p, std::int64_t q) {
    const auto cf = continued_fraction_expand(alpha, 200);
    for (const auto& c : cf.convergents())
        if (c.p == p && c.q == q) return true;
    return false;
}

} // namespace detail

/// sup over |n| <= window_multiple * q and a theta grid of the approximant potential error.
inline PotentialErrorReport approximant_potential_error(const ModelParams& params, std::int64_t p, std::int64_t q,
                                                        int window_multiple = 4, std::size_t theta_grid = 64) {
    if (q < 1 || p < 0 || window_multiple < 1 || theta_grid < 1)
        throw DomainError("approximant_potential_error: need q >= 1, p >= 0, window_multiple >= 1, theta_grid >= 1");
    PotentialErrorReport r;
    r.window = static_cast<std::int64_t>(window_multiple) * q;
    r.alpha_error = detail::exact_alpha_error(params.alpha(), p, q);
    // Rounded outward by a few ulps so that the floating-point bound is an upper bound.
    r.bound = kTwoPi * params.potential_bound() * static_cast<double>(r.window) * r.alpha_error * (1.0 + 1e-14);
    r.is_convergent = detail::is_convergent_of(params.alpha(), p, q);
    const double delta = detail::signed_alpha_gap(params.alpha(), p, q);
    for (std::size_t j = 0; j < theta_grid; ++j) {
        const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(theta_grid);
        for (std::int64_t n = -r.window; n <= r.window; ++n)
            r.measured = std::max(r.measured, detail::potential_difference(params, p, q, delta, theta, n));
    }
    return r;
}

struct GordonReport {
    std::size_t level{0};
    std::int64_t p{0};
    std::int64_t q{1};
    std::int64_t block_period{0};         ///< T_k = 2q reduced steps
    std::int64_t max_block_steps{0};      ///< 2 k T_k single steps for a = +-2
    double sup_potential_error{0.0};      ///< over the single steps used by the blocks
    double discrepancy{0.0};              ///< D_k, Schmidt norm
    double log_discrepancy_bound{0.0};    ///< log of max_a N_a Mbar^(N_a - 1) sup_error
    double four_norm{0.0};                ///< G_k, approximant blocks
    double margin{0.0};                   ///< G_k - 1/2
    double witness{0.0};                  ///< max_a |B^{a T_k} v|, true blocks
    double worst_direction_witness{0.0};  ///< min over 64 directions of the true-block max
    double log_discrepancy{0.0};          ///< the same quantities in log space, finite past double range
    double log_four_norm{0.0};
    double log_witness{0.0};
    bool hypothesis_met{false};           ///< (|lambda|/2)^k prod|T| > 1, i.e. lambda^2 |T(0) T(1)| > 4 for k = 2
    bool exact_approximant{false};        ///< frequency equals p/q exactly

    double discrepancy_bound() const { return std::exp(log_discrepancy_bound); }
    bool discrepancy_bound_finite() const { return log_discrepancy_bound < std::log(std::numeric_limits<double>::max()); }
};

inline constexpr std::int64_t kMaxGordonBlockSteps = 10'000'000;

namespace detail {

/// Blocks B^{a T_k}(theta, 0) for a = 1, 2, -1, -2 in that order.
inline std::array<RescaledMat, 4> gordon_blocks(const ModelParams& params, double energy, double theta,
                                                std::int64_t single_steps) {
    std::array<RescaledMat, 4> out;
    const PhasePoint start{wrap_phase(theta), 0};
    CocycleWalk fwd(params, energy, start);
    fwd.advance(single_steps);
    out[0] = fwd.product();
    fwd.advance(single_steps);
    out[1] = fwd.product();
    CocycleWalk back(params, energy, start, CocycleWalk::Direction::Backward);
    back.advance(single_steps);
    out[2] = back.product();
    back.advance(single_steps);
    out[3] = back.product();
    return out;
}

inline double max_block_log_norm(const std::array<RescaledMat, 4>& blocks, const Vec2& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& b : blocks) m = std::max(m, b.log_norm_apply(v));
    return m;
}

} // namespace detail

/// Diagnostics at the approximant p_level / q_level taken from `cf`. The true
/// frequency is the one carried by `params`; `cf` only supplies the convergents.
inline GordonReport gordon_diagnostics(const ModelParams& params, double energy, double theta,
                                       const ContinuedFraction& cf, std::size_t level, Vec2 v = {1.0, 0.0}) {
    if (level < 1 || level >= cf.size()) throw DomainError("gordon_diagnostics: convergent level outside the expansion");
    if (std::abs(v.norm() - 1.0) > 1e-12) throw DomainError("gordon_diagnostics: v must be a unit vector");
    const auto& c = cf.convergent(level);
    if (boost::multiprecision::msb(c.q) >= 40) throw DomainError("gordon_diagnostics: denominator beyond desk scale");

    GordonReport r;
    r.level = level;
    r.p = c.p.convert_to<std::int64_t>();
    r.q = c.q.convert_to<std::int64_t>();
    r.block_period = 2 * r.q;
    const auto k = static_cast<std::int64_t>(params.period());
    const std::int64_t n1 = k * r.block_period;
    r.max_block_steps = 2 * n1;
    if (r.max_block_steps > kMaxGordonBlockSteps)
        throw DomainError("gordon_diagnostics: block of " + std::to_string(r.max_block_steps) +
                          " steps exceeds the desk-scale limit of 10^7");
    if (r.p <= 0 || r.p >= r.q) throw DomainError("gordon_diagnostics: convergent p/q must lie in (0, 1)");

    const Frequency approx_freq = Frequency::rational(r.p, r.q);
    const auto& exact = params.frequency().exact();
    r.exact_approximant = exact && exact->p == r.p && exact->q == r.q;
    const ModelParams approx = r.exact_approximant ? params : params.with_frequency(approx_freq);
    r.hypothesis_met = herman_lower_bound(params) > 0.0;

    const double delta = r.exact_approximant ? 0.0 : detail::signed_alpha_gap(params.alpha(), r.p, r.q);
    for (std::int64_t n = -r.max_block_steps; n < r.max_block_steps; ++n)
        r.sup_potential_error = std::max(r.sup_potential_error, detail::potential_difference(params, r.p, r.q, delta, theta, n));

    const auto truth = detail::gordon_blocks(params, energy, theta, n1);
    const auto periodic = r.exact_approximant ? truth : detail::gordon_blocks(approx, energy, theta, n1);

    // D_k and its telescoping bound, both in log space.
    const double M = params.potential_bound();
    const double mbar = std::max({2.0 * (M + 2.0), M, std::abs(energy) + M + 2.0});
    double log_d = -std::numeric_limits<double>::infinity();
    r.log_discrepancy_bound = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i) {
        const RescaledMat diff = rescaled_difference(truth[i], periodic[i]);
        const double nd = schmidt_norm(diff.matrix);
        if (nd > 0.0) log_d = std::max(log_d, diff.log_scale + std::log(nd));
        const double steps = static_cast<double>(i % 2 == 0 ? n1 : 2 * n1);
        if (r.sup_potential_error > 0.0)
            r.log_discrepancy_bound = std::max(r.log_discrepancy_bound, std::log(steps) + (steps - 1.0) * std::log(mbar) +
                                                                            std::log(r.sup_potential_error));
    }
    r.log_discrepancy = log_d;
    r.discrepancy = std::exp(log_d);

    r.log_four_norm = detail::max_block_log_norm(periodic, v);
    r.four_norm = std::exp(r.log_four_norm);
    r.margin = r.four_norm - 0.5;
    r.log_witness = detail::max_block_log_norm(truth, v);
    r.witness = std::exp(r.log_witness);

    double worst = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 64; ++j) {
        const double phi = std::numbers::pi * j / 64.0;
        worst = std::min(worst, detail::max_block_log_norm(truth, {std::cos(phi), std::sin(phi)}));
    }
    r.worst_direction_witness = std::exp(worst);
    return r;
}

/// Diagnostics at convergent `level` of the expansion of params.alpha().
inline GordonReport gordon_diagnostics(const ModelParams& params, double energy, double theta, std::size_t level,
                                       Vec2 v = {1.0, 0.0}) {
    const ContinuedFraction cf = params.frequency().exact()
                                     ? continued_fraction_expand(BigRational(BigInt(params.frequency().exact()->p),
                                                                             BigInt(params.frequency().exact()->q)),
                                                                 200)
                                     : continued_fraction_expand(params.alpha(), 200);
    return gordon_diagnostics(params, energy, theta, cf, level, v);
}

} // namespace quasispec
