#pragma once

// Spectra of rational-frequency periodic approximants via the discriminant
// (trace of the one-period transfer product), and an independent oracle from
// Dirichlet truncations solved by Sturm-sequence bisection.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "quasispec/errors.hpp"
#include "quasispec/model.hpp"
#include "quasispec/numerics.hpp"
#include "quasispec/parallel.hpp"

namespace quasispec {

/// Total period lcm(q, k) of the potential at rational alpha = p/q.
inline std::int64_t spectral_period(const ModelParams& params) {
    const auto& exact = params.frequency().exact();
    if (!exact) throw DomainError("spectrum: alpha must be an exact rational p/q");
    return std::lcm(exact->q, static_cast<std::int64_t>(params.period()));
}

/// One period of the potential at phase theta. Phases are reduced exactly as
/// theta + 2 pi ((p n) mod q) / q.
class PeriodicPotential {
public:
    PeriodicPotential(const ModelParams& params, double theta)
        : bound_(params.potential_bound()) {
        const std::int64_t P = spectral_period(params);
        const Rational r = *params.frequency().exact();
        values_.resize(static_cast<std::size_t>(P));
        for (std::int64_t n = 0; n < P; ++n) {
            const auto residue = static_cast<std::int64_t>((static_cast<__int128>(r.p) * n) % r.q);
            const double phase = theta + kTwoPi * static_cast<double>(residue) / static_cast<double>(r.q);
            values_[static_cast<std::size_t>(n)] = params.lambda() * params.coupling_at(n) * std::cos(phase);
        }
    }

    std::size_t period() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

    /// One-period transfer product in rescaled form.
    RescaledMat monodromy(double energy) const {
        const std::int64_t interval = rescale_interval(energy, bound_);
        RescaledMat prod;
        Mat2 m = Mat2::identity();
        std::int64_t count = 0;
        for (double v : values_) {
            const double a = energy - v;
            m = {a * m.a11 - m.a21, a * m.a12 - m.a22, m.a11, m.a12};
            if (++count == interval) {
                prod.matrix = m;
                prod.canonicalize();
                m = prod.matrix;
                count = 0;
            }
        }
        prod.matrix = m;
        prod.canonicalize();
        return prod;
    }

    /// Trace of the monodromy; may be +-infinity far outside the spectrum.
    double discriminant(double energy) const {
        const RescaledMat m = monodromy(energy);
        return trace(m.matrix) * std::exp(m.log_scale);
    }

private:
    double bound_;
    std::vector<double> values_;
};

inline double discriminant(const ModelParams& params, double energy, double theta) {
    return PeriodicPotential(params, theta).discriminant(energy);
}

struct BandSet {
    IntervalUnion bands;
    std::int64_t p{0};
    std::int64_t q{1};
    std::int64_t period{1};
    std::size_t theta_samples{0};
    double e_resolution{0.0};
};

/// How the union over phases is formed.
///  Grid:  {E : min over theta_j = 2 pi j / G of |disc| <= 2}.
///  Exact: {E : min over all theta of |disc| <= 2}. The discriminant is a real
///         trigonometric polynomial of degree k in psi = (q / gcd(q, k)) theta,
///         so 2k + 1 phase samples determine it and its range over the circle.
enum class PhaseUnion { Grid, Exact };

struct BandOptions {
    std::size_t theta_samples{64};
    double e_resolution{1e-3};
    int bisection_iterations{60};
    unsigned threads{1};
    PhaseUnion phase_union{PhaseUnion::Grid};
};

namespace detail {

/// excess <= 0 exactly on the band set; sign_value changes sign across every band.
struct BandProbe {
    double excess;
    double sign_value;
};

/// Bisects for the boundary of {f <= 0} between an outside point and an inside point.
template <class F>
double bisect_edge(F&& f, double outside, double inside, int iterations) {
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (outside + inside);
        if (mid == outside || mid == inside) break;
        if (f(mid) <= 0.0) inside = mid;
        else outside = mid;
    }
    return 0.5 * (outside + inside);
}

/// Scans an energy grid for {excess <= 0} and refines each edge by bisection. A
/// sign change of sign_value between two outside grid points marks a band
/// narrower than the grid step.
template <class Probe>
std::vector<Interval> scan_bands(Probe&& probe, double e_min, double step, std::size_t points, int iterations) {
    std::vector<BandProbe> d(points);
    for (std::size_t i = 0; i < points; ++i) d[i] = probe(e_min + step * static_cast<double>(i));
    auto energy = [&](std::size_t i) { return e_min + step * static_cast<double>(i); };
    auto inside = [&](std::size_t i) { return d[i].excess <= 0.0; };
    auto excess = [&](double e) { return probe(e).excess; };
    auto positive = [](double x) { return x > 0.0; };

    std::vector<Interval> out;
    double lo = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        if (inside(i)) {
            if (i == 0 || !inside(i - 1)) lo = (i == 0) ? energy(0) : bisect_edge(excess, energy(i - 1), energy(i), iterations);
            if (i + 1 == points) out.push_back({lo, energy(i)});
            else if (!inside(i + 1)) out.push_back({lo, bisect_edge(excess, energy(i + 1), energy(i), iterations)});
        } else if (i + 1 < points && !inside(i + 1) && positive(d[i].sign_value) != positive(d[i + 1].sign_value)) {
            double a = energy(i), b = energy(i + 1);
            const bool sa = positive(d[i].sign_value);
            double c = 0.5 * (a + b);
            BandProbe pc = probe(c);
            for (int it = 0; it < iterations && pc.excess > 0.0; ++it) {
                if (positive(pc.sign_value) == sa) a = c;
                else b = c;
                c = 0.5 * (a + b);
                pc = probe(c);
            }
            if (pc.excess <= 0.0)
                out.push_back({bisect_edge(excess, energy(i), c, iterations), bisect_edge(excess, energy(i + 1), c, iterations)});
        }
    }
    return out;
}

inline BandProbe single_phase_probe(const PeriodicPotential& pot, double energy) {
    const double d = pot.discriminant(energy);
    return {std::abs(d) - 2.0, d};
}

/// Range of the discriminant over all phases, reconstructed from 2k + 1 samples.
class PhaseRangeProbe {
public:
    explicit PhaseRangeProbe(const ModelParams& params) {
        const Rational r = *params.frequency().exact();
        const auto k = static_cast<std::int64_t>(params.period());
        degree_ = static_cast<std::size_t>(k);
        const std::int64_t Q = r.q / std::gcd(r.q, k);
        const std::size_t samples = 2 * degree_ + 1;
        for (std::size_t s = 0; s < samples; ++s) {
            const double psi = kTwoPi * static_cast<double>(s) / static_cast<double>(samples);
            pots_.emplace_back(params, psi / static_cast<double>(Q));
        }
        const std::size_t fine = 256 * degree_;
        for (std::size_t i = 0; i < fine; ++i)
            grid_.push_back(std::polar(1.0, kTwoPi * static_cast<double>(i) / static_cast<double>(fine)));
    }

    BandProbe operator()(double energy) const {
        const std::size_t S = pots_.size();
        std::vector<RescaledMat> mono(S);
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < S; ++s) {
            mono[s] = pots_[s].monodromy(energy);
            top = std::max(top, mono[s].log_scale);
        }
        // Samples in units of exp(top); the threshold 2 becomes 2 exp(-top).
        std::vector<double> v(S);
        for (std::size_t s = 0; s < S; ++s) v[s] = trace(mono[s].matrix) * std::exp(mono[s].log_scale - top);
        const double t = 2.0 * std::exp(-top);

        std::vector<std::complex<double>> c(degree_ + 1);
        for (std::size_t j = 0; j <= degree_; ++j) {
            std::complex<double> acc{};
            for (std::size_t s = 0; s < S; ++s)
                acc += v[s] * std::polar(1.0, -kTwoPi * static_cast<double>(j * s) / static_cast<double>(S));
            c[j] = acc / static_cast<double>(S);
        }
        auto eval = [&](std::complex<double> z) {
            std::complex<double> acc = c[degree_];
            for (std::size_t j = degree_; j-- > 1;) acc = acc * z + c[j];
            return c[0].real() + 2.0 * (acc * z).real();
        };
        double lo, hi;
        if (degree_ == 1) {
            lo = c[0].real() - 2.0 * std::abs(c[1]);
            hi = c[0].real() + 2.0 * std::abs(c[1]);
        } else {
            lo = std::numeric_limits<double>::infinity();
            hi = -lo;
            std::size_t ilo = 0, ihi = 0;
            for (std::size_t i = 0; i < grid_.size(); ++i) {
                const double x = eval(grid_[i]);
                if (x < lo) lo = x, ilo = i;
                if (x > hi) hi = x, ihi = i;
            }
            const double h = kTwoPi / static_cast<double>(grid_.size());
            auto at = [&](double psi) { return eval(std::polar(1.0, psi)); };
            lo = std::min(lo, golden_extremum([&](double p) { return at(p); }, h * static_cast<double>(ilo), h));
            hi = std::max(hi, -golden_extremum([&](double p) { return -at(p); }, h * static_cast<double>(ihi), h));
        }
        return {std::max(lo - t, -t - hi), c[0].real()};
    }

private:
    template <class F>
    static double golden_extremum(F&& f, double centre, double half_width) {
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = centre - half_width, b = centre + half_width;
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int i = 0; i < 60; ++i) {
            if (f1 < f2) {
                b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = f(x1);
            } else {
                a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = f(x2);
            }
        }
        return std::min(f1, f2);
    }

    std::size_t degree_{1};
    std::vector<PeriodicPotential> pots_;
    std::vector<std::complex<double>> grid_;
};

} // namespace detail

/// Band set of the rational-frequency operator, united over phases as selected
/// by options.phase_union.
inline BandSet rational_bands(const ModelParams& params, const BandOptions& options = {}) {
    if (options.theta_samples < 1) throw DomainError("rational_bands: theta_samples must be >= 1");
    if (!(options.e_resolution > 0.0)) throw DomainError("rational_bands: e_resolution must be > 0");
    const std::int64_t P = spectral_period(params);
    const double half_width = params.energy_bound() + options.e_resolution;
    const auto points = static_cast<std::size_t>(std::ceil(2.0 * half_width / options.e_resolution)) + 1;
    const Rational r = *params.frequency().exact();

    std::vector<Interval> all;
    if (options.phase_union == PhaseUnion::Exact) {
        // A fixed slab decomposition, independent of the thread count, keeps the
        // result bitwise identical however many workers share the slabs.
        constexpr std::size_t kSlabs = 64;
        const std::size_t slabs = std::max<std::size_t>(1, std::min<std::size_t>(kSlabs, points / 2));
        std::vector<std::vector<Interval>> parts(slabs);
        const detail::PhaseRangeProbe probe(params);
        parallel_for(slabs, options.threads, [&](std::size_t w) {
            const std::size_t begin = points * w / slabs;
            const std::size_t end = std::min(points, points * (w + 1) / slabs + 1);
            parts[w] = detail::scan_bands(probe, -half_width + options.e_resolution * static_cast<double>(begin),
                                          options.e_resolution, end - begin, options.bisection_iterations);
        });
        for (auto& v : parts) all.insert(all.end(), v.begin(), v.end());
    } else {
        std::vector<std::vector<Interval>> per_phase(options.theta_samples);
        parallel_for(options.theta_samples, options.threads, [&](std::size_t j) {
            const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(options.theta_samples);
            const PeriodicPotential pot(params, theta);
            per_phase[j] = detail::scan_bands([&](double e) { return detail::single_phase_probe(pot, e); }, -half_width,
                                              options.e_resolution, points, options.bisection_iterations);
        });
        for (auto& v : per_phase) all.insert(all.end(), v.begin(), v.end());
    }
    if (all.empty()) throw Error("rational_bands: empty band set (spectrum cannot be empty)");
    return {IntervalUnion(std::move(all)), r.p, r.q, P, options.theta_samples, options.e_resolution};
}

/// Bands of the periodic operator at a single phase theta.
inline BandSet bands_at_phase(const ModelParams& params, double theta, double e_resolution = 1e-3,
                              int bisection_iterations = 60) {
    if (!(e_resolution > 0.0)) throw DomainError("bands_at_phase: e_resolution must be > 0");
    const std::int64_t P = spectral_period(params);
    const double half_width = params.energy_bound() + e_resolution;
    const auto points = static_cast<std::size_t>(std::ceil(2.0 * half_width / e_resolution)) + 1;
    const PeriodicPotential pot(params, theta);
    auto found = detail::scan_bands([&](double e) { return detail::single_phase_probe(pot, e); }, -half_width,
                                    e_resolution, points, bisection_iterations);
    if (found.empty()) throw Error("bands_at_phase: empty band set");
    const Rational r = *params.frequency().exact();
    return {IntervalUnion(std::move(found)), r.p, r.q, P, 1, e_resolution};
}

inline double spectrum_measure(const BandSet& b) { return b.bands.measure(); }

/// Bands of the k = 1 operator at coupling c = lambda T(0) computed at the dual
/// coupling 4/c and scaled by |c|/2.
inline BandSet duality_oracle_bands(const ModelParams& params, const BandOptions& options = {}) {
    if (params.period() != 1) throw DomainError("duality_oracle_bands: requires k = 1");
    const double c = std::abs(params.lambda() * params.coupling()[0]);
    if (c == 0.0) throw DomainError("duality_oracle_bands: coupling must be nonzero");
    const ModelParams dual(4.0 / c, {1.0}, params.frequency());
    BandOptions dual_options = options;
    dual_options.e_resolution = options.e_resolution * 2.0 / c;
    BandSet b = rational_bands(dual, dual_options);
    std::vector<Interval> scaled;
    for (const auto& iv : b.bands.intervals()) scaled.push_back({iv.lo * c / 2.0, iv.hi * c / 2.0});
    b.bands = IntervalUnion(std::move(scaled));
    b.e_resolution = options.e_resolution;
    return b;
}

/// Number of eigenvalues below x of the Jacobi matrix with diagonal `diag` and
/// unit off-diagonal (Sturm sequence / LDL^T inertia count).
inline std::size_t sturm_count(const std::vector<double>& diag, double x) {
    constexpr double pivmin = 1e-300;
    std::size_t count = 0;
    double q = diag[0] - x;
    for (std::size_t i = 0;; ++i) {
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
        if (i + 1 == diag.size()) break;
        q = diag[i + 1] - x - 1.0 / q;
    }
    return count;
}

/// Eigenvalues (ascending) of the N x N Dirichlet truncation with diagonal
/// potential(params, theta, n), n = 0..N-1, unit off-diagonal.
inline std::vector<double> truncated_spectrum_oracle(const ModelParams& params, double theta, std::size_t N,
                                                     double tol = 1e-10, unsigned threads = 1) {
    if (N < 2) throw DomainError("truncated_spectrum_oracle: N must be >= 2");
    std::vector<double> diag(N);
    for (std::size_t n = 0; n < N; ++n) diag[n] = potential(params, theta, static_cast<std::int64_t>(n));
    const auto [dmin, dmax] = std::minmax_element(diag.begin(), diag.end());
    const double lo0 = *dmin - 2.0, hi0 = *dmax + 2.0;
    std::vector<double> eig(N);
    parallel_for(N, threads, [&](std::size_t j) {
        double lo = lo0, hi = hi0;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (sturm_count(diag, mid) > j) hi = mid;
            else lo = mid;
        }
        eig[j] = 0.5 * (lo + hi);
    });
    return eig;
}

} // namespace quasispec
