#pragma once

// The periodic-coupling almost Mathieu family
//
//   (H u)(n) = u(n+1) + u(n-1) + lambda * T(n mod k) * cos(theta + n omega) u(n)
//
// over the skew product (theta, h) -> (theta + omega, h + 1 mod k) on S^1 x Z_k,
// together with its transfer-matrix cocycle.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "quasispec/arithmetic.hpp"
#include "quasispec/errors.hpp"
#include "quasispec/numerics.hpp"

namespace quasispec {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2pi).
inline double wrap_phase(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

struct Rational {
    std::int64_t p{0};
    std::int64_t q{1};
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// alpha = omega / 2pi in (0, 1), optionally known as an exact fraction p/q.
class Frequency {
public:
    static Frequency from_alpha(double alpha) {
        if (!(alpha > 0.0 && alpha < 1.0) || !std::isfinite(alpha))
            throw DomainError("Frequency: alpha = omega/2pi must lie in (0, 1), got " + std::to_string(alpha));
        Frequency f;
        f.alpha_ = alpha;
        return f;
    }

    static Frequency rational(std::int64_t p, std::int64_t q) {
        if (q <= 0 || p <= 0 || p >= q)
            throw DomainError("Frequency: need 0 < p < q, got " + std::to_string(p) + "/" + std::to_string(q));
        const std::int64_t g = std::gcd(p, q);
        Frequency f;
        f.exact_ = Rational{p / g, q / g};
        f.alpha_ = static_cast<double>(f.exact_->p) / static_cast<double>(f.exact_->q);
        return f;
    }

    static Frequency golden() { return from_alpha((std::sqrt(5.0) - 1.0) / 2.0); }
    static Frequency sqrt2() { return from_alpha(std::sqrt(2.0) - 1.0); }

    /// Finite fractions whose value fits in 64-bit integers stay exact.
    static Frequency from_continued_fraction(const ContinuedFraction& cf) {
        if (cf.terminated()) {
            const auto& c = cf.convergents().back();
            if (boost::multiprecision::msb(c.q) < 62) return rational(c.p.convert_to<std::int64_t>(), c.q.convert_to<std::int64_t>());
        }
        return from_alpha(cf.alpha());
    }

    double alpha() const { return alpha_; }
    double omega() const { return kTwoPi * alpha_; }
    const std::optional<Rational>& exact() const { return exact_; }
    bool is_rational() const { return exact_.has_value(); }

    /// alpha + 1/2 mod 1, i.e. omega + pi.
    Frequency shifted_by_half() const {
        if (exact_) {
            std::int64_t p = 2 * exact_->p + exact_->q;
            const std::int64_t q = 2 * exact_->q;
            p %= q;
            if (p == 0) throw DomainError("Frequency: alpha + 1/2 is an integer");
            return rational(p, q);
        }
        // alpha - 1/2 is exact for alpha >= 1/2.
        return from_alpha(alpha_ >= 0.5 ? alpha_ - 0.5 : alpha_ + 0.5);
    }

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        if (exact_) os << exact_->p << "/" << exact_->q;
        else os << alpha_;
        return os.str();
    }

private:
    Frequency() = default;
    double alpha_{0.5};
    std::optional<Rational> exact_;
};

/// Parses "golden", "sqrt2", "p/q", "cf:[a1,a2,...]" or a decimal in (0, 1).
inline Frequency parse_frequency(std::string_view spec) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [](std::string_view s) {
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw DomainError("frequency: cannot parse integer '" + std::string(s) + "'");
        return v;
    };
    spec = trim(spec);
    if (spec == "golden") return Frequency::golden();
    if (spec == "sqrt2") return Frequency::sqrt2();
    if (spec.starts_with("cf:")) {
        std::string_view body = trim(spec.substr(3));
        if (body.size() < 2 || body.front() != '[' || body.back() != ']')
            throw DomainError("frequency: expected cf:[a1,a2,...]");
        body = body.substr(1, body.size() - 2);
        std::vector<BigInt> quotients;
        while (!body.empty()) {
            const auto comma = body.find(',');
            quotients.emplace_back(parse_int(trim(body.substr(0, comma))));
            if (comma == std::string_view::npos) break;
            body.remove_prefix(comma + 1);
        }
        return Frequency::from_continued_fraction(ContinuedFraction::from_quotients(quotients));
    }
    if (const auto slash = spec.find('/'); slash != std::string_view::npos)
        return Frequency::rational(parse_int(trim(spec.substr(0, slash))), parse_int(trim(spec.substr(slash + 1))));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), v);
    if (ec != std::errc{} || ptr != spec.data() + spec.size())
        throw DomainError("frequency: cannot parse '" + std::string(spec) + "'");
    return Frequency::from_alpha(v);
}

/// Coupling constant lambda with the period T(0..k-1), over a given frequency.
class ModelParams {
public:
    ModelParams(double lambda, std::vector<double> coupling, Frequency frequency)
        : lambda_(lambda), coupling_(std::move(coupling)), frequency_(frequency) {
        if (coupling_.empty()) throw DomainError("ModelParams: coupling sequence must have k >= 1 entries");
        if (!std::isfinite(lambda_)) throw DomainError("ModelParams: lambda must be finite");
        for (double t : coupling_)
            if (!std::isfinite(t)) throw DomainError("ModelParams: coupling entries must be finite");
    }

    /// The classic operator: k = 1, T = {1}.
    static ModelParams almost_mathieu(double lambda, Frequency frequency) { return {lambda, {1.0}, frequency}; }

    double lambda() const { return lambda_; }
    std::size_t period() const { return coupling_.size(); }
    const std::vector<double>& coupling() const { return coupling_; }
    const Frequency& frequency() const { return frequency_; }
    double omega() const { return frequency_.omega(); }
    double alpha() const { return frequency_.alpha(); }

    /// T(n) extended k-periodically, n mod k taken nonnegative.
    double coupling_at(std::int64_t n) const {
        const auto k = static_cast<std::int64_t>(coupling_.size());
        return coupling_[static_cast<std::size_t>(((n % k) + k) % k)];
    }

    double max_abs_coupling() const {
        double m = 0.0;
        for (double t : coupling_) m = std::max(m, std::abs(t));
        return m;
    }

    /// sup |V| = |lambda| max |T|.
    double potential_bound() const { return std::abs(lambda_) * max_abs_coupling(); }

    /// The spectrum lies in [-energy_bound, energy_bound].
    double energy_bound() const { return 2.0 + potential_bound(); }

    ModelParams with_frequency(Frequency f) const { return {lambda_, coupling_, f}; }
    ModelParams with_lambda(double lambda) const { return {lambda, coupling_, frequency_}; }

private:
    double lambda_;
    std::vector<double> coupling_;
    Frequency frequency_;
};

/// A point (theta, h) of S^1 x Z_k.
struct PhasePoint {
    double theta{0.0};
    std::size_t residue{0};
    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

inline PhasePoint skew_step(const PhasePoint& p, const ModelParams& params) {
    double theta = p.theta + params.omega();
    if (theta >= kTwoPi) theta -= kTwoPi;
    return {theta, (p.residue + 1) % params.period()};
}

inline PhasePoint skew_step_back(const PhasePoint& p, const ModelParams& params) {
    double theta = p.theta - params.omega();
    if (theta < 0.0) theta += kTwoPi;
    if (theta >= kTwoPi) theta = 0.0;
    return {theta, (p.residue + params.period() - 1) % params.period()};
}

/// theta + n omega, unreduced. n alpha is split exactly (fma) into an integer
/// part, which is dropped, and a fractional part, so the phase error does not
/// grow with |n|. The result lies in [theta - 2pi, theta + 4pi).
inline double orbit_phase(double theta, double alpha, std::int64_t n) {
    const double nd = static_cast<double>(n);
    const double x = nd * alpha;
    const double err = std::fma(nd, alpha, -x);
    return theta + kTwoPi * ((x - std::floor(x)) + err);
}

/// lambda T(n mod k) cos(theta + n omega).
inline double potential(const ModelParams& params, double theta, std::int64_t n) {
    return params.lambda() * params.coupling_at(n) * std::cos(orbit_phase(theta, params.alpha(), n));
}

/// [[E - V(n), -1], [1, 0]].
inline Mat2 transfer_matrix(const ModelParams& params, double energy, double theta, std::int64_t n) {
    return {energy - potential(params, theta, n), -1.0, 1.0, 0.0};
}

/// [[0, 1], [-1, E - V(n)]].
inline Mat2 inverse_transfer_matrix(const ModelParams& params, double energy, double theta, std::int64_t n) {
    return {0.0, 1.0, -1.0, energy - potential(params, theta, n)};
}

/// One-step cocycle at a point of S^1 x Z_k: [[E - lambda T(h) cos theta, -1], [1, 0]].
inline Mat2 step_matrix(const ModelParams& params, double energy, const PhasePoint& p) {
    return {energy - params.lambda() * params.coupling()[p.residue] * std::cos(p.theta), -1.0, 1.0, 0.0};
}

/// Number of steps between rescales so that the matrix part cannot overflow:
/// every factor has Schmidt norm at most sqrt((|E| + sup|V|)^2 + 2).
inline std::int64_t rescale_interval(double energy, double potential_bound) {
    const double a = std::abs(energy) + potential_bound;
    const double per_step = 0.5 * std::log(a * a + 2.0);
    const double steps = std::floor(600.0 / std::max(per_step, 1e-3));
    return static_cast<std::int64_t>(std::clamp(steps, 1.0, 1000.0));
}

/// Incremental product of the cocycle along an orbit. Forward walks build
/// A(x_{m-1}) ... A(x_0); backward walks build A(T^{-m}x)^{-1} ... A(T^{-1}x)^{-1}.
/// Later factors multiply on the left in both cases.
class CocycleWalk {
public:
    enum class Direction { Forward, Backward };

    CocycleWalk(const ModelParams& params, double energy, PhasePoint start, Direction dir = Direction::Forward)
        : params_(&params), energy_(energy), theta0_(start.theta), residue_(start.residue), dir_(dir),
          interval_(rescale_interval(energy, params.potential_bound())) {
        if (start.residue >= params.period()) throw DomainError("CocycleWalk: residue out of range");
    }

    void advance(std::int64_t steps) {
        if (steps < 0) throw DomainError("CocycleWalk: negative step count");
        const double lam = params_->lambda();
        const auto& T = params_->coupling();
        const double alpha = params_->alpha();
        const std::size_t k = T.size();
        Mat2 m = product_.matrix;
        std::int64_t n = offset_;
        std::size_t h = residue_;
        for (std::int64_t i = 0; i < steps; ++i) {
            if (dir_ == Direction::Forward) {
                const double a = energy_ - lam * T[h] * std::cos(orbit_phase(theta0_, alpha, n));
                m = {a * m.a11 - m.a21, a * m.a12 - m.a22, m.a11, m.a12};
                ++n;
                h = (h + 1 == k) ? 0 : h + 1;
            } else {
                --n;
                h = (h == 0) ? k - 1 : h - 1;
                const double a = energy_ - lam * T[h] * std::cos(orbit_phase(theta0_, alpha, n));
                // [[0, 1], [-1, a]] * m
                m = {m.a21, m.a22, a * m.a21 - m.a11, a * m.a22 - m.a12};
            }
            if (++since_rescale_ == interval_) {
                product_.matrix = m;
                product_.canonicalize();
                m = product_.matrix;
                since_rescale_ = 0;
            }
        }
        product_.matrix = m;
        product_.canonicalize();
        offset_ = n;
        residue_ = h;
        steps_ += steps;
    }

    const RescaledMat& product() const { return product_; }
    /// Current point of S^1 x Z_k.
    PhasePoint position() const { return {wrap_phase(orbit_phase(theta0_, params_->alpha(), offset_)), residue_}; }
    std::int64_t steps() const { return steps_; }

private:
    const ModelParams* params_;
    double energy_;
    double theta0_;
    std::int64_t offset_{0};
    std::size_t residue_;
    Direction dir_;
    std::int64_t interval_;
    std::int64_t since_rescale_{0};
    std::int64_t steps_{0};
    RescaledMat product_{};
};

/// The m-step product A(x_{m-1}) ... A(x_0) from `start`, in rescaled form.
inline RescaledMat cocycle_product(const ModelParams& params, double energy, PhasePoint start, std::int64_t m) {
    if (m < 0) throw DomainError("cocycle_product: m must be >= 0 (use inverse_cocycle_product)");
    CocycleWalk walk(params, energy, start);
    walk.advance(m);
    return walk.product();
}

/// The negative-time cocycle A(T^{-m}x)^{-1} ... A(T^{-1}x)^{-1}, which inverts
/// cocycle_product(T^{-m}x, m).
inline RescaledMat inverse_cocycle_product(const ModelParams& params, double energy, PhasePoint start,
                                           std::int64_t m) {
    if (m < 1) throw DomainError("inverse_cocycle_product: m must be >= 1");
    CocycleWalk walk(params, energy, start, CocycleWalk::Direction::Backward);
    walk.advance(m);
    return walk.product();
}

/// B(theta) = A^k(theta, 0), the cocycle over theta -> theta + k omega.
inline Mat2 reduced_cocycle(const ModelParams& params, double energy, double theta) {
    Mat2 b = Mat2::identity();
    PhasePoint p{wrap_phase(theta), 0};
    for (std::size_t j = 0; j < params.period(); ++j) {
        b = compose(step_matrix(params, energy, p), b);
        p = skew_step(p, params);
    }
    return b;
}

/// (1/m) sum_{j<m} f(orbit_j) with Neumaier-compensated summation.
template <class Observable>
double birkhoff_average(const ModelParams& params, Observable&& f, PhasePoint start, std::int64_t m) {
    if (m < 1) throw DomainError("birkhoff_average: m must be >= 1");
    double sum = 0.0;
    double comp = 0.0;
    PhasePoint p = start;
    for (std::int64_t j = 0; j < m; ++j) {
        const double x = static_cast<double>(f(p));
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
        p = skew_step(p, params);
    }
    return (sum + comp) / static_cast<double>(m);
}

/// |lambda cos(theta + n w1) + lambda cos(theta + n w2)
///  - 2 lambda cos(theta + n (w1 + w2)/2) cos(n (w1 - w2)/2)|
inline double two_dim_reduction_check(double lambda, double omega1, double omega2, double theta, std::int64_t n) {
    const double nd = static_cast<double>(n);
    const double lhs = lambda * std::cos(theta + nd * omega1) + lambda * std::cos(theta + nd * omega2);
    const double rhs = 2.0 * lambda * std::cos(theta + 0.5 * nd * (omega1 + omega2)) * std::cos(0.5 * nd * (omega1 - omega2));
    return std::abs(lhs - rhs);
}

} // namespace quasispec
