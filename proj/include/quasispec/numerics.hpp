#pragma once

// Small deterministic kernels shared by every module. 2x2 real matrices come
// with a rescaled product form; the rest of the file holds unions of closed
// intervals and finite Fourier series.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "quasispec/errors.hpp"

namespace quasispec {

// ---------------------------------------------------------------------------
// 2x2 matrices
// ---------------------------------------------------------------------------

struct Vec2 {
    double x{0.0};
    double y{0.0};

    double norm() const { return std::hypot(x, y); }
};

/// Row-major 2x2 real matrix [[a11, a12], [a21, a22]].
struct Mat2 {
    double a11{1.0};
    double a12{0.0};
    double a21{0.0};
    double a22{1.0};

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    bool is_finite() const {
        return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) &&
               std::isfinite(a22);
    }

    friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
                a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
    }
    friend constexpr Vec2 operator*(const Mat2& a, const Vec2& v) {
        return {a.a11 * v.x + a.a12 * v.y, a.a21 * v.x + a.a22 * v.y};
    }
    friend constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
    }
    friend constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
    }
    friend constexpr Mat2 operator*(double s, const Mat2& a) {
        return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
    }
    friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

/// Matrix product a*b; rejects products that overflow to non-finite entries.
inline Mat2 compose(const Mat2& a, const Mat2& b) {
    Mat2 r = a * b;
    if (!r.is_finite()) throw NumericRangeError("compose: product has non-finite entries");
    return r;
}

constexpr double det(const Mat2& m) { return m.a11 * m.a22 - m.a12 * m.a21; }

constexpr double trace(const Mat2& m) { return m.a11 + m.a22; }

/// Schmidt (Frobenius) norm. Entries beyond 1e150 are scaled before squaring.
inline double schmidt_norm(const Mat2& m) {
    const double big = std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
    if (big < 1e150 || !std::isfinite(big))
        return std::sqrt(m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22);
    const Mat2 r{m.a11 / big, m.a12 / big, m.a21 / big, m.a22 / big};
    return big * std::sqrt(r.a11 * r.a11 + r.a12 * r.a12 + r.a21 * r.a21 + r.a22 * r.a22);
}

/// Largest singular value, closed form for 2x2.
inline double operator_norm(const Mat2& m) {
    const double f2 = m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22;
    const double d = det(m);
    const double disc = std::max(0.0, f2 * f2 - 4.0 * d * d);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

/// Inverse of a determinant-one matrix (the adjugate).
constexpr Mat2 unimodular_inverse(const Mat2& m) { return {m.a22, -m.a12, -m.a21, m.a11}; }

inline Mat2 rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c, -s, s, c};
}

inline double max_abs_entry_diff(const Mat2& a, const Mat2& b) {
    return std::max({std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12), std::abs(a.a21 - b.a21),
                     std::abs(a.a22 - b.a22)});
}

/// A matrix product held as matrix * exp(log_scale). After canonicalize() the
/// matrix part has Schmidt norm in [1, e] whenever the product is unimodular.
struct RescaledMat {
    Mat2 matrix{Mat2::identity()};
    double log_scale{0.0};

    /// Factors the Schmidt norm out of the matrix part once it exceeds e.
    void canonicalize() {
        const double n = schmidt_norm(matrix);
        if (!std::isfinite(n)) throw NumericRangeError("rescaled product overflowed between rescales");
        if (n > std::numbers::e) {
            matrix = (1.0 / n) * matrix;
            log_scale += std::log(n);
        }
    }

    /// log of the Schmidt norm of the full product.
    double log_norm() const { return log_scale + std::log(schmidt_norm(matrix)); }

    /// The full product; may overflow for long hyperbolic products.
    Mat2 reassemble() const { return std::exp(log_scale) * matrix; }

    /// log ||P v|| for the full product P.
    double log_norm_apply(const Vec2& v) const { return log_scale + std::log((matrix * v).norm()); }
};

/// exp(s_a) A - exp(s_b) B evaluated at the larger of the two scales, returned as
/// (difference matrix, common log scale).
inline RescaledMat rescaled_difference(const RescaledMat& a, const RescaledMat& b) {
    const double s = std::max(a.log_scale, b.log_scale);
    RescaledMat r;
    r.matrix = std::exp(a.log_scale - s) * a.matrix - std::exp(b.log_scale - s) * b.matrix;
    r.log_scale = s;
    return r;
}

// ---------------------------------------------------------------------------
// Interval unions
// ---------------------------------------------------------------------------

struct Interval {
    double lo{0.0};
    double hi{0.0};

    double length() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, pairwise disjoint closed intervals. Intervals closer than merge_gap
/// are fused on construction.
class IntervalUnion {
public:
    static constexpr double kDefaultMergeGap = 1e-12;

    IntervalUnion() = default;

    explicit IntervalUnion(std::vector<Interval> intervals, double merge_gap = kDefaultMergeGap) {
        for (const auto& iv : intervals) {
            if (!(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
                throw DomainError("IntervalUnion: invalid interval [" + std::to_string(iv.lo) + ", " +
                                  std::to_string(iv.hi) + "]");
        }
        std::sort(intervals.begin(), intervals.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
        for (const auto& iv : intervals) {
            if (!parts_.empty() && iv.lo - parts_.back().hi < merge_gap) {
                parts_.back().hi = std::max(parts_.back().hi, iv.hi);
            } else {
                parts_.push_back(iv);
            }
        }
    }

    static IntervalUnion from_points(const std::vector<double>& points) {
        std::vector<Interval> ivs;
        ivs.reserve(points.size());
        for (double p : points) ivs.push_back({p, p});
        return IntervalUnion(std::move(ivs));
    }

    const std::vector<Interval>& intervals() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    double measure() const {
        double s = 0.0;
        for (const auto& iv : parts_) s += iv.length();
        return s;
    }

    double min() const { return parts_.front().lo; }
    double max() const { return parts_.back().hi; }

    /// Distance from x to the set; +infinity for the empty set.
    double distance(double x) const {
        if (parts_.empty()) return std::numeric_limits<double>::infinity();
        auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                                   [](double v, const Interval& iv) { return v < iv.lo; });
        double best = std::numeric_limits<double>::infinity();
        if (it != parts_.end()) best = it->lo - x;
        if (it != parts_.begin()) {
            const auto& prev = *std::prev(it);
            best = std::min(best, x <= prev.hi ? 0.0 : x - prev.hi);
        }
        return best;
    }

    bool contains(double x) const { return distance(x) == 0.0; }

    /// sup over x in this set of distance(x, other).
    double directed_distance_to(const IntervalUnion& other) const {
        if (parts_.empty()) return 0.0;
        if (other.empty()) return std::numeric_limits<double>::infinity();
        double worst = 0.0;
        const auto& ob = other.parts_;
        for (const auto& iv : parts_) {
            worst = std::max({worst, other.distance(iv.lo), other.distance(iv.hi)});
            // The distance to `other` peaks inside iv only at midpoints of its gaps.
            auto first = std::lower_bound(ob.begin(), ob.end(), iv.lo,
                                          [](const Interval& g, double v) { return g.hi < v; });
            if (first != ob.begin()) --first;
            for (auto g = first; g != ob.end() && g->hi <= iv.hi; ++g) {
                auto next = std::next(g);
                if (next == ob.end()) break;
                const double mid = 0.5 * (g->hi + next->lo);
                if (mid >= iv.lo && mid <= iv.hi) worst = std::max(worst, 0.5 * (next->lo - g->hi));
            }
        }
        return worst;
    }

    friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

private:
    std::vector<Interval> parts_;
};

inline double union_measure(const IntervalUnion& u) { return u.measure(); }

/// Symmetric Hausdorff distance; +infinity when exactly one side is empty.
inline double hausdorff_distance(const IntervalUnion& a, const IntervalUnion& b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    return std::max(a.directed_distance_to(b), b.directed_distance_to(a));
}

// ---------------------------------------------------------------------------
// Trigonometric polynomials
// ---------------------------------------------------------------------------

/// sum_{n=-N}^{N} c_n e^{i n phi}.
class TrigPolynomial {
public:
    using Complex = std::complex<double>;

    TrigPolynomial() : coeffs_(1, Complex{}) {}

    explicit TrigPolynomial(std::size_t degree) : degree_(degree), coeffs_(2 * degree + 1, Complex{}) {}

    /// amplitude * cos(phi + shift)
    static TrigPolynomial cosine(double amplitude, double shift = 0.0) {
        TrigPolynomial p(1);
        p.coeff(1) = 0.5 * amplitude * std::polar(1.0, shift);
        p.coeff(-1) = std::conj(p.coeff(1));
        return p;
    }

    std::size_t degree() const { return degree_; }

    Complex& coeff(std::int64_t n) { return coeffs_.at(index(n)); }
    const Complex& coeff(std::int64_t n) const { return coeffs_.at(index(n)); }

    Complex mean() const { return coeff(0); }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    bool is_real_valued(double tol = 1e-14) const {
        const double scale = std::max(1.0, max_abs_coeff());
        for (std::int64_t n = 0; n <= static_cast<std::int64_t>(degree_); ++n)
            if (std::abs(coeff(-n) - std::conj(coeff(n))) > tol * scale) return false;
        return true;
    }

    /// Horner evaluation on the positive and negative halves separately.
    Complex evaluate(double phi) const {
        const Complex z = std::polar(1.0, phi);
        const Complex w = std::conj(z);
        const auto N = static_cast<std::int64_t>(degree_);
        Complex pos = coeff(N);
        for (std::int64_t n = N - 1; n >= 0; --n) pos = pos * z + coeff(n);
        Complex neg{};
        for (std::int64_t n = N; n >= 1; --n) neg = (neg + coeff(-n)) * w;
        return pos + neg;
    }

    /// Term-by-term summation; reference for evaluate().
    Complex evaluate_direct(double phi) const {
        Complex s{};
        const auto N = static_cast<std::int64_t>(degree_);
        for (std::int64_t n = -N; n <= N; ++n) s += coeff(n) * std::polar(1.0, static_cast<double>(n) * phi);
        return s;
    }

    /// Real part of evaluate(); exact for real-valued polynomials up to roundoff.
    double operator()(double phi) const { return evaluate(phi).real(); }

    /// The polynomial phi -> p(phi + delta).
    TrigPolynomial shifted(double delta) const {
        TrigPolynomial r(degree_);
        const auto N = static_cast<std::int64_t>(degree_);
        for (std::int64_t n = -N; n <= N; ++n)
            r.coeff(n) = coeff(n) * std::polar(1.0, static_cast<double>(n) * delta);
        return r;
    }

private:
    std::size_t index(std::int64_t n) const {
        const auto N = static_cast<std::int64_t>(degree_);
        if (n < -N || n > N) throw DomainError("TrigPolynomial: mode " + std::to_string(n) + " outside degree");
        return static_cast<std::size_t>(n + N);
    }

    std::size_t degree_{0};
    std::vector<Complex> coeffs_;
};

} // namespace quasispec
