#pragma once

// Continued-fraction arithmetic of the frequency alpha = omega / 2pi.
//
// Convergents are exact big integers and every expansion carries the exact
// rational value it was computed from (a double is itself a dyadic rational),
// so the convergent inequalities can be checked without rounding.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "quasispec/errors.hpp"

namespace quasispec {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Natural log of a positive big integer, accurate beyond the double range.
inline double big_log(const BigInt& x) {
    if (x <= 0) throw DomainError("big_log: argument must be positive");
    const std::size_t bits = boost::multiprecision::msb(x);
    if (bits < 1000) return std::log(x.convert_to<double>());
    const std::size_t shift = bits - 60;
    const BigInt top = x >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

inline double to_double(const BigRational& r) { return r.convert_to<double>(); }

struct Convergent {
    BigInt p;
    BigInt q;
};

enum class ExpansionHalt { Terminated, MaxTerms, PrecisionExhausted };

inline const char* to_string(ExpansionHalt h) {
    switch (h) {
        case ExpansionHalt::Terminated: return "terminated";
        case ExpansionHalt::MaxTerms: return "max_terms";
        case ExpansionHalt::PrecisionExhausted: return "precision_exhausted";
    }
    return "?";
}

/// alpha = [0; a_1, a_2, ..., a_n] in (0, 1). Convergent index 0 is 0/1, index i
/// uses the first i partial quotients.
class ContinuedFraction {
public:
    /// Builds the finite fraction [0; a_1, ..., a_n]; its exact value is the last convergent.
    static ContinuedFraction from_quotients(const std::vector<BigInt>& quotients) {
        if (quotients.empty()) throw DomainError("ContinuedFraction: need at least one partial quotient");
        ContinuedFraction cf;
        for (const auto& a : quotients) {
            if (a < 1) throw DomainError("ContinuedFraction: partial quotients must be >= 1");
            cf.push(a);
        }
        if (quotients.size() == 1 && quotients.front() == 1)
            throw DomainError("ContinuedFraction: [0; 1] equals 1, outside (0, 1)");
        cf.value_ = BigRational(cf.convergents_.back().p, cf.convergents_.back().q);
        cf.alpha_ = to_double(cf.value_);
        cf.halt_ = ExpansionHalt::Terminated;
        return cf;
    }

    const std::vector<BigInt>& quotients() const { return quotients_; }
    const std::vector<Convergent>& convergents() const { return convergents_; }
    const Convergent& convergent(std::size_t i) const { return convergents_.at(i); }

    /// Number of convergents (one more than the number of partial quotients).
    std::size_t size() const { return convergents_.size(); }

    /// Exact value the expansion describes.
    const BigRational& value() const { return value_; }
    double alpha() const { return alpha_; }
    ExpansionHalt halt() const { return halt_; }
    bool terminated() const { return halt_ == ExpansionHalt::Terminated; }

private:
    friend ContinuedFraction expand_exact(const BigRational&, std::size_t, std::optional<double>, double);

    ContinuedFraction() : convergents_{{BigInt(0), BigInt(1)}} {}

    void push(const BigInt& a) {
        const std::size_t n = convergents_.size();
        // p_{-1}/q_{-1} = 1/0 seeds the recurrence at index 1.
        const BigInt p_prev2 = n >= 2 ? convergents_[n - 2].p : BigInt(1);
        const BigInt q_prev2 = n >= 2 ? convergents_[n - 2].q : BigInt(0);
        const auto& last = convergents_.back();
        convergents_.push_back({a * last.p + p_prev2, a * last.q + q_prev2});
        quotients_.push_back(a);
    }

    std::vector<BigInt> quotients_;
    std::vector<Convergent> convergents_;
    BigRational value_{0};
    double alpha_{0.0};
    ExpansionHalt halt_{ExpansionHalt::MaxTerms};
};

inline ContinuedFraction expand_exact(const BigRational& alpha, std::size_t max_terms,
                                      std::optional<double> min_remainder, double alpha_double) {
    if (alpha <= 0 || alpha >= 1) throw DomainError("continued_fraction_expand: alpha must lie in (0, 1)");
    ContinuedFraction cf;
    cf.value_ = alpha;
    cf.alpha_ = alpha_double;

    // Euclid on alpha = num / den.
    BigInt num = boost::multiprecision::numerator(alpha);
    BigInt den = boost::multiprecision::denominator(alpha);
    while (true) {
        if (num == 0) {
            cf.halt_ = ExpansionHalt::Terminated;
            break;
        }
        if (cf.quotients_.size() >= max_terms) {
            cf.halt_ = ExpansionHalt::MaxTerms;
            break;
        }
        const BigInt a = den / num;
        const BigInt rem = den - a * num;
        den = num;
        num = rem;
        cf.push(a);
        if (num == 0) {
            cf.halt_ = ExpansionHalt::Terminated;
            break;
        }
        if (min_remainder) {
            const auto& c = cf.convergents_.back();
            const BigRational err = abs(alpha - BigRational(c.p, c.q));
            if (to_double(err) <= *min_remainder) {
                cf.halt_ = ExpansionHalt::PrecisionExhausted;
                break;
            }
        }
    }
    return cf;
}

/// Expansion of a floating alpha in (0, 1). The double is expanded exactly and the
/// expansion stops once |alpha - p_n/q_n| <= min_remainder, since later quotients
/// would only describe the rounding of alpha.
inline ContinuedFraction continued_fraction_expand(double alpha, std::size_t max_terms,
                                                   double min_remainder = 1e-15) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("continued_fraction_expand: alpha must lie in (0, 1)");
    return expand_exact(BigRational(alpha), max_terms, min_remainder, alpha);
}

/// Expansion of an exact rational alpha in (0, 1); always terminates if max_terms allows.
inline ContinuedFraction continued_fraction_expand(const BigRational& alpha, std::size_t max_terms) {
    return expand_exact(alpha, max_terms, std::nullopt, to_double(alpha));
}

struct BetaEstimate {
    double value{0.0};   ///< max over n of ln q_{n+1} / q_n
    std::size_t index{0};
    bool terminated{false};
};

/// Finite-data proxy for beta = limsup ln q_{n+1} / q_n.
inline BetaEstimate beta_estimate(const ContinuedFraction& cf) {
    if (cf.size() < 3) throw DomainError("beta_estimate: need at least 3 convergents");
    BetaEstimate best{-std::numeric_limits<double>::infinity(), 0, cf.terminated()};
    for (std::size_t n = 0; n + 1 < cf.size(); ++n) {
        const double v = big_log(cf.convergent(n + 1).q) / cf.convergent(n).q.convert_to<double>();
        if (v > best.value) best = {v, n, cf.terminated()};
    }
    return best;
}

struct ApproximationQuality {
    double error{0.0};  ///< |alpha - p_n/q_n|
    double bound{0.0};  ///< 1 / (q_n q_{n+1}); +inf when q_{n+1} is unknown, 0 at the end of a finite fraction
};

inline ApproximationQuality approximation_quality(const ContinuedFraction& cf, std::size_t n) {
    if (n >= cf.size()) throw DomainError("approximation_quality: index beyond computed convergents");
    const auto& c = cf.convergent(n);
    ApproximationQuality q;
    q.error = to_double(abs(cf.value() - BigRational(c.p, c.q)));
    if (n + 1 < cf.size()) {
        q.bound = to_double(BigRational(BigInt(1), c.q * cf.convergent(n + 1).q));
    } else {
        q.bound = cf.terminated() ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return q;
}

/// Exact check of |alpha - p_j/q_j| <= j^{-q_j}.
inline bool satisfies_liouville_bound(const ContinuedFraction& cf, std::size_t level) {
    if (level == 0 || level >= cf.size()) throw DomainError("satisfies_liouville_bound: level out of range");
    const auto& c = cf.convergent(level);
    const BigRational err = abs(cf.value() - BigRational(c.p, c.q));
    const BigInt scale = boost::multiprecision::pow(BigInt(level), c.q.convert_to<unsigned>());
    return err * scale <= 1;
}

struct LiouvilleConstruction {
    ContinuedFraction cf;
    double alpha_proxy{0.0};  ///< the last convergent in double precision
    int levels{0};
};

/// Greedy Liouville-type frequency: a_1 = a_2 = 2, and for each level j >= 2 the
/// smallest a_{j+1} with q_j q_{j+1} >= j^{q_j}, which gives
/// |alpha - p_j/q_j| < 1/(q_j q_{j+1}) <= j^{-q_j}.
inline LiouvilleConstruction liouville_construct(int levels, double digit_budget = 1e6) {
    if (levels < 1) throw DomainError("liouville_construct: levels must be >= 1");
    std::vector<BigInt> a{BigInt(2), BigInt(2)};
    BigInt q_prev(2);  // q_1
    BigInt q_cur(5);   // q_2
    for (int j = 2; j <= levels; ++j) {
        const double digits = q_cur.convert_to<double>() * std::log10(static_cast<double>(j));
        if (!(digits <= digit_budget))
            throw BudgetExceededError("liouville_construct: level " + std::to_string(j) + " needs a denominator with ~" +
                                          std::to_string(digits) + " digits (budget " +
                                          std::to_string(digit_budget) + ")",
                                      j - 1);
        const BigInt target = boost::multiprecision::pow(BigInt(j), q_cur.convert_to<unsigned>());
        // q_{j+1} >= ceil(target / q_j)
        const BigInt need = (target + q_cur - 1) / q_cur;
        BigInt next_a = need > q_prev ? (need - q_prev + q_cur - 1) / q_cur : BigInt(1);
        if (next_a < 1) next_a = 1;
        a.push_back(next_a);
        const BigInt q_next = next_a * q_cur + q_prev;
        q_prev = q_cur;
        q_cur = q_next;
    }
    LiouvilleConstruction out{ContinuedFraction::from_quotients(a), 0.0, levels};
    out.alpha_proxy = out.cf.alpha();
    return out;
}

} // namespace quasispec
