#pragma once

// Lyapunov exponents of the transfer-matrix cocycle.
//
// L_m(E) is the average over S^1 x Z_k (uniform phase grid, every residue) of
// (1/m) log ||A^m(theta, h)||, and L(E) = inf_m L_m(E) is estimated by the
// minimum over a schedule of m values. One orbit pass per sample serves the
// whole schedule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "quasispec/model.hpp"
#include "quasispec/numerics.hpp"
#include "quasispec/parallel.hpp"

namespace quasispec {

enum class NormKind { Schmidt, Operator };

/// 2^lo_exp, 2^(lo_exp+1), ..., 2^hi_exp.
inline std::vector<std::int64_t> doubling_schedule(int lo_exp, int hi_exp) {
    if (lo_exp < 0 || hi_exp < lo_exp || hi_exp > 40) throw DomainError("doubling_schedule: bad exponent range");
    std::vector<std::int64_t> s;
    for (int e = lo_exp; e <= hi_exp; ++e) s.push_back(std::int64_t{1} << e);
    return s;
}

struct LyapunovOptions {
    std::size_t grid_size{512};  ///< phase samples per residue
    std::vector<std::int64_t> schedule{doubling_schedule(6, 14)};
    unsigned threads{1};
    NormKind norm{NormKind::Schmidt};
};

struct LyapunovEstimate {
    double value{0.0};     ///< nats per step
    std::int64_t m{0};     ///< schedule entry attaining the minimum
    std::size_t grid{0};   ///< total phase samples (grid_size * k)
    double spread{0.0};    ///< max - min of the per-sample values at m
};

namespace detail {

inline double log_norm(const RescaledMat& p, NormKind kind) {
    return kind == NormKind::Schmidt ? p.log_norm() : p.log_scale + std::log(operator_norm(p.matrix));
}

inline void check_schedule(std::span<const std::int64_t> schedule) {
    if (schedule.empty()) throw DomainError("lyapunov: empty schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] < 1) throw DomainError("lyapunov: schedule entries must be >= 1");
        if (i > 0 && schedule[i] <= schedule[i - 1]) throw DomainError("lyapunov: schedule must be increasing");
    }
}

} // namespace detail

/// samples[i][s] = (1/m_i) log ||A^{m_i}(x_s)|| over the uniform grid of S^1 x Z_k,
/// sample s = h * grid_size + j at theta_j = 2 pi j / grid_size.
inline std::vector<std::vector<double>> phase_samples(const ModelParams& params, double energy,
                                                      std::span<const std::int64_t> schedule,
                                                      std::size_t grid_size, unsigned threads = 1,
                                                      NormKind norm = NormKind::Schmidt) {
    detail::check_schedule(schedule);
    if (grid_size < 1) throw DomainError("lyapunov: grid_size must be >= 1");
    const std::size_t k = params.period();
    const std::size_t n = grid_size * k;
    std::vector<std::vector<double>> out(schedule.size(), std::vector<double>(n, 0.0));
    parallel_for(n, threads, [&](std::size_t s) {
        const std::size_t h = s / grid_size;
        const std::size_t j = s % grid_size;
        const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(grid_size);
        CocycleWalk walk(params, energy, {theta, h});
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            walk.advance(schedule[i] - walk.steps());
            out[i][s] = detail::log_norm(walk.product(), norm) / static_cast<double>(schedule[i]);
        }
    });
    return out;
}

inline double lm_phase_average(const ModelParams& params, double energy, std::int64_t m, std::size_t grid_size,
                               unsigned threads = 1, NormKind norm = NormKind::Schmidt) {
    const std::int64_t sched[1] = {m};
    const auto samples = phase_samples(params, energy, sched, grid_size, threads, norm);
    return pairwise_sum(samples[0]) / static_cast<double>(samples[0].size());
}

inline LyapunovEstimate lyapunov_estimate(const ModelParams& params, double energy,
                                          const LyapunovOptions& options = {}) {
    const auto samples = phase_samples(params, energy, options.schedule, options.grid_size, options.threads, options.norm);
    LyapunovEstimate best{std::numeric_limits<double>::infinity(), 0, samples[0].size(), 0.0};
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double avg = pairwise_sum(samples[i]) / static_cast<double>(samples[i].size());
        if (avg < best.value) {
            const auto [lo, hi] = std::minmax_element(samples[i].begin(), samples[i].end());
            best = {avg, options.schedule[i], samples[i].size(), *hi - *lo};
        }
    }
    return best;
}

/// ln((|lambda|/2) (prod |T(j)|)^{1/k}); -infinity when lambda or any T(j) vanishes.
inline double herman_lower_bound(const ModelParams& params) {
    if (params.lambda() == 0.0) return -std::numeric_limits<double>::infinity();
    double log_sum = 0.0;
    for (double t : params.coupling()) {
        if (t == 0.0) return -std::numeric_limits<double>::infinity();
        log_sum += std::log(std::abs(t));
    }
    return std::log(std::abs(params.lambda()) / 2.0) + log_sum / static_cast<double>(params.period());
}

struct SweepPoint {
    double energy{0.0};
    LyapunovEstimate estimate;
};

/// Estimates at every energy; output order follows the input. Energies are
/// distributed over options.threads workers, each estimate runs serially.
inline std::vector<SweepPoint> le_sweep(const ModelParams& params, std::span<const double> energies,
                                        const LyapunovOptions& options = {}) {
    std::vector<SweepPoint> out(energies.size());
    LyapunovOptions serial = options;
    serial.threads = 1;
    parallel_for(energies.size(), options.threads, [&](std::size_t i) {
        out[i] = {energies[i], lyapunov_estimate(params, energies[i], serial)};
    });
    return out;
}

/// max_i |L(E_{i+1}) - L(E_i)| along a sweep.
inline double discrete_modulus_of_continuity(std::span<const SweepPoint> sweep) {
    double m = 0.0;
    for (std::size_t i = 1; i < sweep.size(); ++i)
        m = std::max(m, std::abs(sweep[i].estimate.value - sweep[i - 1].estimate.value));
    return m;
}

/// Phase average of (1/m) log ||B^m(theta)|| for the reduced cocycle B over
/// theta -> theta + k omega, built from reduced_cocycle steps.
inline double reduced_lm_phase_average(const ModelParams& params, double energy, std::int64_t m,
                                       std::size_t grid_size) {
    if (m < 1 || grid_size < 1) throw DomainError("reduced_lm_phase_average: m and grid_size must be >= 1");
    const double step = static_cast<double>(params.period()) * params.omega();
    std::vector<double> values(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j) {
        RescaledMat prod;
        double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(grid_size);
        for (std::int64_t i = 0; i < m; ++i) {
            prod.matrix = reduced_cocycle(params, energy, theta) * prod.matrix;
            prod.canonicalize();
            theta = wrap_phase(theta + step);
        }
        values[j] = prod.log_norm() / static_cast<double>(m);
    }
    return pairwise_sum(values) / static_cast<double>(grid_size);
}

} // namespace quasispec
