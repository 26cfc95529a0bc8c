// Copyright 2026 The jointlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "jointlab/bounds.hpp"
#include "jointlab/optimize.hpp"
#include "jointlab/pair_statistics.hpp"
#include "jointlab/random.hpp"

namespace jointlab {

/// Evaluates f(0), ..., f(n - 1) on up to `workers` threads (0 = hardware concurrency) and returns the
/// results in index order. Each index must be self-contained, e.g. seeded by SeededSampler::fork(i), so
/// the output does not depend on the number of workers.
template <typename F>
auto parallel_map(std::size_t n, F &&f, unsigned workers = 0) -> std::vector<decltype(f(std::size_t{}))> {
    using T = decltype(f(std::size_t{}));
    std::vector<T> out(n);
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, n / 256)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; i++) {
            out[i] = f(i);
        }
        return out;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; w++) {
        threads.emplace_back([&, w] {
            try {
                const std::size_t end = std::min(n, (w + 1) * chunk);
                for (std::size_t i = w * chunk; i < end; i++) {
                    out[i] = f(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

/// Rank-1 state from a normalized complex Gaussian 4-vector (unitarily invariant).
inline DensityOperator4 haar_random_pure_state(SeededSampler &s) {
    Ket<4> ket{};
    for (auto &a : ket) {
        a = s.complex_normal();
    }
    return DensityOperator4::from_ket(ket);
}

/// G G^dagger / Tr(G G^dagger) for a 4x4 matrix G of standard complex Gaussians.
inline DensityOperator4 ginibre_random_mixed_state(SeededSampler &s) {
    Matrix4 g;
    for (std::size_t r = 0; r < 4; r++) {
        for (std::size_t c = 0; c < 4; c++) {
            g(r, c) = s.complex_normal();
        }
    }
    Matrix4 m = g * g.adjoint();
    m *= 1 / trace(m).real();
    return DensityOperator4::from_matrix(m);
}

/// Mixture of the four Bell states with Dirichlet(1, 1, 1, 1) weights. Every such state has vanishing
/// local X and Y means.
inline DensityOperator4 random_bell_mixture(SeededSampler &s) {
    std::array<double, 4> w{};
    double total = 0;
    for (auto &v : w) {
        v = -std::log(s.uniform_pos());
        total += v;
    }
    for (auto &v : w) {
        v /= total;
    }
    static const std::array<DensityOperator4, 4> bell{
        DensityOperator4::from_ket(bell_basis_ket(BellBasis::phi_plus)),
        DensityOperator4::from_ket(bell_basis_ket(BellBasis::phi_minus)),
        DensityOperator4::from_ket(bell_basis_ket(BellBasis::psi_plus)),
        DensityOperator4::from_ket(bell_basis_ket(BellBasis::psi_minus)),
    };
    return DensityOperator4::mixture(w, bell);
}

/// Visibility pair r (cos t, sin t) with t uniform on [0, pi/2] and r uniform on [0, 1].
inline VisibilityPair random_admissible_visibility(SeededSampler &s) {
    const double t = s.uniform() * std::numbers::pi / 2;
    const double r = s.uniform();
    return {std::clamp(r * std::cos(t), 0.0, 1.0), std::clamp(r * std::sin(t), 0.0, 1.0)};
}

/// Outcomes drawn from one pair distribution.
struct ShotRecord {
    std::vector<PairOutcomeLabel> outcomes;
    std::string source;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string algorithm_id;

    std::size_t n() const {
        return outcomes.size();
    }
};

/// Probabilities at or below this are treated as exactly zero by the sampler.
inline constexpr double kZeroMass = 1e-14;

/// n independent draws by inverse CDF over the fixed PairOutcomeLabel::index() order.
/// Throws std::invalid_argument if any probability is below -1e-12.
inline ShotRecord sample_outcomes(
    const PairOutcomeDistribution &d, std::size_t n, SeededSampler &s, std::string source = {}) {
    std::array<double, 16> cumulative{};
    double total = 0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < 16; k++) {
        const double p = d.probabilities()[k];
        if (p < -kDefaultTolerance) {
            throw std::invalid_argument(
                "sample_outcomes: distribution has negative probability " + std::to_string(p) + " at outcome " +
                PairOutcomeLabel::from_index(k).str());
        }
        if (p > kZeroMass) {
            total += p;
            last_positive = k;
        }
        cumulative[k] = total;
    }
    if (!(total > 0)) {
        throw std::invalid_argument("sample_outcomes: distribution has no positive mass");
    }

    ShotRecord record;
    record.source = std::move(source);
    record.seed = s.seed();
    record.stream = s.stream();
    record.algorithm_id = SeededSampler::algorithm_id();
    record.outcomes.reserve(n);
    for (std::size_t i = 0; i < n; i++) {
        const double u = s.uniform() * total;
        std::size_t k = 0;
        while (k < last_positive && !(u < cumulative[k])) {
            k++;
        }
        record.outcomes.push_back(PairOutcomeLabel::from_index(k));
    }
    return record;
}

struct EstimateWithError {
    double value = 0;
    double std_error = 0;
    std::size_t n = 0;
};

/// Sample mean of the moment with standard error s / sqrt(n). Requires n >= 2.
inline EstimateWithError estimate_moment(const ShotRecord &r, const MomentSpec &spec) {
    const std::size_t n = r.n();
    if (n < 2) {
        throw std::invalid_argument("estimate_moment: need at least two shots");
    }
    // Values are +-1, so the sum of squares is n and the variance follows from the mean alone.
    long long sum = 0;
    for (const auto &o : r.outcomes) {
        sum += spec.value(o);
    }
    const double nd = static_cast<double>(n);
    const double mean = static_cast<double>(sum) / nd;
    const double var = std::max(0.0, (nd - nd * mean * mean) / (nd - 1));
    return {mean, std::sqrt(var / nd), n};
}

/// Sample mean and standard error of an arbitrary per-shot observable f(outcome). Requires n >= 2.
template <typename F>
EstimateWithError estimate_observable(const ShotRecord &r, F &&f) {
    const std::size_t n = r.n();
    if (n < 2) {
        throw std::invalid_argument("estimate_observable: need at least two shots");
    }
    double mean = 0;
    double m2 = 0;
    std::size_t k = 0;
    for (const auto &o : r.outcomes) {
        const double v = f(o);
        k++;
        const double delta = v - mean;
        mean += delta / static_cast<double>(k);
        m2 += delta * (v - mean);
    }
    const double nd = static_cast<double>(n);
    return {mean, std::sqrt(m2 / (nd - 1) / nd), n};
}

/// Per-shot value x_A x_B + y_A x_B + x_A y_B - y_A y_B.
inline int chsh_shot_value(PairOutcomeLabel o) {
    return o.xa() * o.xb() + o.ya() * o.xb() + o.xa() * o.yb() - o.ya() * o.yb();
}

/// <x_A x_B> + <y_A x_B> + <x_A y_B> - <y_A y_B> observed on the Bell family state with visibilities
/// (cos alpha, sin alpha) and (cos beta, sin beta): cos(alpha - beta) cos phi + sin(alpha + beta) sin phi.
inline double experimental_chsh(double phi, const AnglePair &a) {
    return std::cos(a.alpha - a.beta) * std::cos(phi) + std::sin(a.alpha + a.beta) * std::sin(phi);
}

struct ChshOptimum {
    double value = 0;
    double alpha = 0;
    double beta = 0;
};

/// Maximizes experimental_chsh over alpha, beta in [0, pi/2].
///
/// A grid offset by half a step from the edges seeds alternating one-dimensional refinements in
/// u = alpha + beta and v = alpha - beta, in which the objective separates; the square maps to
/// |v| <= min(u, pi - u).
/// Population CHSH combination under visibilities (cos alpha, sin alpha) and (cos beta, sin beta) for any
/// state with correlations c. Reduces to experimental_chsh on the Bell family.
inline double experimental_chsh_of(const CorrelationVector &c, const AnglePair &a) {
    const double ca = std::cos(a.alpha);
    const double sa = std::sin(a.alpha);
    const double cb = std::cos(a.beta);
    const double sb = std::sin(a.beta);
    return ca * cb * c.xx + ca * sb * c.xy + sa * cb * c.yx - sa * sb * c.yy;
}

namespace internal {

/// argmax of p cos(t) + q sin(t) over t in [0, pi/2].
inline double best_quarter_angle(double p, double q) {
    const double quarter = std::numbers::pi / 2;
    double best = 0;
    double value = p;
    if (q > value) {
        best = quarter;
        value = q;
    }
    const double t = std::atan2(q, p);
    if (t > 0 && t < quarter && std::hypot(p, q) > value) {
        best = t;
    }
    return best;
}

}  // namespace internal

/// Maximum of experimental_chsh_of over alpha, beta in [0, pi/2]: grid search followed by exact coordinate
/// ascent (each coordinate enters as a single sinusoid).
inline ChshOptimum max_experimental_chsh_of(const CorrelationVector &c, std::size_t grid_steps = 64) {
    if (grid_steps < 8) {
        throw std::invalid_argument("max_experimental_chsh_of: grid_steps must be at least 8");
    }
    const double h = std::numbers::pi / 2 / static_cast<double>(grid_steps);
    ChshOptimum best{-INFINITY, 0, 0};
    for (std::size_t i = 0; i <= grid_steps; i++) {
        for (std::size_t j = 0; j <= grid_steps; j++) {
            const AnglePair a{h * static_cast<double>(i), h * static_cast<double>(j)};
            const double v = experimental_chsh_of(c, a);
            if (v > best.value) {
                best = {v, a.alpha, a.beta};
            }
        }
    }
    AnglePair a{best.alpha, best.beta};
    for (int iter = 0; iter < 200; iter++) {
        a.alpha = internal::best_quarter_angle(
            std::cos(a.beta) * c.xx + std::sin(a.beta) * c.xy, std::cos(a.beta) * c.yx - std::sin(a.beta) * c.yy);
        a.beta = internal::best_quarter_angle(
            std::cos(a.alpha) * c.xx + std::sin(a.alpha) * c.yx, std::cos(a.alpha) * c.xy - std::sin(a.alpha) * c.yy);
    }
    const double v = experimental_chsh_of(c, a);
    return v >= best.value ? ChshOptimum{v, a.alpha, a.beta} : best;
}

/// Maximum of experimental_chsh over alpha, beta in [0, pi/2].
inline ChshOptimum max_experimental_chsh(double phi, std::size_t grid_steps = 64) {
    return max_experimental_chsh_of(bell_family_correlations(phi), grid_steps);
}

inline double zero_probability_curve(double phi) {
    const double c = std::cos(phi);
    return 1 + c - c * c;
}

/// d/dphi of zero_probability_curve: sin phi (2 cos phi - 1).
inline double zero_probability_curve_slope(double phi) {
    return std::sin(phi) * (2 * std::cos(phi) - 1);
}

struct ZeroProbabilityPoint {
    double value = 0;
    AnglePair angles;
    PairOutcomeLabel outcome{1, 1, -1, -1};
    /// Probability of `outcome`; zero up to rounding.
    double probability = 0;
};

/// Experimental CHSH of the Bell family state under the visibilities alpha = beta = phi / 2, for which
/// alpha + beta = phi makes the selected outcome's probability (1 - cos(alpha + beta - phi)) / 16 vanish.
inline ZeroProbabilityPoint zero_probability_chsh(double phi) {
    ZeroProbabilityPoint z;
    z.angles = {phi / 2, phi / 2};
    z.value = experimental_chsh(phi, z.angles);
    z.outcome = selected_outcome(z.angles);
    const auto d = pair_distribution_formula(
        bell_family_correlations(phi), VisibilityPair::saturated(z.angles.alpha),
        VisibilityPair::saturated(z.angles.beta));
    z.probability = d[z.outcome];
    return z;
}

struct CurveMaximum {
    double phi = 0;
    double value = 0;
};

/// Maximum of zero_probability_curve over phi in [0, pi]: grid of the given step, then bisection on the
/// analytic slope inside the neighbouring cells.
inline CurveMaximum zero_probability_curve_max(double step = 1e-4) {
    if (!(step > 0)) {
        throw std::invalid_argument("zero_probability_curve_max: step must be positive");
    }
    const auto points = static_cast<std::size_t>(std::floor(std::numbers::pi / step)) + 1;
    CurveMaximum best{0, -INFINITY};
    for (std::size_t k = 0; k < points; k++) {
        const double phi = step * static_cast<double>(k);
        const double v = zero_probability_curve(phi);
        if (v > best.value) {
            best = {phi, v};
        }
    }
    const double lo = std::max(0.0, best.phi - step);
    const double hi = std::min(std::numbers::pi, best.phi + step);
    if (zero_probability_curve_slope(lo) > 0 && zero_probability_curve_slope(hi) < 0) {
        const double phi = bisect_root(zero_probability_curve_slope, lo, hi);
        if (zero_probability_curve(phi) >= best.value) {
            best = {phi, zero_probability_curve(phi)};
        }
    }
    return best;
}

/// Grid maximum of experimental_chsh along alpha + beta = phi with alpha, beta in [0, pi/2].
/// Throws std::invalid_argument if phi is outside [0, pi].
inline ChshOptimum constrained_experimental_max(double phi, double step = 1e-4) {
    const double quarter = std::numbers::pi / 2;
    const double lo = std::max(0.0, phi - quarter);
    const double hi = std::min(quarter, phi);
    if (!(lo <= hi) || !(step > 0)) {
        throw std::invalid_argument("constrained_experimental_max: phi must lie in [0, pi]");
    }
    ChshOptimum best{-INFINITY, 0, 0};
    const auto points = static_cast<std::size_t>(std::floor((hi - lo) / step)) + 1;
    for (std::size_t k = 0; k <= points; k++) {
        const double alpha = std::min(hi, lo + step * static_cast<double>(k));
        const double v = experimental_chsh(phi, {alpha, phi - alpha});
        if (v > best.value) {
            best = {v, alpha, phi - alpha};
        }
    }
    return best;
}

namespace internal {

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace internal

/// FNV-1a digest of a matrix's entry bits; identifies a state in reports.
inline std::string state_digest(const Matrix4 &m) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto &z : m.entries()) {
        for (double part : {z.real(), z.imag()}) {
            std::uint64_t bits;
            std::memcpy(&bits, &part, sizeof(bits));
            for (int b = 0; b < 8; b++) {
                h ^= (bits >> (8 * b)) & 0xff;
                h *= 0x100000001b3ull;
            }
        }
    }
    return internal::hex64(h);
}

struct ViolationSearchResult {
    double max_tight_lhs = -INFINITY;
    double max_chsh = -INFINITY;
    std::size_t argmax_index = 0;
    std::string argmax_state_digest;
};

/// Largest tight_bound_lhs and chsh_value over n Haar-random pure states. State i is drawn from
/// s.fork(i), so the result is independent of the number of workers.
inline ViolationSearchResult bound_violation_search(std::size_t n_states, const SeededSampler &s, unsigned workers = 0) {
    if (n_states < 1) {
        throw std::invalid_argument("bound_violation_search: need at least one state");
    }
    struct Sample {
        double tight;
        double chsh;
    };
    const auto samples = parallel_map(
        n_states,
        [&](std::size_t i) {
            SeededSampler local = s.fork(i);
            const auto c = correlations_of_state(haar_random_pure_state(local));
            return Sample{tight_bound_lhs(c), chsh_value(c)};
        },
        workers);
    ViolationSearchResult r;
    for (std::size_t i = 0; i < n_states; i++) {
        if (samples[i].tight > r.max_tight_lhs) {
            r.max_tight_lhs = samples[i].tight;
            r.argmax_index = i;
        }
        r.max_chsh = std::max(r.max_chsh, samples[i].chsh);
    }
    SeededSampler again = s.fork(r.argmax_index);
    r.argmax_state_digest = state_digest(haar_random_pure_state(again).matrix());
    return r;
}

}  // namespace jointlab
