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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "jointlab/optimize.hpp"
#include "jointlab/pair_statistics.hpp"

namespace jointlab {

/// Angles (alpha, beta) of the uncertainty-saturating visibilities on sides A and B. Unrestricted range.
struct AnglePair {
    double alpha = 0;
    double beta = 0;
};

/// Signed visibilities (V_x(A), V_y(A), V_x(B), V_y(B)) carrying the outcome signs of one pair outcome.
struct SignedVisibilities {
    double ax = 0;
    double ay = 0;
    double bx = 0;
    double by = 0;

    bool is_admissible(double tol = kDefaultTolerance) const {
        return ax * ax + ay * ay <= 1 + tol && bx * bx + by * by <= 1 + tol;
    }
};

/// (x_A cos alpha, y_A sin alpha, -x_B cos beta, -y_B sin beta).
inline SignedVisibilities signed_visibilities(const AnglePair &a, PairOutcomeLabel o) {
    return {
        o.xa() * std::cos(a.alpha),
        o.ya() * std::sin(a.alpha),
        -o.xb() * std::cos(a.beta),
        -o.yb() * std::sin(a.beta),
    };
}

/// The outcome for which signed_visibilities(a, o) are all non-negative:
/// (sgn cos alpha, sgn sin alpha, -sgn cos beta, -sgn sin beta), with sgn(0) = +1.
inline PairOutcomeLabel selected_outcome(const AnglePair &a) {
    auto sgn = [](double v) {
        return v < 0 ? -1 : 1;
    };
    return {sgn(std::cos(a.alpha)), sgn(std::sin(a.alpha)), -sgn(std::cos(a.beta)), -sgn(std::sin(a.beta))};
}

/// V_x(A) V_x(B) c_xx + V_x(A) V_y(B) c_xy + V_y(A) V_x(B) c_yx + V_y(A) V_y(B) c_yy.
///
/// With sv = signed_visibilities(a, o) and alpha, beta in [0, pi/2], the probability of outcome o under
/// the visibilities (cos alpha, sin alpha), (cos beta, sin beta) is (1 - lhs) / 16, so lhs <= 1 is the
/// positivity condition of that outcome.
inline double outcome_bound_lhs(const CorrelationVector &c, const SignedVisibilities &sv) {
    return sv.ax * sv.bx * c.xx + sv.ax * sv.by * c.xy + sv.ay * sv.bx * c.yx + sv.ay * sv.by * c.yy;
}

/// The angle form of the positivity condition; quantum correlations keep it <= 2 for every (alpha, beta).
inline double angle_inequality_lhs(const CorrelationVector &c, const AnglePair &a) {
    const double sum = a.alpha + a.beta;
    const double diff = a.alpha - a.beta;
    return std::cos(sum) * (c.xx - c.yy) + std::sin(sum) * (c.xy + c.yx) + std::cos(diff) * (c.xx + c.yy) -
           std::sin(diff) * (c.xy - c.yx);
}

/// sqrt((c_xx - c_yy)^2 + (c_xy + c_yx)^2) + sqrt((c_xx + c_yy)^2 + (c_xy - c_yx)^2); at most 2 for quantum states.
inline double tight_bound_lhs(const CorrelationVector &c) {
    return std::hypot(c.xx - c.yy, c.xy + c.yx) + std::hypot(c.xx + c.yy, c.xy - c.yx);
}

/// (c_xx - c_yy)^2 + (c_xy + c_yx)^2; at most 4 for quantum states.
inline double simplified_bound_lhs(const CorrelationVector &c) {
    const double p = c.xx - c.yy;
    const double q = c.xy + c.yx;
    return p * p + q * q;
}

/// c_xx + c_xy + c_yx - c_yy; at most 2 sqrt(2) for quantum states.
inline double chsh_value(const CorrelationVector &c) {
    return c.xx + c.xy + c.yx - c.yy;
}

/// |<00|rho|11>| + |<10|rho|01>|; at most 1/2, and a quarter of tight_bound_lhs of the state's correlations.
inline double coherence_bound_lhs(const DensityOperator4 &rho) {
    return std::abs(rho.matrix()(0, 3)) + std::abs(rho.matrix()(2, 1));
}

struct AngleOptimum {
    double value = 0;
    AnglePair angles;
};

inline constexpr std::size_t kDefaultCoarseSteps = 64;
inline constexpr int kDefaultRefineIterations = 60;

/// Numerical supremum of angle_inequality_lhs over all (alpha, beta).
///
/// The objective separates in u = alpha + beta and v = alpha - beta, so the coarse grid is laid over
/// (u, v) in [0, 2 pi)^2 and each coordinate is then refined by golden-section search on its neighbouring
/// grid cells. Throws std::invalid_argument if coarse_steps < 8.
inline AngleOptimum sup_over_angles(
    const CorrelationVector &c,
    std::size_t coarse_steps = kDefaultCoarseSteps,
    int refine_iters = kDefaultRefineIterations) {
    if (coarse_steps < 8) {
        throw std::invalid_argument("sup_over_angles: coarse_steps must be at least 8");
    }
    auto objective = [&](double u, double v) {
        return angle_inequality_lhs(c, {(u + v) / 2, (u - v) / 2});
    };
    const double step = 2 * std::numbers::pi / static_cast<double>(coarse_steps);
    double best = -INFINITY;
    double u0 = 0;
    double v0 = 0;
    for (std::size_t i = 0; i < coarse_steps; i++) {
        for (std::size_t j = 0; j < coarse_steps; j++) {
            const double u = step * static_cast<double>(i);
            const double v = step * static_cast<double>(j);
            const double f = objective(u, v);
            if (f > best) {
                best = f;
                u0 = u;
                v0 = v;
            }
        }
    }
    const ScalarOptimum u_opt = golden_section_maximize(
        [&](double u) {
            return objective(u, v0);
        },
        u0 - step, u0 + step, refine_iters);
    const ScalarOptimum v_opt = golden_section_maximize(
        [&](double v) {
            return objective(u_opt.x, v);
        },
        v0 - step, v0 + step, refine_iters);
    AngleOptimum out;
    out.angles = {(u_opt.x + v_opt.x) / 2, (u_opt.x - v_opt.x) / 2};
    out.value = angle_inequality_lhs(c, out.angles);
    if (out.value < best) {
        out.angles = {(u0 + v0) / 2, (u0 - v0) / 2};
        out.value = best;
    }
    return out;
}

/// Values within this distance of a bound count as saturating it.
inline constexpr double kSaturationTolerance = 1e-6;

inline constexpr double kTightBound = 2;
inline constexpr double kSimplifiedBound = 4;
inline constexpr double kCirelsonBound = 2 * std::numbers::sqrt2;
inline constexpr double kCoherenceBound = 0.5;

/// All bound quantities of one state side by side.
struct BoundReport {
    CorrelationVector correlations;
    double tight_lhs = 0;
    double simplified_lhs = 0;
    double chsh = 0;
    double coherence_lhs = 0;
    double sup_angles = 0;
    bool tight_saturated = false;
    bool simplified_saturated = false;
    bool chsh_saturated = false;
    bool coherence_saturated = false;
};

inline BoundReport make_bound_report(const DensityOperator4 &rho, std::size_t coarse_steps = kDefaultCoarseSteps) {
    BoundReport r;
    r.correlations = correlations_of_state(rho);
    r.tight_lhs = tight_bound_lhs(r.correlations);
    r.simplified_lhs = simplified_bound_lhs(r.correlations);
    r.chsh = chsh_value(r.correlations);
    r.coherence_lhs = coherence_bound_lhs(rho);
    r.sup_angles = sup_over_angles(r.correlations, coarse_steps).value;
    r.tight_saturated = std::abs(r.tight_lhs - kTightBound) <= kSaturationTolerance;
    r.simplified_saturated = std::abs(r.simplified_lhs - kSimplifiedBound) <= kSaturationTolerance;
    r.chsh_saturated = std::abs(r.chsh - kCirelsonBound) <= kSaturationTolerance;
    r.coherence_saturated = std::abs(r.coherence_lhs - kCoherenceBound) <= kSaturationTolerance;
    return r;
}

}  // namespace jointlab
