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

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "jointlab/matrix.hpp"

namespace jointlab {

/// Visibilities (V_x, V_y) of a single-qubit joint measurement of X and Y.
///
/// Each visibility lies in [0, 1]. Pairs violating V_x^2 + V_y^2 <= 1 can be constructed, so that the
/// negative probabilities they would imply can be exhibited, but they report !is_admissible().
class VisibilityPair {
   public:
    VisibilityPair(double vx, double vy) : vx_(vx), vy_(vy) {
        if (!(vx >= 0 && vx <= 1) || !(vy >= 0 && vy <= 1)) {
            throw std::invalid_argument(
                "VisibilityPair: visibilities must lie in [0, 1], got (" + std::to_string(vx) + ", " +
                std::to_string(vy) + ")");
        }
    }

    /// The uncertainty-saturating pair (|cos angle|, |sin angle|).
    static VisibilityPair saturated(double angle) {
        return {std::min(1.0, std::abs(std::cos(angle))), std::min(1.0, std::abs(std::sin(angle)))};
    }

    double vx() const {
        return vx_;
    }
    double vy() const {
        return vy_;
    }

    bool is_admissible(double tol = kDefaultTolerance) const {
        return vx_ * vx_ + vy_ * vy_ <= 1 + tol;
    }

    friend bool operator==(const VisibilityPair &, const VisibilityPair &) = default;

   private:
    double vx_;
    double vy_;
};

/// Equatorial Bloch components (<X>, <Y>) of a qubit input state.
class BlochEquatorial {
   public:
    BlochEquatorial(double ex, double ey) : ex_(ex), ey_(ey) {
        if (!(ex >= -1 && ex <= 1) || !(ey >= -1 && ey <= 1)) {
            throw std::invalid_argument("BlochEquatorial: components must lie in [-1, 1]");
        }
    }

    double ex() const {
        return ex_;
    }
    double ey() const {
        return ey_;
    }

    bool is_physical(double tol = kDefaultTolerance) const {
        return ex_ * ex_ + ey_ * ey_ <= 1 + tol;
    }

    /// rho = (I + ex X + ey Y) / 2. Only a valid state when is_physical().
    Matrix2 density() const {
        return 0.5 * (pauli(Pauli::I) + ex_ * pauli(Pauli::X) + ey_ * pauli(Pauli::Y));
    }

   private:
    double ex_;
    double ey_;
};

/// Outcome pair (x, y) with x, y in {-1, +1}.
class OutcomeLabel {
   public:
    constexpr OutcomeLabel(int x, int y) : x_(x), y_(y) {
        if ((x != 1 && x != -1) || (y != 1 && y != -1)) {
            throw std::invalid_argument("OutcomeLabel: outcomes must be +1 or -1");
        }
    }

    constexpr int x() const {
        return x_;
    }
    constexpr int y() const {
        return y_;
    }

    /// Position in the fixed order (+1,+1), (+1,-1), (-1,+1), (-1,-1).
    constexpr std::size_t index() const {
        return (x_ < 0 ? 2 : 0) + (y_ < 0 ? 1 : 0);
    }
    static constexpr OutcomeLabel from_index(std::size_t k) {
        return {(k & 2) ? -1 : 1, (k & 1) ? -1 : 1};
    }
    static constexpr std::array<OutcomeLabel, 4> all() {
        return {from_index(0), from_index(1), from_index(2), from_index(3)};
    }

    friend constexpr bool operator==(const OutcomeLabel &, const OutcomeLabel &) = default;

   private:
    int x_;
    int y_;
};

/// Probabilities of the four outcomes of one joint measurement.
///
/// `hypothetical()` records that the distribution came from an inadmissible visibility pair or an
/// unphysical input; only such distributions may carry negative entries.
class SingleOutcomeDistribution {
   public:
    SingleOutcomeDistribution(const std::array<double, 4> &p, bool hypothetical) : p_(p), hypothetical_(hypothetical) {
    }

    double operator[](OutcomeLabel o) const {
        return p_[o.index()];
    }
    const std::array<double, 4> &probabilities() const {
        return p_;
    }
    bool hypothetical() const {
        return hypothetical_;
    }
    double min() const {
        return std::min(std::min(p_[0], p_[1]), std::min(p_[2], p_[3]));
    }
    double sum() const {
        return p_[0] + p_[1] + p_[2] + p_[3];
    }
    bool has_negative(double tol = kDefaultTolerance) const {
        return min() < -tol;
    }

   private:
    std::array<double, 4> p_;
    bool hypothetical_;
};

struct SingleMoments {
    double mean_x;
    double mean_y;
    double mean_xy;
};

/// E(x, y) = (I + x V_x X + y V_y Y) / 4. The four elements sum to the identity; they are all positive
/// semidefinite exactly when V_x^2 + V_y^2 <= 1.
inline Matrix2 povm_element(const VisibilityPair &v, OutcomeLabel o) {
    return 0.25 * (pauli(Pauli::I) + (o.x() * v.vx()) * pauli(Pauli::X) + (o.y() * v.vy()) * pauli(Pauli::Y));
}

/// P(x, y) = (1 + x V_x <X> + y V_y <Y>) / 4.
inline SingleOutcomeDistribution outcome_distribution(const VisibilityPair &v, const BlochEquatorial &s) {
    std::array<double, 4> p{};
    for (auto o : OutcomeLabel::all()) {
        p[o.index()] = 0.25 * (1 + o.x() * v.vx() * s.ex() + o.y() * v.vy() * s.ey());
    }
    return {p, !v.is_admissible() || !s.is_physical()};
}

/// Outcome probabilities Tr(rho E(x, y)) for an arbitrary 2x2 operator rho.
inline SingleOutcomeDistribution outcome_distribution_of(const Matrix2 &rho, const VisibilityPair &v) {
    std::array<double, 4> p{};
    for (auto o : OutcomeLabel::all()) {
        p[o.index()] = trace_of_product(rho, povm_element(v, o)).real();
    }
    return {p, !v.is_admissible()};
}

inline SingleMoments distribution_moments(const SingleOutcomeDistribution &d) {
    SingleMoments m{0, 0, 0};
    for (auto o : OutcomeLabel::all()) {
        const double p = d[o];
        m.mean_x += o.x() * p;
        m.mean_y += o.y() * p;
        m.mean_xy += o.x() * o.y() * p;
    }
    return m;
}

/// |V_x <X>| + |V_y <Y>|. All four outcome probabilities are non-negative iff this is at most 1.
inline double state_positivity_lhs(const VisibilityPair &v, const BlochEquatorial &s) {
    return std::abs(v.vx() * s.ex()) + std::abs(v.vy() * s.ey());
}

inline bool check_visibility_admissible(const VisibilityPair &v, double tol = kDefaultTolerance) {
    return v.is_admissible(tol);
}

/// <X>^2 + <Y>^2; at most 1 for every physical state.
inline double bloch_bound_lhs(const BlochEquatorial &s) {
    return s.ex() * s.ex() + s.ey() * s.ey();
}

}  // namespace jointlab
