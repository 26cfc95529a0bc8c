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
#include <numbers>
#include <stdexcept>
#include <string>

#include "jointlab/joint_measurement.hpp"
#include "jointlab/matrix.hpp"

namespace jointlab {

/// Validated two-qubit density operator: Hermitian and unit trace within 1e-12, PSD within 1e-10.
class DensityOperator4 {
   public:
    static constexpr double kHermitianTolerance = 1e-12;
    static constexpr double kTraceTolerance = 1e-12;
    static constexpr double kPositivityTolerance = 1e-10;

    /// Throws std::invalid_argument if `m` is not a valid state.
    static DensityOperator4 from_matrix(const Matrix4 &m) {
        if (!m.is_finite()) {
            throw std::invalid_argument("DensityOperator4: non-finite entry");
        }
        if (!m.is_hermitian(kHermitianTolerance)) {
            throw std::invalid_argument("DensityOperator4: matrix is not Hermitian");
        }
        if (!m.is_unit_trace(kTraceTolerance)) {
            throw std::invalid_argument(
                "DensityOperator4: trace is " + std::to_string(trace(m).real()) + ", expected 1");
        }
        if (!is_positive_semidefinite(m, kPositivityTolerance)) {
            throw std::invalid_argument("DensityOperator4: matrix has a negative eigenvalue");
        }
        return DensityOperator4(m);
    }

    /// Pure state |psi><psi| of the normalized ket. Throws on a zero vector.
    static DensityOperator4 from_ket(Ket<4> ket) {
        double norm2 = 0;
        for (const auto &a : ket) {
            norm2 += std::norm(a);
        }
        if (!(norm2 > 0) || !std::isfinite(norm2)) {
            throw std::invalid_argument("DensityOperator4: cannot normalize ket");
        }
        const double scale = 1 / std::sqrt(norm2);
        for (auto &a : ket) {
            a *= scale;
        }
        return from_matrix(outer_product(ket));
    }

    static DensityOperator4 maximally_mixed() {
        return DensityOperator4(0.25 * Matrix4::identity());
    }

    /// Convex combination sum_k w_k rho_k. Weights must be non-negative and sum to 1.
    template <std::size_t K>
    static DensityOperator4 mixture(const std::array<double, K> &weights, const std::array<DensityOperator4, K> &states) {
        Matrix4 m;
        for (std::size_t k = 0; k < K; k++) {
            if (!(weights[k] >= 0)) {
                throw std::invalid_argument("DensityOperator4::mixture: negative weight");
            }
            m += weights[k] * states[k].matrix();
        }
        return from_matrix(m);
    }

    const Matrix4 &matrix() const {
        return mat_;
    }

    double purity() const {
        return trace_of_product(mat_, mat_).real();
    }

    /// Expectation value Tr(rho op).
    Complex expectation(const Matrix4 &op) const {
        return trace_of_product(mat_, op);
    }

   private:
    explicit DensityOperator4(const Matrix4 &m) : mat_(m) {
    }
    Matrix4 mat_;
};

/// The four correlations <X(x)X>, <X(x)Y>, <Y(x)X>, <Y(x)Y>. First letter refers to qubit A.
struct CorrelationVector {
    double xx = 0;
    double xy = 0;
    double yx = 0;
    double yy = 0;

    bool is_bounded(double tol = kDefaultTolerance) const {
        for (double c : {xx, xy, yx, yy}) {
            if (!(std::abs(c) <= 1 + tol)) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const CorrelationVector &, const CorrelationVector &) = default;
};

/// Outcome (x_A, y_A, x_B, y_B) of two local joint measurements.
class PairOutcomeLabel {
   public:
    constexpr PairOutcomeLabel(int xa, int ya, int xb, int yb) : a_(xa, ya), b_(xb, yb) {
    }
    constexpr PairOutcomeLabel(OutcomeLabel a, OutcomeLabel b) : a_(a), b_(b) {
    }

    constexpr int xa() const {
        return a_.x();
    }
    constexpr int ya() const {
        return a_.y();
    }
    constexpr int xb() const {
        return b_.x();
    }
    constexpr int yb() const {
        return b_.y();
    }
    constexpr OutcomeLabel a() const {
        return a_;
    }
    constexpr OutcomeLabel b() const {
        return b_;
    }

    /// Fixed ordering used for storage and inverse-CDF sampling: a.index() * 4 + b.index(),
    /// so (+1,+1,+1,+1) is 0 and (-1,-1,-1,-1) is 15.
    constexpr std::size_t index() const {
        return a_.index() * 4 + b_.index();
    }
    static constexpr PairOutcomeLabel from_index(std::size_t k) {
        return {OutcomeLabel::from_index(k / 4), OutcomeLabel::from_index(k % 4)};
    }
    static constexpr std::array<PairOutcomeLabel, 16> all() {
        std::array<PairOutcomeLabel, 16> out{
            from_index(0), from_index(1), from_index(2),  from_index(3),  from_index(4),  from_index(5),
            from_index(6), from_index(7), from_index(8),  from_index(9),  from_index(10), from_index(11),
            from_index(12), from_index(13), from_index(14), from_index(15)};
        return out;
    }

    std::string str() const {
        auto sign = [](int v) {
            return v > 0 ? "+1" : "-1";
        };
        return std::string("(") + sign(xa()) + "," + sign(ya()) + "," + sign(xb()) + "," + sign(yb()) + ")";
    }

    friend constexpr bool operator==(const PairOutcomeLabel &, const PairOutcomeLabel &) = default;

   private:
    OutcomeLabel a_;
    OutcomeLabel b_;
};

/// Probabilities over the sixteen pair outcomes, indexed by PairOutcomeLabel::index().
class PairOutcomeDistribution {
   public:
    PairOutcomeDistribution(const std::array<double, 16> &p, bool hypothetical) : p_(p), hypothetical_(hypothetical) {
    }

    double operator[](PairOutcomeLabel o) const {
        return p_[o.index()];
    }
    const std::array<double, 16> &probabilities() const {
        return p_;
    }
    bool hypothetical() const {
        return hypothetical_;
    }
    double min() const {
        double m = p_[0];
        for (double v : p_) {
            m = std::min(m, v);
        }
        return m;
    }
    double sum() const {
        double s = 0;
        for (double v : p_) {
            s += v;
        }
        return s;
    }
    bool has_negative(double tol = kDefaultTolerance) const {
        return min() < -tol;
    }

    /// Distribution of qubit A's outcomes, summing over B.
    SingleOutcomeDistribution marginal_a() const {
        std::array<double, 4> m{};
        for (std::size_t k = 0; k < 16; k++) {
            m[k / 4] += p_[k];
        }
        return {m, hypothetical_};
    }
    SingleOutcomeDistribution marginal_b() const {
        std::array<double, 4> m{};
        for (std::size_t k = 0; k < 16; k++) {
            m[k % 4] += p_[k];
        }
        return {m, hypothetical_};
    }

   private:
    std::array<double, 16> p_;
    bool hypothetical_;
};

/// Outcome function of one side: 1, x, y or x*y.
enum class OutcomeFactor { one, x, y, xy };

inline int factor_value(OutcomeFactor f, OutcomeLabel o) {
    switch (f) {
        case OutcomeFactor::one:
            return 1;
        case OutcomeFactor::x:
            return o.x();
        case OutcomeFactor::y:
            return o.y();
        case OutcomeFactor::xy:
            return o.x() * o.y();
    }
    return 0;
}

inline const char *factor_name(OutcomeFactor f) {
    switch (f) {
        case OutcomeFactor::one:
            return "1";
        case OutcomeFactor::x:
            return "x";
        case OutcomeFactor::y:
            return "y";
        case OutcomeFactor::xy:
            return "xy";
    }
    return "?";
}

/// Selects the moment <f_A f_B>.
struct MomentSpec {
    OutcomeFactor a = OutcomeFactor::one;
    OutcomeFactor b = OutcomeFactor::one;

    int value(PairOutcomeLabel o) const {
        return factor_value(a, o.a()) * factor_value(b, o.b());
    }
    std::string name() const {
        return std::string("<") + factor_name(a) + "_A " + factor_name(b) + "_B>";
    }

    /// All 15 non-trivial moments, i.e. every spec except (one, one).
    static std::array<MomentSpec, 15> nontrivial() {
        std::array<MomentSpec, 15> out{};
        std::size_t k = 0;
        for (auto fa : {OutcomeFactor::one, OutcomeFactor::x, OutcomeFactor::y, OutcomeFactor::xy}) {
            for (auto fb : {OutcomeFactor::one, OutcomeFactor::x, OutcomeFactor::y, OutcomeFactor::xy}) {
                if (fa != OutcomeFactor::one || fb != OutcomeFactor::one) {
                    out[k++] = {fa, fb};
                }
            }
        }
        return out;
    }
};

/// (|00> + e^{i phi} |11>) / sqrt(2); phi is stored reduced to [0, 2 pi).
class BellFamilyState {
   public:
    explicit BellFamilyState(double phi) : phi_(std::fmod(phi, 2 * std::numbers::pi)) {
        if (!std::isfinite(phi)) {
            throw std::invalid_argument("BellFamilyState: phase must be finite");
        }
        if (phi_ < 0) {
            phi_ += 2 * std::numbers::pi;
        }
    }

    double phi() const {
        return phi_;
    }

    Ket<4> ket() const {
        const double h = 1 / std::numbers::sqrt2;
        return {Complex{h, 0}, 0, 0, std::polar(h, phi_)};
    }

    DensityOperator4 to_density() const {
        return DensityOperator4::from_ket(ket());
    }

   private:
    double phi_;
};

enum class BellBasis { phi_plus, phi_minus, psi_plus, psi_minus };

/// (|00> +- |11>)/sqrt 2 and (|01> +- |10>)/sqrt 2.
inline Ket<4> bell_basis_ket(BellBasis which) {
    const double h = 1 / std::numbers::sqrt2;
    switch (which) {
        case BellBasis::phi_plus:
            return {h, 0, 0, h};
        case BellBasis::phi_minus:
            return {h, 0, 0, -h};
        case BellBasis::psi_plus:
            return {0, h, h, 0};
        case BellBasis::psi_minus:
            return {0, h, -h, 0};
    }
    throw std::invalid_argument("bell_basis_ket: unknown state");
}

namespace internal {

inline const std::array<Matrix4, 4> &correlation_operators() {
    static const std::array<Matrix4, 4> ops{
        tensor_product(pauli(Pauli::X), pauli(Pauli::X)),
        tensor_product(pauli(Pauli::X), pauli(Pauli::Y)),
        tensor_product(pauli(Pauli::Y), pauli(Pauli::X)),
        tensor_product(pauli(Pauli::Y), pauli(Pauli::Y)),
    };
    return ops;
}

inline double real_expectation(const DensityOperator4 &rho, const Matrix4 &op) {
    const Complex v = rho.expectation(op);
    if (std::abs(v.imag()) >= 1e-12) {
        throw std::logic_error("expectation of a Hermitian observable has imaginary part " + std::to_string(v.imag()));
    }
    return v.real();
}

}  // namespace internal

/// c_ij = Re Tr(rho sigma_i (x) sigma_j) for i, j in {X, Y}.
inline CorrelationVector correlations_of_state(const DensityOperator4 &rho) {
    const auto &ops = internal::correlation_operators();
    return {
        internal::real_expectation(rho, ops[0]),
        internal::real_expectation(rho, ops[1]),
        internal::real_expectation(rho, ops[2]),
        internal::real_expectation(rho, ops[3]),
    };
}

struct LocalMeans {
    double ax = 0;
    double ay = 0;
    double bx = 0;
    double by = 0;
};

inline LocalMeans local_means_of_state(const DensityOperator4 &rho) {
    const Matrix2 id = pauli(Pauli::I);
    return {
        internal::real_expectation(rho, tensor_product(pauli(Pauli::X), id)),
        internal::real_expectation(rho, tensor_product(pauli(Pauli::Y), id)),
        internal::real_expectation(rho, tensor_product(id, pauli(Pauli::X))),
        internal::real_expectation(rho, tensor_product(id, pauli(Pauli::Y))),
    };
}

/// Partial trace over qubit B.
inline Matrix2 reduced_state_a(const DensityOperator4 &rho) {
    Matrix2 out;
    for (std::size_t r = 0; r < 2; r++) {
        for (std::size_t c = 0; c < 2; c++) {
            out(r, c) = rho.matrix()(2 * r, 2 * c) + rho.matrix()(2 * r + 1, 2 * c + 1);
        }
    }
    return out;
}

/// Partial trace over qubit A.
inline Matrix2 reduced_state_b(const DensityOperator4 &rho) {
    Matrix2 out;
    for (std::size_t r = 0; r < 2; r++) {
        for (std::size_t c = 0; c < 2; c++) {
            out(r, c) = rho.matrix()(r, c) + rho.matrix()(2 + r, 2 + c);
        }
    }
    return out;
}

/// P(o) = Tr(rho E_A(x_A, y_A) (x) E_B(x_B, y_B)), valid for any state.
inline PairOutcomeDistribution pair_distribution_trace(
    const DensityOperator4 &rho, const VisibilityPair &va, const VisibilityPair &vb) {
    std::array<Matrix2, 4> ea{};
    std::array<Matrix2, 4> eb{};
    for (auto o : OutcomeLabel::all()) {
        ea[o.index()] = povm_element(va, o);
        eb[o.index()] = povm_element(vb, o);
    }
    std::array<double, 16> p{};
    for (auto o : PairOutcomeLabel::all()) {
        p[o.index()] = trace_of_product(rho.matrix(), tensor_product(ea[o.a().index()], eb[o.b().index()])).real();
    }
    return {p, !va.is_admissible() || !vb.is_admissible()};
}

/// Closed form for states whose local X and Y means all vanish:
///
///   P = (1 + x_A x_B Vx(A) Vx(B) c_xx + x_A y_B Vx(A) Vy(B) c_xy
///          + y_A x_B Vy(A) Vx(B) c_yx + y_A y_B Vy(A) Vy(B) c_yy) / 16.
///
/// Flagged hypothetical when any visibility pair is inadmissible or any probability is negative.
inline PairOutcomeDistribution pair_distribution_formula(
    const CorrelationVector &c, const VisibilityPair &va, const VisibilityPair &vb) {
    std::array<double, 16> p{};
    bool negative = false;
    for (auto o : PairOutcomeLabel::all()) {
        const double v = (1 + o.xa() * o.xb() * va.vx() * vb.vx() * c.xx + o.xa() * o.yb() * va.vx() * vb.vy() * c.xy +
                          o.ya() * o.xb() * va.vy() * vb.vx() * c.yx + o.ya() * o.yb() * va.vy() * vb.vy() * c.yy) /
                         16;
        p[o.index()] = v;
        negative = negative || v < -kDefaultTolerance;
    }
    return {p, negative || !va.is_admissible() || !vb.is_admissible()};
}

/// <f_A f_B> under the distribution.
inline double pair_moment(const PairOutcomeDistribution &d, const MomentSpec &spec) {
    double m = 0;
    for (auto o : PairOutcomeLabel::all()) {
        m += spec.value(o) * d[o];
    }
    return m;
}

/// Correlations of the Bell family state: (cos phi, sin phi, sin phi, -cos phi).
inline CorrelationVector bell_family_correlations(double phi) {
    return {std::cos(phi), std::sin(phi), std::sin(phi), -std::cos(phi)};
}

}  // namespace jointlab
