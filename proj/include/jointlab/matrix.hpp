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
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

namespace jointlab {

using Complex = std::complex<double>;

/// Absolute tolerance used when a caller does not supply one. All quantities handled here are O(1).
inline constexpr double kDefaultTolerance = 1e-12;

/// Dense N x N complex matrix, row-major. Used for qubit (N = 2) and two-qubit (N = 4) operators.
template <std::size_t N>
class SquareMatrix {
    static_assert(N > 0, "matrix dimension must be positive");

   public:
    static constexpr std::size_t dim = N;

    constexpr SquareMatrix() = default;

    /// Builds a matrix from nested rows. Throws std::invalid_argument on a shape mismatch or a non-finite entry.
    SquareMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        if (rows.size() != N) {
            throw std::invalid_argument("SquareMatrix: expected " + std::to_string(N) + " rows");
        }
        std::size_t r = 0;
        for (const auto &row : rows) {
            if (row.size() != N) {
                throw std::invalid_argument("SquareMatrix: expected " + std::to_string(N) + " columns");
            }
            std::size_t c = 0;
            for (const auto &v : row) {
                entries_[r * N + c] = v;
                c++;
            }
            r++;
        }
        if (!is_finite()) {
            throw std::invalid_argument("SquareMatrix: non-finite entry");
        }
    }

    static SquareMatrix identity() {
        SquareMatrix m;
        for (std::size_t k = 0; k < N; k++) {
            m(k, k) = 1.0;
        }
        return m;
    }

    Complex &operator()(std::size_t row, std::size_t col) {
        return entries_[row * N + col];
    }
    const Complex &operator()(std::size_t row, std::size_t col) const {
        return entries_[row * N + col];
    }

    const std::array<Complex, N * N> &entries() const {
        return entries_;
    }

    SquareMatrix adjoint() const {
        SquareMatrix m;
        for (std::size_t r = 0; r < N; r++) {
            for (std::size_t c = 0; c < N; c++) {
                m(c, r) = std::conj((*this)(r, c));
            }
        }
        return m;
    }

    bool is_finite() const {
        return std::all_of(entries_.begin(), entries_.end(), [](const Complex &v) {
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        });
    }

    bool is_hermitian(double tol = kDefaultTolerance) const {
        for (std::size_t r = 0; r < N; r++) {
            for (std::size_t c = r; c < N; c++) {
                if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

    bool is_unit_trace(double tol = kDefaultTolerance) const {
        Complex t = 0;
        for (std::size_t k = 0; k < N; k++) {
            t += (*this)(k, k);
        }
        return std::abs(t - 1.0) <= tol;
    }

    /// Largest entrywise magnitude of (this - other).
    double max_abs_diff(const SquareMatrix &other) const {
        double m = 0;
        for (std::size_t k = 0; k < N * N; k++) {
            m = std::max(m, std::abs(entries_[k] - other.entries_[k]));
        }
        return m;
    }

    SquareMatrix &operator+=(const SquareMatrix &other) {
        for (std::size_t k = 0; k < N * N; k++) {
            entries_[k] += other.entries_[k];
        }
        return *this;
    }
    SquareMatrix &operator-=(const SquareMatrix &other) {
        for (std::size_t k = 0; k < N * N; k++) {
            entries_[k] -= other.entries_[k];
        }
        return *this;
    }
    SquareMatrix &operator*=(Complex scale) {
        for (auto &v : entries_) {
            v *= scale;
        }
        return *this;
    }

    friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix &b) {
        return a += b;
    }
    friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix &b) {
        return a -= b;
    }
    friend SquareMatrix operator*(Complex scale, SquareMatrix a) {
        return a *= scale;
    }
    friend SquareMatrix operator*(SquareMatrix a, Complex scale) {
        return a *= scale;
    }
    friend bool operator==(const SquareMatrix &a, const SquareMatrix &b) = default;

    std::string str() const {
        std::ostringstream out;
        out << "[";
        for (std::size_t r = 0; r < N; r++) {
            out << (r ? ",\n [" : "[");
            for (std::size_t c = 0; c < N; c++) {
                out << (c ? ", " : "") << (*this)(r, c);
            }
            out << "]";
        }
        out << "]";
        return out.str();
    }

   private:
    std::array<Complex, N * N> entries_{};
};

using Matrix2 = SquareMatrix<2>;
using Matrix4 = SquareMatrix<4>;

template <std::size_t N>
using Ket = std::array<Complex, N>;

enum class Pauli { I, X, Y, Z };

/// Pauli operators in the basis {|0>, |1>} with X|0> = |1> and Y|0> = i|1>.
inline Matrix2 pauli(Pauli which) {
    const Complex i{0, 1};
    switch (which) {
        case Pauli::I:
            return {{1, 0}, {0, 1}};
        case Pauli::X:
            return {{0, 1}, {1, 0}};
        case Pauli::Y:
            return {{0, -i}, {i, 0}};
        case Pauli::Z:
            return {{1, 0}, {0, -1}};
    }
    throw std::invalid_argument("pauli: unknown operator");
}

/// Kronecker product. Row index of the result is i_a * B + i_b, so the two-qubit basis order is |00>,|01>,|10>,|11>.
template <std::size_t A, std::size_t B>
SquareMatrix<A * B> tensor_product(const SquareMatrix<A> &a, const SquareMatrix<B> &b) {
    SquareMatrix<A * B> m;
    for (std::size_t ra = 0; ra < A; ra++) {
        for (std::size_t ca = 0; ca < A; ca++) {
            const Complex s = a(ra, ca);
            for (std::size_t rb = 0; rb < B; rb++) {
                for (std::size_t cb = 0; cb < B; cb++) {
                    m(ra * B + rb, ca * B + cb) = s * b(rb, cb);
                }
            }
        }
    }
    return m;
}

/// Matrix product. Operands of different dimension do not type-check.
template <std::size_t N>
SquareMatrix<N> matmul(const SquareMatrix<N> &a, const SquareMatrix<N> &b) {
    SquareMatrix<N> m;
    for (std::size_t r = 0; r < N; r++) {
        for (std::size_t k = 0; k < N; k++) {
            const Complex s = a(r, k);
            if (s == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < N; c++) {
                m(r, c) += s * b(k, c);
            }
        }
    }
    return m;
}

template <std::size_t N>
SquareMatrix<N> operator*(const SquareMatrix<N> &a, const SquareMatrix<N> &b) {
    return matmul(a, b);
}

template <std::size_t N>
Complex trace(const SquareMatrix<N> &a) {
    Complex t = 0;
    for (std::size_t k = 0; k < N; k++) {
        t += a(k, k);
    }
    return t;
}

/// Tr(a b) without forming the product.
template <std::size_t N>
Complex trace_of_product(const SquareMatrix<N> &a, const SquareMatrix<N> &b) {
    Complex t = 0;
    for (std::size_t r = 0; r < N; r++) {
        for (std::size_t k = 0; k < N; k++) {
            t += a(r, k) * b(k, r);
        }
    }
    return t;
}

/// |ket><ket|
template <std::size_t N>
SquareMatrix<N> outer_product(const Ket<N> &ket) {
    SquareMatrix<N> m;
    for (std::size_t r = 0; r < N; r++) {
        for (std::size_t c = 0; c < N; c++) {
            m(r, c) = ket[r] * std::conj(ket[c]);
        }
    }
    return m;
}

/// Eigenvalues sorted ascending.
template <std::size_t N>
struct Spectrum {
    std::array<double, N> eigenvalues{};

    double min() const {
        return eigenvalues.front();
    }
    double max() const {
        return eigenvalues.back();
    }
    double sum() const {
        double s = 0;
        for (double v : eigenvalues) {
            s += v;
        }
        return s;
    }
};

/// Spectrum plus the unitary whose k-th column is the eigenvector of spectrum.eigenvalues[k].
template <std::size_t N>
struct Eigensystem {
    Spectrum<N> spectrum;
    SquareMatrix<N> vectors;
};

/// Thrown when the Jacobi iteration hits its sweep cap.
class ConvergenceError : public std::runtime_error {
   public:
    ConvergenceError(double residual, int sweeps)
        : std::runtime_error(
              "hermitian_eigensystem: no convergence after " + std::to_string(sweeps) +
              " sweeps (off-diagonal residual " + std::to_string(residual) + ")"),
          residual_(residual) {
    }
    double residual() const {
        return residual_;
    }

   private:
    double residual_;
};

inline constexpr int kMaxJacobiSweeps = 100;

namespace internal {

template <std::size_t N>
double max_off_diagonal(const SquareMatrix<N> &a) {
    double m = 0;
    for (std::size_t r = 0; r < N; r++) {
        for (std::size_t c = 0; c < N; c++) {
            if (r != c) {
                m = std::max(m, std::abs(a(r, c)));
            }
        }
    }
    return m;
}

}  // namespace internal

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of a(p, q) with a diagonal unitary and then applies the real
/// symmetric Jacobi rotation that zeroes it. Iteration stops once every off-diagonal magnitude is below
/// `tol`. Throws std::invalid_argument for non-Hermitian input and ConvergenceError after
/// kMaxJacobiSweeps sweeps.
template <std::size_t N>
Eigensystem<N> hermitian_eigensystem(const SquareMatrix<N> &input, double tol = kDefaultTolerance) {
    if (!input.is_finite()) {
        throw std::invalid_argument("hermitian_eigensystem: non-finite input");
    }
    if (!input.is_hermitian(tol)) {
        throw std::invalid_argument("hermitian_eigensystem: input is not Hermitian");
    }
    // Symmetrize so the rotations act on an exactly Hermitian matrix.
    SquareMatrix<N> a = 0.5 * (input + input.adjoint());
    SquareMatrix<N> v = SquareMatrix<N>::identity();

    int sweeps = 0;
    while (internal::max_off_diagonal(a) >= tol) {
        if (sweeps == kMaxJacobiSweeps) {
            throw ConvergenceError(internal::max_off_diagonal(a), sweeps);
        }
        sweeps++;
        for (std::size_t p = 0; p + 1 < N; p++) {
            for (std::size_t q = p + 1; q < N; q++) {
                const double mag = std::abs(a(p, q));
                if (mag == 0) {
                    continue;
                }
                const Complex phase = a(p, q) / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2 * mag);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;

                // U = D R with D = diag(.., conj(phase) at q, ..); a <- U^dagger a U.
                const Complex u_qp = -s * std::conj(phase);
                const Complex u_qq = c * std::conj(phase);
                for (std::size_t k = 0; k < N; k++) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * c + akq * u_qp;
                    a(k, q) = akp * s + akq * u_qq;
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * c + vkq * u_qp;
                    v(k, q) = vkp * s + vkq * u_qq;
                }
                for (std::size_t k = 0; k < N; k++) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(u_qp) * aqk;
                    a(q, k) = s * apk + std::conj(u_qq) * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
            }
        }
    }

    std::array<std::size_t, N> order{};
    for (std::size_t k = 0; k < N; k++) {
        order[k] = k;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });
    Eigensystem<N> result;
    for (std::size_t k = 0; k < N; k++) {
        result.spectrum.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < N; r++) {
            result.vectors(r, k) = v(r, order[k]);
        }
    }
    return result;
}

template <std::size_t N>
Spectrum<N> hermitian_eigenvalues(const SquareMatrix<N> &a, double tol = kDefaultTolerance) {
    return hermitian_eigensystem(a, tol).spectrum;
}

/// True iff the smallest eigenvalue is >= -tol.
template <std::size_t N>
bool is_positive_semidefinite(const SquareMatrix<N> &a, double tol = kDefaultTolerance) {
    return hermitian_eigenvalues(a, std::min(tol, kDefaultTolerance)).min() >= -tol;
}

}  // namespace jointlab
