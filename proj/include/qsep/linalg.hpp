// Copyright 2026 The qsep-mc Authors
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

// Dense complex linear algebra for the small matrices (n <= 8) that appear in
// two-party qubit/qutrit problems. Everything here is a pure function of its
// inputs.
//
// Composite index convention for bipartite operators: the basis vector
// |i>_A |mu>_B has index i * d_B + mu, i.e. subsystem A is the slow index.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsep/error.hpp"

namespace qsep {

using Complex = std::complex<double>;

/// |z| without the overflow guarding of std::abs (entries here are O(1)).
inline double modulus(const Complex& z) noexcept { return std::sqrt(std::norm(z)); }

class ComplexMatrix {
public:
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
        if (rows == 0 || cols == 0) {
            throw Error(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
        }
        data_.assign(rows * cols, Complex{});
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (rows == 0 || cols == 0) {
            throw Error(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
        }
        if (data_.size() != rows * cols) {
            throw Error(ErrorCode::DimensionMismatch, "entry count does not match rows * cols");
        }
    }

    /// Row-wise literal, e.g. ComplexMatrix{{1, 2}, {3, 4}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
        : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
        if (rows_ == 0 || cols_ == 0) {
            throw Error(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
        }
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) {
                throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> values) {
        ComplexMatrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<Complex> entries() noexcept { return data_; }
    std::span<const Complex> entries() const noexcept { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& other) {
        require_same_shape(other);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& other) {
        require_same_shape(other);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
        return *this;
    }

    ComplexMatrix& operator*=(Complex s) noexcept {
        for (auto& z : data_) z *= s;
        return *this;
    }

    ComplexMatrix& operator/=(Complex s) noexcept {
        for (auto& z : data_) z /= s;
        return *this;
    }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    void require_same_shape(const ComplexMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
        }
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> data_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
inline ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator/(ComplexMatrix a, Complex s) { return a /= s; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "inner dimensions differ in matrix product");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

/// Conjugate transpose.
inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

inline ComplexMatrix transpose(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
    return out;
}

/// m * m^dagger, made exactly Hermitian.
inline ComplexMatrix gram(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Complex acc{};
            for (std::size_t k = 0; k < m.cols(); ++k) acc += m(i, k) * std::conj(m(j, k));
            out(i, j) = acc;
            out(j, i) = std::conj(acc);
        }
        out(i, i) = out(i, i).real();
    }
    return out;
}

inline Complex trace(const ComplexMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "trace of a non-square matrix");
    Complex t{};
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

/// Induced infinity norm (maximum absolute row sum).
inline double norm_inf(const ComplexMatrix& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) row += modulus(m(i, j));
        best = std::max(best, row);
    }
    return best;
}

inline double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& z : m.entries()) s += std::norm(z);
    return std::sqrt(s);
}

/// Largest absolute entry.
inline double max_abs(const ComplexMatrix& m) {
    double best = 0.0;
    for (const auto& z : m.entries()) best = std::max(best, std::abs(z));
    return best;
}

inline bool all_finite(const ComplexMatrix& m) {
    return std::all_of(m.entries().begin(), m.entries().end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

inline bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
    if (!m.is_square()) return false;
    const std::size_t n = m.rows();
    double worst_row = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += modulus(m(i, j) - std::conj(m(j, i)));
        worst_row = std::max(worst_row, row);
    }
    return worst_row <= rel_tol * norm_inf(m);
}

// ---------------------------------------------------------------------------
// Hermitian eigenproblem (cyclic Jacobi)

struct EigenResult {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // column i pairs with eigenvalues[i]
};

struct JacobiOptions {
    int max_sweeps = 100;
    double off_diagonal_tol = 1e-14;  // relative to the Frobenius norm of the input
    double hermitian_tol = 1e-10;     // relative to the infinity norm of the input
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One complex Jacobi rotation G acting on the (p, q) plane, chosen so that
// (G^dagger A G)(p, q) = 0. G restricted to the plane is
//   [[c, s], [-s e^{-i phi}, c e^{-i phi}]],  phi = arg A(p, q).
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix* v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double mag = modulus(apq);
    if (mag == 0.0) return;
    const Complex phase = std::conj(apq) / mag;  // e^{-i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const Complex gpp = c;
    const Complex gpq = s;
    const Complex gqp = -s * phase;
    const Complex gqq = c * phase;
    const std::size_t n = a.rows();

    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * gpp + akq * gqp;
        a(k, q) = akp * gpq + akq * gqq;
    }
    if (v != nullptr) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = (*v)(k, p);
            const Complex vkq = (*v)(k, q);
            (*v)(k, p) = vkp * gpp + vkq * gqp;
            (*v)(k, q) = vkp * gpq + vkq * gqq;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
        a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = app - t * mag;
    a(q, q) = aqq + t * mag;
}

}  // namespace detail

namespace detail {

// Diagonalises a copy of m in place; returns the diagonalised matrix. The
// eigenvectors are accumulated into *v when v is non-null.
inline ComplexMatrix jacobi_diagonalise(const ComplexMatrix& m, ComplexMatrix* v, const JacobiOptions& options) {
    if (!m.is_square()) throw Error(ErrorCode::NotHermitian, "matrix is not square");
    if (!all_finite(m)) throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");
    if (!is_hermitian(m, options.hermitian_tol)) {
        throw Error(ErrorCode::NotHermitian, "matrix deviates from its adjoint beyond tolerance");
    }
    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

    const double threshold = options.off_diagonal_tol * frobenius_norm(m);
    int sweep = 0;
    while (off_diagonal_norm(a) > threshold) {
        if (sweep++ >= options.max_sweeps) {
            throw Error(ErrorCode::NoConvergence,
                        "Jacobi iteration exceeded " + std::to_string(options.max_sweeps) + " sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }
    return a;
}

}  // namespace detail

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
/// Throws NotHermitian when the input is not Hermitian to `hermitian_tol`
/// and NoConvergence when `max_sweeps` sweeps do not reach the off-diagonal
/// tolerance.
inline EigenResult hermitian_eigen(const ComplexMatrix& m, const JacobiOptions& options = {}) {
    const std::size_t n = m.rows();
    ComplexMatrix v = ComplexMatrix::identity(n);
    const ComplexMatrix a = detail::jacobi_diagonalise(m, &v, options);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenResult result{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t c = 0; c < n; ++c) {
        result.eigenvalues[c] = a(order[c], order[c]).real();
        for (std::size_t r = 0; r < n; ++r) result.eigenvectors(r, c) = v(r, order[c]);
    }
    return result;
}

/// Ascending eigenvalues only; same errors as hermitian_eigen.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, const JacobiOptions& options = {}) {
    const ComplexMatrix a = detail::jacobi_diagonalise(m, nullptr, options);
    std::vector<double> values(m.rows());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = a(i, i).real();
    std::sort(values.begin(), values.end());
    return values;
}

/// Number of eigenvalues above rel_tol * lambda_max. Meant for PSD input.
inline std::size_t count_above(std::span<const double> eigenvalues, double rel_tol) {
    if (eigenvalues.empty()) return 0;
    const double top = *std::max_element(eigenvalues.begin(), eigenvalues.end());
    if (top <= 0.0) return 0;
    return static_cast<std::size_t>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                                  [&](double x) { return x > rel_tol * top; }));
}

inline constexpr double kDefaultRankTol = 1e-9;

inline std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol = kDefaultRankTol) {
    return count_above(hermitian_eigenvalues(m), rel_tol);
}

// ---------------------------------------------------------------------------
// QR and LU

/// Q factor of m with the phase convention that R has a positive real
/// diagonal. For Ginibre-distributed m the result is Haar on U(n).
inline ComplexMatrix qr_unitary(const ComplexMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "qr_unitary needs a square matrix");
    const std::size_t n = m.rows();
    const double scale = norm_inf(m);
    ComplexMatrix r = m;
    ComplexMatrix q = ComplexMatrix::identity(n);
    std::vector<Complex> w(n);

    // Householder reflections H_k = I - 2 w w^dagger / (w^dagger w), accumulated into Q.
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double col_norm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) col_norm2 += std::norm(r(i, k));
        const double col_norm = std::sqrt(col_norm2);
        if (col_norm == 0.0) continue;
        const Complex x0 = r(k, k);
        const Complex unit = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex{1.0};
        std::fill(w.begin(), w.end(), Complex{});
        for (std::size_t i = k; i < n; ++i) w[i] = r(i, k);
        w[k] += unit * col_norm;
        double wnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) wnorm2 += std::norm(w[i]);
        if (wnorm2 == 0.0) continue;

        for (std::size_t j = 0; j < n; ++j) {
            Complex dot{};
            for (std::size_t i = k; i < n; ++i) dot += std::conj(w[i]) * r(i, j);
            const Complex f = 2.0 * dot / wnorm2;
            for (std::size_t i = k; i < n; ++i) r(i, j) -= f * w[i];
        }
        // Q <- Q H_k
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot{};
            for (std::size_t l = k; l < n; ++l) dot += q(i, l) * w[l];
            const Complex f = 2.0 * dot / wnorm2;
            for (std::size_t l = k; l < n; ++l) q(i, l) -= f * std::conj(w[l]);
        }
    }

    for (std::size_t j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        if (!(mag >= 1e-12 * scale) || mag == 0.0) {
            throw Error(ErrorCode::SingularInput, "R diagonal entry below 1e-12 of the input norm");
        }
        const Complex phase = r(j, j) / mag;
        for (std::size_t i = 0; i < n; ++i) q(i, j) *= phase;
    }
    return q;
}

/// LU factorisation with partial pivoting: P m = L U packed into one matrix.
struct LuDecomposition {
    ComplexMatrix packed;
    std::vector<std::size_t> pivot;  // row permutation
    int sign = 1;

    /// Smallest over largest |U_ii|; zero for an exactly singular input.
    double pivot_ratio() const {
        double lo = std::abs(packed(0, 0));
        double hi = lo;
        for (std::size_t i = 1; i < packed.rows(); ++i) {
            lo = std::min(lo, std::abs(packed(i, i)));
            hi = std::max(hi, std::abs(packed(i, i)));
        }
        return hi > 0.0 ? lo / hi : 0.0;
    }
};

inline LuDecomposition lu_decompose(const ComplexMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "LU needs a square matrix");
    const std::size_t n = m.rows();
    LuDecomposition lu{m, std::vector<std::size_t>(n), 1};
    std::iota(lu.pivot.begin(), lu.pivot.end(), std::size_t{0});
    auto& a = lu.packed;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(best, k))) best = i;
        if (best != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(best, j));
            std::swap(lu.pivot[k], lu.pivot[best]);
            lu.sign = -lu.sign;
        }
        if (a(k, k) == Complex{}) continue;
        for (std::size_t i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= a(i, k) * a(k, j);
        }
    }
    return lu;
}

inline Complex determinant(const ComplexMatrix& m) {
    const auto lu = lu_decompose(m);
    Complex det = static_cast<double>(lu.sign);
    for (std::size_t i = 0; i < m.rows(); ++i) det *= lu.packed(i, i);
    return det;
}

/// Solves A X = B given the LU factors of A.
inline ComplexMatrix lu_solve(const LuDecomposition& lu, const ComplexMatrix& b) {
    const std::size_t n = lu.packed.rows();
    if (b.rows() != n) throw Error(ErrorCode::DimensionMismatch, "right-hand side has wrong row count");
    const auto& a = lu.packed;
    ComplexMatrix x(n, b.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = b(lu.pivot[i], j);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < i; ++k) x(i, j) -= a(i, k) * x(k, j);
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t k = i + 1; k < n; ++k) x(i, j) -= a(i, k) * x(k, j);
            x(i, j) /= a(i, i);
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// Bipartite operations

enum class Subsystem { A, B };

struct BipartiteDims {
    std::size_t a = 0;
    std::size_t b = 0;

    constexpr std::size_t total() const noexcept { return a * b; }
    friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

namespace detail {

inline void require_dims(const ComplexMatrix& m, BipartiteDims dims) {
    if (dims.a == 0 || dims.b == 0 || !m.is_square() || m.rows() != dims.total()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "matrix of size " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                        " does not match dims " + std::to_string(dims.a) + "x" + std::to_string(dims.b));
    }
}

}  // namespace detail

/// Transposes the indices of one subsystem:
/// result[(i,mu),(j,nu)] = m[(j,mu),(i,nu)] for A, m[(i,nu),(j,mu)] for B.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, BipartiteDims dims, Subsystem which) {
    detail::require_dims(m, dims);
    const std::size_t db = dims.b;
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < dims.a; ++i)
        for (std::size_t mu = 0; mu < db; ++mu)
            for (std::size_t j = 0; j < dims.a; ++j)
                for (std::size_t nu = 0; nu < db; ++nu) {
                    const Complex src = which == Subsystem::A ? m(j * db + mu, i * db + nu)
                                                              : m(i * db + nu, j * db + mu);
                    out(i * db + mu, j * db + nu) = src;
                }
    return out;
}

/// Traces out the subsystem that is not kept.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, BipartiteDims dims, Subsystem keep) {
    detail::require_dims(m, dims);
    const std::size_t db = dims.b;
    if (keep == Subsystem::A) {
        ComplexMatrix out(dims.a, dims.a);
        for (std::size_t i = 0; i < dims.a; ++i)
            for (std::size_t j = 0; j < dims.a; ++j)
                for (std::size_t mu = 0; mu < db; ++mu) out(i, j) += m(i * db + mu, j * db + mu);
        return out;
    }
    ComplexMatrix out(db, db);
    for (std::size_t mu = 0; mu < db; ++mu)
        for (std::size_t nu = 0; nu < db; ++nu)
            for (std::size_t i = 0; i < dims.a; ++i) out(mu, nu) += m(i * db + mu, i * db + nu);
    return out;
}

}  // namespace qsep
