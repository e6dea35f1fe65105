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

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "qsep/linalg.hpp"

namespace qsep {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

/// A bipartite quantum state: Hermitian, unit trace, positive semidefinite,
/// tagged with its factor dimensions (subsystem A is the slow index).
class DensityMatrix {
public:
    struct trusted_t {};
    static constexpr trusted_t trusted{};

    /// Checks every invariant, including positivity (one eigensolve).
    DensityMatrix(ComplexMatrix matrix, BipartiteDims dims) : matrix_(std::move(matrix)), dims_(dims) {
        check_cheap_invariants();
        spectrum_ = hermitian_eigenvalues(matrix_);
        const double top = std::max(std::abs(spectrum_.front()), std::abs(spectrum_.back()));
        if (spectrum_.front() < -kPsdTol * top) {
            throw Error(ErrorCode::InvalidArgument, "matrix is not positive semidefinite");
        }
    }

    /// For producers that have already established positivity themselves.
    /// An empty `spectrum` is computed here.
    DensityMatrix(trusted_t, ComplexMatrix matrix, BipartiteDims dims, std::vector<double> spectrum = {})
        : matrix_(std::move(matrix)), dims_(dims), spectrum_(std::move(spectrum)) {
        check_cheap_invariants();
        if (spectrum_.empty()) {
            spectrum_ = hermitian_eigenvalues(matrix_);
        } else if (spectrum_.size() != matrix_.rows()) {
            throw Error(ErrorCode::DimensionMismatch, "spectrum length differs from matrix size");
        }
    }

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    BipartiteDims dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return matrix_.rows(); }

    /// Ascending eigenvalues.
    const std::vector<double>& spectrum() const noexcept { return spectrum_; }

    friend bool operator==(const DensityMatrix& x, const DensityMatrix& y) {
        return x.dims_ == y.dims_ && x.matrix_ == y.matrix_;
    }

private:
    void check_cheap_invariants() const {
        detail::require_dims(matrix_, dims_);
        if (!all_finite(matrix_)) throw Error(ErrorCode::InvalidArgument, "density matrix has non-finite entries");
        if (!is_hermitian(matrix_, kHermitianTol)) throw Error(ErrorCode::NotHermitian, "density matrix is not Hermitian");
        if (std::abs(trace(matrix_) - 1.0) > kTraceTol) {
            throw Error(ErrorCode::InvalidArgument, "density matrix trace differs from 1");
        }
    }

    ComplexMatrix matrix_;
    BipartiteDims dims_;
    std::vector<double> spectrum_;
};

inline std::size_t numerical_rank(const DensityMatrix& rho, double rel_tol = kDefaultRankTol) {
    return count_above(rho.spectrum(), rel_tol);
}

inline ComplexMatrix partial_transpose(const DensityMatrix& rho, Subsystem which) {
    return partial_transpose(rho.matrix(), rho.dims(), which);
}

/// Reduced state of the kept subsystem, tagged as a single party (d, 1).
inline DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
    auto reduced = partial_trace(rho.matrix(), rho.dims(), keep);
    const std::size_t d = reduced.rows();
    // Rounding can leave the trace off by a few ulps; renormalise.
    reduced /= trace(reduced).real();
    for (std::size_t i = 0; i < d; ++i) reduced(i, i) = reduced(i, i).real();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) reduced(j, i) = std::conj(reduced(i, j));
    return DensityMatrix(DensityMatrix::trusted, std::move(reduced), BipartiteDims{d, 1});
}

}  // namespace qsep
