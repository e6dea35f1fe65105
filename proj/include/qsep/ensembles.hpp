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

// Random matrices and random states.
//
//   Hilbert-Schmidt:  rho = Z Z^+ / tr(Z Z^+)
//   Bures:            rho = (I + U) Z Z^+ (I + U^+) / tr(...)
//
// with Z a (possibly rank-deficient) Ginibre matrix and U Haar on U(n).
//
// RNG consumption: every complex entry costs one Philox block. A state of
// size n and rank k draws k^2 + 2k(n - k) entries for Z (n^2 when k = n),
// plus n^2 for U under the Bures measure. Retries after a rejected draw
// consume further blocks from the same stream.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "qsep/density_matrix.hpp"
#include "qsep/linalg.hpp"
#include "qsep/rng.hpp"

namespace qsep {

enum class Measure { HilbertSchmidt, Bures };

constexpr std::string_view measure_name(Measure m) { return m == Measure::Bures ? "bures" : "hs"; }

struct EnsembleSpec {
    Measure measure = Measure::HilbertSchmidt;
    BipartiteDims dims{2, 2};
    std::size_t rank = 4;

    constexpr std::size_t size() const noexcept { return dims.total(); }

    /// Throws InvalidArgument describing the first violated constraint.
    void validate() const {
        if (dims.a != 2 || (dims.b != 2 && dims.b != 3)) {
            throw Error(ErrorCode::InvalidArgument, "dims must be 2x2 or 2x3");
        }
        if (rank < 1 || rank > size()) {
            throw Error(ErrorCode::InvalidArgument, "rank must be in 1.." + std::to_string(size()));
        }
    }

    friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

inline constexpr int kMaxResamples = 100;
inline constexpr double kBlockConditionFloor = 1e-12;

/// Nominal number of complex normals one sample_state call consumes.
constexpr std::size_t draws_per_sample(const EnsembleSpec& spec) {
    const std::size_t n = spec.size();
    const std::size_t k = spec.rank;
    const std::size_t z = k == n ? n * n : k * k + 2 * k * (n - k);
    return spec.measure == Measure::Bures ? z + n * n : z;
}

template <ComplexNormalSource Source>
ComplexMatrix sample_ginibre_rect(std::size_t rows, std::size_t cols, Source& source) {
    ComplexMatrix m(rows, cols);
    for (auto& z : m.entries()) z = source.complex_normal();
    return m;
}

/// n x n matrix with i.i.d. standard normal real and imaginary parts.
template <ComplexNormalSource Source>
ComplexMatrix sample_ginibre(std::size_t n, Source& source) {
    return sample_ginibre_rect(n, n, source);
}

/// Ginibre matrix of rank exactly k, built as the block matrix
///   [[A, B], [C, C A^-1 B]]
/// with A (k x k), B (k x n-k) and C (n-k x k) independent Ginibre blocks.
/// A is redrawn while its LU pivot ratio is below 1e-12.
template <ComplexNormalSource Source>
ComplexMatrix sample_rank_k_ginibre(std::size_t n, std::size_t k, Source& source) {
    if (n == 0 || k < 1 || k > n) {
        throw Error(ErrorCode::InvalidArgument, "rank must be in 1.." + std::to_string(n));
    }
    if (k == n) return sample_ginibre(n, source);

    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        const ComplexMatrix a = sample_ginibre(k, source);
        const auto lu = lu_decompose(a);
        if (!(lu.pivot_ratio() >= kBlockConditionFloor)) continue;

        const ComplexMatrix b = sample_ginibre_rect(k, n - k, source);
        const ComplexMatrix c = sample_ginibre_rect(n - k, k, source);
        const ComplexMatrix d = c * lu_solve(lu, b);

        ComplexMatrix z(n, n);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) z(i, j) = a(i, j);
            for (std::size_t j = k; j < n; ++j) z(i, j) = b(i, j - k);
        }
        for (std::size_t i = k; i < n; ++i) {
            for (std::size_t j = 0; j < k; ++j) z(i, j) = c(i - k, j);
            for (std::size_t j = k; j < n; ++j) z(i, j) = d(i - k, j - k);
        }
        return z;
    }
    throw Error(ErrorCode::IllConditionedBlock,
                "leading block stayed ill-conditioned after " + std::to_string(kMaxResamples) + " draws");
}

/// Haar-random unitary on U(n) via phase-corrected QR of a Ginibre draw.
template <ComplexNormalSource Source>
ComplexMatrix sample_haar_unitary(std::size_t n, Source& source) {
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        try {
            return qr_unitary(sample_ginibre(n, source));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularInput) throw;
        }
    }
    throw Error(ErrorCode::SingularInput,
                "Ginibre draw stayed singular after " + std::to_string(kMaxResamples) + " draws");
}

/// A random state from the ensemble described by `spec`, with numerical
/// rank equal to spec.rank.
template <ComplexNormalSource Source>
DensityMatrix sample_state(const EnsembleSpec& spec, Source& source) {
    spec.validate();
    const std::size_t n = spec.size();
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        ComplexMatrix m = gram(sample_rank_k_ginibre(n, spec.rank, source));
        if (spec.measure == Measure::Bures) {
            ComplexMatrix shift = sample_haar_unitary(n, source);
            for (std::size_t i = 0; i < n; ++i) shift(i, i) += 1.0;
            m = shift * m * adjoint(shift);
            m = (m + adjoint(m)) * Complex{0.5};
        }
        const double tr = trace(m).real();
        if (!(tr > 0.0) || !std::isfinite(tr)) continue;
        m /= tr;

        auto spectrum = hermitian_eigenvalues(m);
        if (spectrum.front() < -kPsdTol * spectrum.back()) continue;
        if (count_above(spectrum, kDefaultRankTol) != spec.rank) continue;
        return DensityMatrix(DensityMatrix::trusted, std::move(m), spec.dims, std::move(spectrum));
    }
    throw Error(ErrorCode::RankCollapse,
                "no state of rank " + std::to_string(spec.rank) + " after " + std::to_string(kMaxResamples) +
                    " draws");
}

}  // namespace qsep
