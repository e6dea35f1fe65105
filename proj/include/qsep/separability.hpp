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

#include <array>
#include <cmath>
#include <cstddef>

#include "qsep/density_matrix.hpp"
#include "qsep/linalg.hpp"

namespace qsep {

inline constexpr double kDefaultPptTol = 1e-10;

struct SeparabilityVerdict {
    bool separable = false;
    double min_pt_eigenvalue = 0.0;
    std::size_t state_rank = 0;
    std::size_t reduced_rank_a = 0;

    /// Rank witness: rank(rho) < rank(rho_A) certifies entanglement.
    bool rank_witness() const noexcept { return state_rank < reduced_rank_a; }
};

/// Peres-Horodecki test, valid as a separability decision only for 2x2 and
/// 2x3 systems where a positive partial transpose is also sufficient.
inline SeparabilityVerdict ppt_verdict(const DensityMatrix& rho, double ppt_tol = kDefaultPptTol) {
    const auto dims = rho.dims();
    if (dims.a != 2 || (dims.b != 2 && dims.b != 3)) {
        throw Error(ErrorCode::UnsupportedDimensions,
                    "PPT decides separability only for 2x2 and 2x3 systems, got " + std::to_string(dims.a) + "x" +
                        std::to_string(dims.b));
    }
    SeparabilityVerdict v;
    v.min_pt_eigenvalue = hermitian_eigenvalues(partial_transpose(rho, Subsystem::B)).front();
    v.separable = v.min_pt_eigenvalue >= -ppt_tol;
    v.state_rank = numerical_rank(rho);
    v.reduced_rank_a = numerical_rank(partial_trace(rho, Subsystem::A));
    return v;
}

/// True when rank(rho) < rank(rho_A), which certifies entanglement. False
/// says nothing.
inline bool ruskai_werner_witness(const DensityMatrix& rho) {
    return numerical_rank(rho) < numerical_rank(partial_trace(rho, Subsystem::A));
}

struct BlochVector {
    std::array<double, 3> components{};
    double radius = 0.0;
};

/// Bloch vector b_i = tr(rho_q sigma_i) of a qubit factor (or of a bare
/// qubit state tagged (2, 1)).
inline BlochVector bloch_vector(const DensityMatrix& rho, Subsystem which = Subsystem::A) {
    const auto dims = rho.dims();
    if ((which == Subsystem::A ? dims.a : dims.b) != 2) {
        throw Error(ErrorCode::DimensionMismatch, "Bloch vector needs a qubit subsystem");
    }
    const auto q = partial_trace(rho, which).matrix();
    BlochVector b;
    b.components = {2.0 * q(0, 1).real(), -2.0 * q(0, 1).imag(), q(0, 0).real() - q(1, 1).real()};
    b.radius = std::hypot(b.components[0], b.components[1], b.components[2]);
    return b;
}

}  // namespace qsep
