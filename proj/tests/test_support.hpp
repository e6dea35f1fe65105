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

// Test-only helpers and independent oracles. Nothing here calls into the
// code paths it is used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qsep/linalg.hpp"
#include "qsep/rng.hpp"

namespace qsep::testing {

/// Hands out a fixed script of values in place of Gaussian draws.
class ScriptedSource {
public:
    explicit ScriptedSource(std::vector<Complex> script) : script_(std::move(script)) {}

    Complex complex_normal() {
        if (next_ >= script_.size()) throw std::out_of_range("scripted source exhausted");
        return script_[next_++];
    }

    std::size_t consumed() const { return next_; }

private:
    std::vector<Complex> script_;
    std::size_t next_ = 0;
};

inline std::vector<Complex> flatten(const ComplexMatrix& m) { return {m.entries().begin(), m.entries().end()}; }

inline std::vector<Complex> concat(std::initializer_list<std::vector<Complex>> parts) {
    std::vector<Complex> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

/// (G + G^dagger) / 2 with a Ginibre G.
inline ComplexMatrix random_hermitian(std::size_t n, RngStream& rng) {
    ComplexMatrix g(n, n);
    for (auto& z : g.entries()) z = rng.complex_normal();
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
    return h;
}

/// Random single-party HS state, computed without the library samplers.
inline ComplexMatrix random_single_party_state(std::size_t n, RngStream& rng) {
    ComplexMatrix g(n, n);
    for (auto& z : g.entries()) z = rng.complex_normal();
    ComplexMatrix rho(n, n);
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{};
            for (std::size_t k = 0; k < n; ++k) acc += g(i, k) * std::conj(g(j, k));
            rho(i, j) = acc;
        }
    for (std::size_t i = 0; i < n; ++i) tr += rho(i, i).real();
    for (auto& z : rho.entries()) z /= tr;
    return rho;
}

// Exact arithmetic over the Gaussian integers Z[i].
struct GaussInt {
    std::int64_t re = 0;
    std::int64_t im = 0;

    friend GaussInt operator+(GaussInt a, GaussInt b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussInt operator-(GaussInt a, GaussInt b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussInt operator*(GaussInt a, GaussInt b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(GaussInt, GaussInt) = default;
    Complex to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

using GaussMatrix = std::vector<std::vector<GaussInt>>;

inline GaussMatrix gauss_mul(const GaussMatrix& a, const GaussMatrix& b) {
    GaussMatrix out(a.size(), std::vector<GaussInt>(b[0].size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b[0].size(); ++j)
            for (std::size_t k = 0; k < b.size(); ++k) out[i][j] = out[i][j] + a[i][k] * b[k][j];
    return out;
}

inline GaussInt gauss_det3(const GaussMatrix& m, const std::size_t r[3], const std::size_t c[3]) {
    auto e = [&](int i, int j) { return m[r[i]][c[j]]; };
    return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
           e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

inline ComplexMatrix to_complex(const GaussMatrix& m) {
    ComplexMatrix out(m.size(), m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[0].size(); ++j) out(i, j) = m[i][j].to_complex();
    return out;
}

/// Kolmogorov-Smirnov statistic of samples against uniform on [0, 1).
inline double ks_uniform(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        d = std::max(d, static_cast<double>(i + 1) / n - samples[i]);
        d = std::max(d, samples[i] - static_cast<double>(i) / n);
    }
    return d;
}

/// Asymptotic KS critical value at significance alpha.
inline double ks_critical(double alpha, std::size_t n) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

inline ComplexMatrix bell_phi_plus() {
    ComplexMatrix rho(4, 4);
    rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
    return rho;
}

/// p |psi-><psi-| + (1 - p) I/4, written out entrywise.
inline ComplexMatrix werner(double p) {
    ComplexMatrix rho(4, 4);
    for (std::size_t i = 0; i < 4; ++i) rho(i, i) = (1.0 - p) / 4.0;
    rho(1, 1) += p / 2.0;
    rho(2, 2) += p / 2.0;
    rho(1, 2) = -p / 2.0;
    rho(2, 1) = -p / 2.0;
    return rho;
}

}  // namespace qsep::testing
