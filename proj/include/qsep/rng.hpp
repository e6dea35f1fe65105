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

// Counter-based random streams (Philox4x32-10, Salmon et al. SC'11).
//
// A stream is identified by (seed, stream_id). The seed is the Philox key and
// the 128-bit counter is (block_lo, block_hi, stream_lo, stream_hi), so two
// streams with different ids can never share a counter value: they are
// disjoint by construction and each one is replayable from its identity alone.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <utility>

namespace qsep {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

constexpr PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

/// Anything that can hand out complex numbers whose real and imaginary parts
/// are independent standard normals. RngStream is the production model; tests
/// substitute scripted sources.
template <typename T>
concept ComplexNormalSource = requires(T& source) {
    { source.complex_normal() } -> std::convertible_to<std::complex<double>>;
};

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    /// Number of Philox blocks consumed so far.
    std::uint64_t position() const noexcept { return block_; }

    PhiloxBlock next_block() noexcept {
        const PhiloxBlock ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                              static_cast<std::uint32_t>(stream_id_),
                              static_cast<std::uint32_t>(stream_id_ >> 32)};
        ++block_;
        return philox4x32_10(ctr, {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    }

    /// Two uniforms with 53-bit resolution from one block; the first lies in
    /// (0, 1], the second in [0, 1).
    std::pair<double, double> uniform_pair() noexcept {
        const auto b = next_block();
        constexpr double kScale = 0x1.0p-53;
        const std::uint64_t w0 = (std::uint64_t{b[0]} << 32 | b[1]) >> 11;
        const std::uint64_t w1 = (std::uint64_t{b[2]} << 32 | b[3]) >> 11;
        return {static_cast<double>(w0 + 1) * kScale, static_cast<double>(w1) * kScale};
    }

    /// Box-Muller: exactly one block (two uniforms) per complex entry.
    std::complex<double> complex_normal() noexcept {
        const auto [u1, u2] = uniform_pair();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
};

static_assert(ComplexNormalSource<RngStream>);

}  // namespace qsep
