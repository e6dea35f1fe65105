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

// Monte-Carlo estimate of the separability probability
//
//   P_sep = (# separable states in the ensemble) / (# states in the ensemble)
//
// Sample i always draws from RngStream(seed, i), so every counter is a pure
// function of (config.spec, seed, n_samples, n_bins, ppt_tol). The n_streams
// setting only decides how the index range is cut into contiguous shares
// (sample i belongs to share floor(i * n_streams / n_samples)); each share
// accumulates privately and the shares are merged in order at the end.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qsep/ensembles.hpp"
#include "qsep/rng.hpp"
#include "qsep/separability.hpp"

namespace qsep {

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

struct RunConfig {
    EnsembleSpec spec;
    std::uint64_t n_samples = 1;
    std::uint64_t seed = 0;
    std::size_t n_streams = 1;
    std::size_t n_bins = 20;
    double ppt_tol = kDefaultPptTol;

    void validate() const {
        spec.validate();
        if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be at least 1");
        if (n_streams < 1) throw Error(ErrorCode::InvalidArgument, "streams must be at least 1");
        if (n_bins < 1) throw Error(ErrorCode::InvalidArgument, "bins must be at least 1");
        if (!(ppt_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ppt-tol must be non-negative");
    }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct BinCount {
    std::uint64_t total = 0;
    std::uint64_t separable = 0;
    friend bool operator==(const BinCount&, const BinCount&) = default;
};

struct RunStatistics {
    RunConfig config;
    std::uint64_t total = 0;
    std::uint64_t separable = 0;
    std::vector<BinCount> bins;  // Bloch radius of subsystem A, equal width on [0, 1]
    std::uint64_t witness_certified = 0;  // rank(rho) < rank(rho_A)
    std::uint64_t witness_conflicts = 0;  // certified yet PPT says separable
    double elapsed_seconds = 0.0;
    bool valid = true;
    std::string error;

    static RunStatistics zero(const RunConfig& config) {
        RunStatistics s;
        s.config = config;
        s.bins.assign(config.n_bins, BinCount{});
        return s;
    }

    /// Equality of every counter, ignoring timing and the config echo.
    bool same_counters(const RunStatistics& o) const {
        return total == o.total && separable == o.separable && bins == o.bins &&
               witness_certified == o.witness_certified && witness_conflicts == o.witness_conflicts &&
               valid == o.valid;
    }
};

inline std::size_t radius_bin(double radius, std::size_t n_bins) {
    if (!(radius > 0.0)) return 0;
    const double scaled = std::floor(radius * static_cast<double>(n_bins));
    return scaled >= static_cast<double>(n_bins) ? n_bins - 1 : static_cast<std::size_t>(scaled);
}

/// Counterwise sum. Both sides must describe the same experiment (spec, bins
/// and tolerance); the result keeps the config echo of `a`.
inline RunStatistics merge(const RunStatistics& a, const RunStatistics& b) {
    if (!(a.config.spec == b.config.spec) || a.config.n_bins != b.config.n_bins ||
        a.config.ppt_tol != b.config.ppt_tol || a.bins.size() != b.bins.size()) {
        throw Error(ErrorCode::ConfigMismatch, "cannot merge statistics of different experiments");
    }
    RunStatistics out = a;
    out.total += b.total;
    out.separable += b.separable;
    for (std::size_t i = 0; i < out.bins.size(); ++i) {
        out.bins[i].total += b.bins[i].total;
        out.bins[i].separable += b.bins[i].separable;
    }
    out.witness_certified += b.witness_certified;
    out.witness_conflicts += b.witness_conflicts;
    out.elapsed_seconds += b.elapsed_seconds;
    out.valid = a.valid && b.valid;
    if (out.error.empty()) out.error = b.error;
    return out;
}

/// Classifies one state and folds it into `stats`.
inline void accumulate(RunStatistics& stats, const DensityMatrix& rho) {
    const auto verdict = ppt_verdict(rho, stats.config.ppt_tol);
    const auto bin = radius_bin(bloch_vector(rho, Subsystem::A).radius, stats.bins.size());
    ++stats.total;
    ++stats.bins[bin].total;
    if (verdict.separable) {
        ++stats.separable;
        ++stats.bins[bin].separable;
    }
    if (verdict.rank_witness()) {
        ++stats.witness_certified;
        if (verdict.separable) ++stats.witness_conflicts;
    }
}

/// First sample index of share `s` (shares are contiguous).
inline std::uint64_t share_begin(std::uint64_t s, std::uint64_t n_samples, std::uint64_t n_streams) {
    const std::uint64_t q = n_samples / n_streams;
    const std::uint64_t r = n_samples % n_streams;
    return s * q + (s * r + n_streams - 1) / n_streams;
}

/// Runs the experiment on up to `max_threads` worker threads (0 means the
/// hardware concurrency). On a sampler failure the remaining work is
/// abandoned and the partial statistics come back with valid = false.
inline RunStatistics run(const RunConfig& config, std::size_t max_threads = 0) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const std::size_t shares = config.n_streams;
    std::vector<RunStatistics> partial(shares, RunStatistics::zero(config));

    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::string first_error;

    auto work_share = [&](std::size_t s) {
        auto& stats = partial[s];
        const std::uint64_t lo = share_begin(s, config.n_samples, shares);
        const std::uint64_t hi = share_begin(s + 1, config.n_samples, shares);
        try {
            for (std::uint64_t i = lo; i < hi && !failed.load(std::memory_order_relaxed); ++i) {
                RngStream rng(config.seed, i);
                accumulate(stats, sample_state(config.spec, rng));
            }
        } catch (const std::exception& e) {
            stats.valid = false;
            failed.store(true);
            std::lock_guard lock(error_mutex);
            if (first_error.empty()) first_error = e.what();
        }
    };

    std::size_t threads = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, shares);
    if (threads <= 1) {
        for (std::size_t s = 0; s < shares; ++s) work_share(s);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t s = t; s < shares; s += threads) work_share(s);
            });
        }
    }

    RunStatistics result = RunStatistics::zero(config);
    for (const auto& p : partial) result = merge(result, p);
    result.error = first_error;
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// ---------------------------------------------------------------------------
// Reporting

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95) {
    if (trials == 0) throw Error(ErrorCode::EmptyRun, "interval of an empty sample");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::clamp(std::min(center - half, p), 0.0, 1.0), std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

struct BinReport {
    double radius_lo = 0.0;
    double radius_hi = 0.0;
    std::uint64_t total = 0;
    std::uint64_t separable = 0;
    std::optional<double> p_sep;    // empty for a bin with no samples
    std::optional<Interval> ci95;

    bool empty() const noexcept { return !p_sep.has_value(); }
    friend bool operator==(const BinReport&, const BinReport&) = default;
};

struct ProbabilityReport {
    double p_sep = 0.0;
    double std_error = 0.0;
    Interval ci95;
    std::vector<BinReport> per_bin;
    friend bool operator==(const ProbabilityReport&, const ProbabilityReport&) = default;
};

inline ProbabilityReport report(const RunStatistics& stats) {
    if (stats.total == 0) throw Error(ErrorCode::EmptyRun, "no samples were accumulated");
    const double n = static_cast<double>(stats.total);
    ProbabilityReport r;
    r.p_sep = static_cast<double>(stats.separable) / n;
    r.std_error = std::sqrt(r.p_sep * (1.0 - r.p_sep) / n);
    r.ci95 = wilson_interval(stats.separable, stats.total);

    const double width = 1.0 / static_cast<double>(stats.bins.size());
    r.per_bin.reserve(stats.bins.size());
    for (std::size_t i = 0; i < stats.bins.size(); ++i) {
        BinReport b;
        b.radius_lo = static_cast<double>(i) * width;
        b.radius_hi = i + 1 == stats.bins.size() ? 1.0 : static_cast<double>(i + 1) * width;
        b.total = stats.bins[i].total;
        b.separable = stats.bins[i].separable;
        if (b.total > 0) {
            b.p_sep = static_cast<double>(b.separable) / static_cast<double>(b.total);
            b.ci95 = wilson_interval(b.separable, b.total);
        }
        r.per_bin.push_back(b);
    }
    return r;
}

/// Number of non-empty bins whose Wilson interval at quantile z excludes
/// `reference` (the global estimate when checking flatness of the curve).
inline std::size_t bins_deviating(const RunStatistics& stats, double reference, double z = kZ99) {
    std::size_t count = 0;
    for (const auto& b : stats.bins) {
        if (b.total == 0) continue;
        if (!wilson_interval(b.separable, b.total, z).contains(reference)) ++count;
    }
    return count;
}

}  // namespace qsep
