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

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   qsep_acceptance                 every criterion
//   qsep_acceptance --criterion 4   just one
//
// Exit status is 0 only when every selected criterion passes.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "qsep/qsep.hpp"
#include "test_support.hpp"

using namespace qsep;

namespace {

constexpr std::uint64_t kSeed = 20180101;

struct Result {
    bool pass;
    std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

/// Runs are memoised so criteria sharing an ensemble reuse one sample set.
const RunStatistics& cached_run(const EnsembleSpec& spec, std::uint64_t n, std::size_t bins = 20) {
    static std::map<std::tuple<int, std::size_t, std::size_t, std::uint64_t, std::size_t>, RunStatistics> cache;
    const auto key = std::tuple{static_cast<int>(spec.measure), spec.dims.b, spec.rank, n, bins};
    auto it = cache.find(key);
    if (it == cache.end()) {
        RunConfig c;
        c.spec = spec;
        c.n_samples = n;
        c.seed = kSeed;
        c.n_streams = 8;
        c.n_bins = bins;
        it = cache.emplace(key, run(c)).first;
    }
    return it->second;
}

Result table_row(const std::string& id) {
    const auto& rows = reference_rows();
    const auto row = std::find_if(rows.begin(), rows.end(), [&](const ReferenceRow& r) { return r.id == id; });
    const auto& stats = cached_run(row->spec, row->default_samples);
    const auto rep = report(stats);
    const auto verdict = judge(*row, stats);
    return {verdict.pass,
            fmt("%s p_sep = %.5f ci95 = [%.5f, %.5f] n = %llu; published %.4f +/- %.4f (within %s, covered %s)",
                id.c_str(), rep.p_sep, rep.ci95.lo, rep.ci95.hi, static_cast<unsigned long long>(stats.total),
                row->published, row->tolerance, verdict.within_tolerance ? "yes" : "no",
                verdict.covered ? "yes" : "no")};
}

Result low_rank_rows() {
    bool pass = true;
    std::string detail;
    for (auto measure : {Measure::HilbertSchmidt, Measure::Bures}) {
        for (std::size_t k : {2u, 1u}) {
            const EnsembleSpec spec{measure, {2, 2}, k};
            constexpr std::uint64_t kN = 100'000;
            const auto& stats = cached_run(spec, kN);

            // Replay the same streams and check the witness sample by sample.
            std::uint64_t eligible = 0, missed = 0;
            for (std::uint64_t i = 0; i < kN; ++i) {
                RngStream rng(kSeed, i);
                const auto rho = sample_state(spec, rng);
                const auto v = ppt_verdict(rho);
                if (v.reduced_rank_a > v.state_rank) {
                    ++eligible;
                    if (!ruskai_werner_witness(rho)) ++missed;
                }
            }
            const bool ok = stats.valid && stats.total == kN && stats.separable == 0 && missed == 0;
            pass = pass && ok;
            if (!detail.empty()) detail += "; ";
            detail += fmt("%s rank %zu: separable %llu/%llu, witness %llu/%llu", measure_name(measure).data(), k,
                          static_cast<unsigned long long>(stats.separable),
                          static_cast<unsigned long long>(stats.total),
                          static_cast<unsigned long long>(eligible - missed),
                          static_cast<unsigned long long>(eligible));
        }
    }
    return {pass, detail};
}

Result flatness(std::size_t rank, bool expect_flat) {
    const auto& stats = cached_run({Measure::HilbertSchmidt, {2, 2}, rank}, 1'000'000);
    const auto rep = report(stats);
    const auto deviating = bins_deviating(stats, rep.p_sep, kZ99);
    std::size_t populated = 0;
    for (const auto& b : stats.bins) populated += b.total > 0 ? 1 : 0;
    const bool pass = stats.valid && (expect_flat ? deviating <= 1 : deviating >= 3);
    return {pass, fmt("HS 2x2 rank %zu: %zu of %zu populated bins outside 99%% interval of p_sep = %.5f", rank,
                      deviating, populated, rep.p_sep)};
}

Result oracle_suites() {
    // Werner family.
    std::size_t sign_errors = 0;
    for (int step = 0; step <= 100; ++step) {
        const double p = step / 100.0;
        const double boundary = (1.0 - 3.0 * p) / 4.0;
        if (std::abs(boundary) <= kDefaultPptTol) continue;
        const auto v = ppt_verdict(DensityMatrix(qsep::testing::werner(p), {2, 2}));
        if (v.separable != (boundary > 0.0)) ++sign_errors;
    }

    // Product states.
    std::size_t false_entangled = 0;
    RngStream prod(kSeed, 1);
    for (int t = 0; t < 10'000; ++t) {
        const std::size_t db = t % 2 ? 3 : 2;
        const auto ra = qsep::testing::random_single_party_state(2, prod);
        const auto rb = qsep::testing::random_single_party_state(db, prod);
        if (!ppt_verdict(DensityMatrix(kron(ra, rb), {2, db})).separable) ++false_entangled;
    }

    // Eigen reconstruction.
    double worst = 0.0;
    RngStream herm(kSeed, 2);
    for (int t = 0; t < 1000; ++t) {
        const auto h = qsep::testing::random_hermitian(t % 2 ? 6 : 4, herm);
        const auto e = hermitian_eigen(h);
        const auto rebuilt = e.eigenvectors * ComplexMatrix::diagonal(e.eigenvalues) * adjoint(e.eigenvectors);
        worst = std::max(worst, max_abs(rebuilt - h));
    }

    // Stream-count invariance.
    std::size_t mismatched = 0;
    RunConfig c;
    c.spec = {Measure::Bures, {2, 3}, 6};
    c.n_samples = 20'000;
    c.seed = kSeed;
    c.n_streams = 1;
    const auto reference = run(c);
    for (std::size_t s : {2u, 4u, 8u}) {
        c.n_streams = s;
        if (!run(c).same_counters(reference)) ++mismatched;
    }

    const bool pass = sign_errors == 0 && false_entangled == 0 && worst <= 1e-9 && mismatched == 0 && reference.valid;
    return {pass, fmt("werner sign errors %zu/101, product false-entangled %zu/10000, eigen residual %.2e, "
                      "stream-count mismatches %zu/3",
                      sign_errors, false_entangled, worst, mismatched)};
}

const std::map<int, std::function<Result()>>& criteria() {
    static const std::map<int, std::function<Result()>> table = {
        {1, [] { return table_row("hs-2x2-rank4"); }},
        {2, [] { return table_row("hs-2x3-rank6"); }},
        {3, [] { return table_row("bures-2x2-rank4"); }},
        {4, [] { return table_row("bures-2x3-rank6"); }},
        {5, [] { return table_row("hs-2x2-rank3"); }},
        {6, [] { return table_row("bures-2x2-rank3"); }},
        {7, low_rank_rows},
        {8, [] { return flatness(4, true); }},
        {9, [] { return flatness(3, false); }},
        {10, oracle_suites},
    };
    return table;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qsep-mc acceptance suite", "qsep_acceptance"};
    int only = 0;
    app.add_option("--criterion", only, "run one criterion (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    bool all_pass = true;
    for (const auto& [id, check] : criteria()) {
        if (only != 0 && id != only) continue;
        Result r{false, ""};
        try {
            r = check();
        } catch (const std::exception& e) {
            r = {false, std::string("error: ") + e.what()};
        }
        all_pass = all_pass && r.pass;
        std::printf("criterion %2d: %s  %s\n", id, r.pass ? "PASS" : "FAIL", r.detail.c_str());
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
