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

// Serialized run output: a schema-versioned JSON record and a per-bin CSV.
//
// JSON layout (schema "qsep-mc/record/v1"):
//   {
//     "schema": "qsep-mc/record/v1",
//     "config":     { ensemble, dims, rank, samples, seed, streams, bins, ppt_tol },
//     "statistics": { total, separable, witness_certified, witness_conflicts,
//                     elapsed_seconds, valid, error, bins: [{total, separable}] },
//     "report":     { p_sep, std_error, ci95: [lo, hi],
//                     per_bin: [{radius_lo, radius_hi, total, separable,
//                                p_sep | null, ci95: [lo, hi] | null}] },
//     "provenance": { seed, n_streams, build, timestamp }
//   }
// Empty bins carry null for p_sep and ci95.
//
// CSV layout: header radius_lo,radius_hi,total,separable,p_sep,ci_lo,ci_hi
// and one row per bin; empty bins print nan in the last three columns.

#pragma once

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>

#include <json.hpp>

#include "qsep/estimator.hpp"

#ifndef QSEP_VERSION
#define QSEP_VERSION "dev"
#endif

namespace qsep {

inline constexpr std::string_view kRecordSchema = "qsep-mc/record/v1";
inline constexpr std::string_view kCsvHeader = "radius_lo,radius_hi,total,separable,p_sep,ci_lo,ci_hi";

struct Provenance {
    std::uint64_t seed = 0;
    std::size_t n_streams = 1;
    std::string build;
    std::string timestamp;  // ISO-8601 UTC
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct OutputRecord {
    std::string schema{kRecordSchema};
    RunStatistics statistics;  // carries the config echo
    ProbabilityReport report;
    Provenance provenance;

    const RunConfig& config() const noexcept { return statistics.config; }

    friend bool operator==(const OutputRecord& x, const OutputRecord& y) {
        return x.schema == y.schema && x.statistics.config == y.statistics.config &&
               x.statistics.same_counters(y.statistics) &&
               x.statistics.elapsed_seconds == y.statistics.elapsed_seconds &&
               x.statistics.error == y.statistics.error && x.report == y.report && x.provenance == y.provenance;
    }
};

inline std::string build_identifier() {
    std::string id = "qsep-mc " QSEP_VERSION;
#if defined(__clang__)
    id += " clang-" + std::to_string(__clang_major__) + "." + std::to_string(__clang_minor__);
#elif defined(__GNUC__)
    id += " gcc-" + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__);
#endif
    return id;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

inline OutputRecord make_record(const RunStatistics& stats) {
    OutputRecord rec;
    rec.statistics = stats;
    rec.report = report(stats);
    rec.provenance = {stats.config.seed, stats.config.n_streams, build_identifier(), utc_timestamp()};
    return rec;
}

// ---------------------------------------------------------------------------
// JSON

inline std::string dims_string(BipartiteDims d) { return std::to_string(d.a) + "x" + std::to_string(d.b); }

inline BipartiteDims parse_dims(std::string_view text) {
    if (text == "2x2") return {2, 2};
    if (text == "2x3") return {2, 3};
    throw Error(ErrorCode::InvalidArgument, "dims must be 2x2 or 2x3, got '" + std::string(text) + "'");
}

inline Measure parse_measure(std::string_view text) {
    if (text == "hs") return Measure::HilbertSchmidt;
    if (text == "bures") return Measure::Bures;
    throw Error(ErrorCode::InvalidArgument, "ensemble must be hs or bures, got '" + std::string(text) + "'");
}

inline nlohmann::json to_json(const RunConfig& c) {
    return {{"ensemble", measure_name(c.spec.measure)},
            {"dims", dims_string(c.spec.dims)},
            {"rank", c.spec.rank},
            {"samples", c.n_samples},
            {"seed", c.seed},
            {"streams", c.n_streams},
            {"bins", c.n_bins},
            {"ppt_tol", c.ppt_tol}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.spec.measure = parse_measure(j.at("ensemble").get<std::string>());
    c.spec.dims = parse_dims(j.at("dims").get<std::string>());
    c.spec.rank = j.at("rank").get<std::size_t>();
    c.n_samples = j.at("samples").get<std::uint64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.n_streams = j.at("streams").get<std::size_t>();
    c.n_bins = j.at("bins").get<std::size_t>();
    c.ppt_tol = j.at("ppt_tol").get<double>();
    return c;
}

inline nlohmann::json interval_json(const Interval& i) { return nlohmann::json::array({i.lo, i.hi}); }

inline Interval interval_from_json(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline nlohmann::json to_json(const OutputRecord& rec) {
    const auto& st = rec.statistics;
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& b : st.bins) bins.push_back({{"total", b.total}, {"separable", b.separable}});

    nlohmann::json per_bin = nlohmann::json::array();
    for (const auto& b : rec.report.per_bin) {
        per_bin.push_back({{"radius_lo", b.radius_lo},
                           {"radius_hi", b.radius_hi},
                           {"total", b.total},
                           {"separable", b.separable},
                           {"p_sep", b.p_sep ? nlohmann::json(*b.p_sep) : nlohmann::json(nullptr)},
                           {"ci95", b.ci95 ? interval_json(*b.ci95) : nlohmann::json(nullptr)}});
    }
    return {{"schema", rec.schema},
            {"config", to_json(st.config)},
            {"statistics",
             {{"total", st.total},
              {"separable", st.separable},
              {"witness_certified", st.witness_certified},
              {"witness_conflicts", st.witness_conflicts},
              {"elapsed_seconds", st.elapsed_seconds},
              {"valid", st.valid},
              {"error", st.error},
              {"bins", bins}}},
            {"report",
             {{"p_sep", rec.report.p_sep},
              {"std_error", rec.report.std_error},
              {"ci95", interval_json(rec.report.ci95)},
              {"per_bin", per_bin}}},
            {"provenance",
             {{"seed", rec.provenance.seed},
              {"n_streams", rec.provenance.n_streams},
              {"build", rec.provenance.build},
              {"timestamp", rec.provenance.timestamp}}}};
}

inline OutputRecord record_from_json(const nlohmann::json& j) {
    OutputRecord rec;
    rec.schema = j.at("schema").get<std::string>();
    if (rec.schema != kRecordSchema) {
        throw Error(ErrorCode::InvalidArgument, "unsupported record schema '" + rec.schema + "'");
    }
    const auto& js = j.at("statistics");
    auto& st = rec.statistics;
    st.config = run_config_from_json(j.at("config"));
    st.total = js.at("total").get<std::uint64_t>();
    st.separable = js.at("separable").get<std::uint64_t>();
    st.witness_certified = js.at("witness_certified").get<std::uint64_t>();
    st.witness_conflicts = js.at("witness_conflicts").get<std::uint64_t>();
    st.elapsed_seconds = js.at("elapsed_seconds").get<double>();
    st.valid = js.at("valid").get<bool>();
    st.error = js.at("error").get<std::string>();
    for (const auto& b : js.at("bins")) {
        st.bins.push_back({b.at("total").get<std::uint64_t>(), b.at("separable").get<std::uint64_t>()});
    }

    const auto& jr = j.at("report");
    rec.report.p_sep = jr.at("p_sep").get<double>();
    rec.report.std_error = jr.at("std_error").get<double>();
    rec.report.ci95 = interval_from_json(jr.at("ci95"));
    for (const auto& b : jr.at("per_bin")) {
        BinReport br;
        br.radius_lo = b.at("radius_lo").get<double>();
        br.radius_hi = b.at("radius_hi").get<double>();
        br.total = b.at("total").get<std::uint64_t>();
        br.separable = b.at("separable").get<std::uint64_t>();
        if (!b.at("p_sep").is_null()) br.p_sep = b.at("p_sep").get<double>();
        if (!b.at("ci95").is_null()) br.ci95 = interval_from_json(b.at("ci95"));
        rec.report.per_bin.push_back(br);
    }

    const auto& jp = j.at("provenance");
    rec.provenance.seed = jp.at("seed").get<std::uint64_t>();
    rec.provenance.n_streams = jp.at("n_streams").get<std::size_t>();
    rec.provenance.build = jp.at("build").get<std::string>();
    rec.provenance.timestamp = jp.at("timestamp").get<std::string>();
    return rec;
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest decimal that parses back to the same double.
inline std::string decimal(double x) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) return "nan";
    return std::string(buf.data(), end);
}

inline void write_bins_csv(std::ostream& out, const ProbabilityReport& rep) {
    out << kCsvHeader << '\n';
    for (const auto& b : rep.per_bin) {
        out << decimal(b.radius_lo) << ',' << decimal(b.radius_hi) << ',' << b.total << ',' << b.separable << ',';
        if (b.empty()) {
            out << "nan,nan,nan\n";
        } else {
            out << decimal(*b.p_sep) << ',' << decimal(b.ci95->lo) << ',' << decimal(b.ci95->hi) << '\n';
        }
    }
}

}  // namespace qsep
