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

// qsep-mc command line.
//
//   qsep-mc run    --ensemble {hs,bures} --dims {2x2,2x3} --rank k --samples n
//                  --seed s [--streams n] [--bins n] [--ppt-tol x]
//                  [--csv path] [--json path|stdout]
//   qsep-mc tables [--samples n] [--seed s] [--streams n] [--only tok,tok...]
//
// Exit codes: 0 success, 1 runtime error (or a failed table row), 2 usage.

#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qsep/estimator.hpp"
#include "qsep/record.hpp"
#include "qsep/reference_tables.hpp"

namespace qsep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct RunOptions {
    std::string ensemble = "hs";
    std::string dims = "2x2";
    long long rank = 0;  // 0: full rank
    long long samples = 1'000'000;
    std::uint64_t seed = 1;
    long long streams = 0;  // 0: machine parallelism
    long long bins = 20;
    double ppt_tol = kDefaultPptTol;
    std::string csv;
    std::string json = "stdout";
};

struct TableOptions {
    std::optional<long long> samples;
    std::uint64_t seed = 20180101;
    long long streams = 0;
    std::vector<std::string> only;
};

inline std::size_t default_streams() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Builds a validated RunConfig; throws InvalidArgument with a user-facing
/// message on bad values.
inline RunConfig make_run_config(const RunOptions& o) {
    RunConfig c;
    c.spec.measure = parse_measure(o.ensemble);
    c.spec.dims = parse_dims(o.dims);
    const auto n = static_cast<long long>(c.spec.size());
    const long long rank = o.rank == 0 ? n : o.rank;
    if (rank < 1 || rank > n) {
        throw Error(ErrorCode::InvalidArgument, "rank must be in 1.." + std::to_string(n));
    }
    c.spec.rank = static_cast<std::size_t>(rank);
    if (o.samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be at least 1");
    if (o.streams < 0) throw Error(ErrorCode::InvalidArgument, "streams must be at least 1");
    if (o.bins < 1) throw Error(ErrorCode::InvalidArgument, "bins must be at least 1");
    c.n_samples = static_cast<std::uint64_t>(o.samples);
    c.seed = o.seed;
    c.n_streams = o.streams == 0 ? default_streams() : static_cast<std::size_t>(o.streams);
    c.n_bins = static_cast<std::size_t>(o.bins);
    c.ppt_tol = o.ppt_tol;
    c.validate();
    return c;
}

inline int execute_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = make_run_config(o);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }
    try {
        const auto stats = run(config);
        if (!stats.valid) {
            err << stats.error << '\n';
            return kExitRuntime;
        }
        const auto rec = make_record(stats);
        const std::string body = to_json(rec).dump(2);
        if (o.json == "stdout" || o.json == "-") {
            out << body << '\n';
        } else {
            std::ofstream f(o.json);
            if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open " + o.json);
            f << body << '\n';
        }
        if (!o.csv.empty()) {
            std::ofstream f(o.csv);
            if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open " + o.csv);
            write_bins_csv(f, rec.report);
        }
        char line[160];
        std::snprintf(line, sizeof line, "p_sep = %.6f  ci95 = [%.6f, %.6f]  n = %llu  (%.1f s)",
                      rec.report.p_sep, rec.report.ci95.lo, rec.report.ci95.hi,
                      static_cast<unsigned long long>(stats.total), stats.elapsed_seconds);
        err << line << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitRuntime;
    }
}

inline int execute_tables(const TableOptions& o, std::ostream& out, std::ostream& err) {
    const auto& rows = reference_rows();
    std::vector<const ReferenceRow*> selected;
    for (const auto& token : o.only) {
        if (std::none_of(rows.begin(), rows.end(), [&](const ReferenceRow& r) { return r.matches(token); })) {
            err << "unknown --only token '" << token << "'\n";
            return kExitUsage;
        }
    }
    for (const auto& row : rows) {
        if (o.only.empty() ||
            std::any_of(o.only.begin(), o.only.end(), [&](const std::string& t) { return row.matches(t); })) {
            selected.push_back(&row);
        }
    }
    if (o.samples && *o.samples < 1) {
        err << "samples must be at least 1\n";
        return kExitUsage;
    }
    if (o.streams < 0) {
        err << "streams must be at least 1\n";
        return kExitUsage;
    }

    char line[256];
    std::snprintf(line, sizeof line, "%-16s %9s %9s %21s %9s  %s", "row", "published", "estimate", "ci95",
                  "samples", "result");
    out << line << '\n';
    bool all_pass = true;
    for (const ReferenceRow* selected_row : selected) {
        const auto& row = *selected_row;
        RunConfig config;
        config.spec = row.spec;
        config.n_samples = o.samples ? static_cast<std::uint64_t>(*o.samples) : row.default_samples;
        config.seed = o.seed + static_cast<std::uint64_t>(&row - rows.data());
        config.n_streams = o.streams == 0 ? default_streams() : static_cast<std::size_t>(o.streams);
        try {
            const auto stats = run(config);
            if (!stats.valid) throw Error(ErrorCode::InvalidArgument, stats.error);
            const auto rep = report(stats);
            const auto verdict = judge(row, stats);
            all_pass = all_pass && verdict.pass;
            std::snprintf(line, sizeof line, "%-16s %9.4f %9.5f [%8.5f, %8.5f] %9llu  %s", row.id.c_str(),
                          row.published, rep.p_sep, rep.ci95.lo, rep.ci95.hi,
                          static_cast<unsigned long long>(stats.total), verdict.pass ? "PASS" : "FAIL");
            out << line << std::endl;
        } catch (const std::exception& e) {
            err << row.id << ": " << e.what() << '\n';
            return kExitRuntime;
        }
    }
    return all_pass ? kExitOk : kExitRuntime;
}

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
inline int main(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Monte-Carlo separability probabilities of random two-party states", "qsep-mc"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "estimate the separability probability of one ensemble");
    run_cmd->add_option("--ensemble", run_opts.ensemble, "hs or bures")
        ->check(CLI::IsMember({"hs", "bures"}))
        ->capture_default_str();
    run_cmd->add_option("--dims", run_opts.dims, "2x2 or 2x3")
        ->check(CLI::IsMember({"2x2", "2x3"}))
        ->capture_default_str();
    run_cmd->add_option("--rank", run_opts.rank, "state rank (default: full)");
    run_cmd->add_option("--samples", run_opts.samples, "number of states")->capture_default_str();
    run_cmd->add_option("--seed", run_opts.seed, "64-bit seed")->capture_default_str();
    run_cmd->add_option("--streams", run_opts.streams, "work shares (default: machine parallelism)");
    run_cmd->add_option("--bins", run_opts.bins, "Bloch-radius bins")->capture_default_str();
    run_cmd->add_option("--ppt-tol", run_opts.ppt_tol, "partial-transpose eigenvalue tolerance")
        ->capture_default_str();
    run_cmd->add_option("--csv", run_opts.csv, "write per-bin CSV here");
    run_cmd->add_option("--json", run_opts.json, "record destination: path or stdout")->capture_default_str();

    TableOptions table_opts;
    auto* tables_cmd = app.add_subcommand("tables", "reproduce the reference separability tables");
    tables_cmd->add_option("--samples", table_opts.samples, "override every row's sample count");
    tables_cmd->add_option("--seed", table_opts.seed, "base seed (row i uses seed + i)")->capture_default_str();
    tables_cmd->add_option("--streams", table_opts.streams, "work shares (default: machine parallelism)");
    tables_cmd->add_option("--only", table_opts.only, "row filter tokens, e.g. rank2,rank1")->delimiter(',');

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    auto* active = run_cmd->parsed() ? run_cmd : tables_cmd;
    const int code = active == run_cmd ? execute_run(run_opts, out, err) : execute_tables(table_opts, out, err);
    if (code == kExitUsage) err << active->help();
    return code;
}

}  // namespace qsep::cli
