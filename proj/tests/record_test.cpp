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

#include "qsep/record.hpp"

#include <random>
#include <sstream>

#include "gtest/gtest.h"

using namespace qsep;

namespace {

RunConfig random_config(std::mt19937_64& gen) {
    RunConfig c;
    c.spec.measure = gen() % 2 ? Measure::Bures : Measure::HilbertSchmidt;
    c.spec.dims = gen() % 2 ? BipartiteDims{2, 3} : BipartiteDims{2, 2};
    c.spec.rank = 1 + gen() % c.spec.size();
    c.n_samples = 1 + gen() % 1'000'000'000'000ull;
    c.seed = gen();
    c.n_streams = 1 + gen() % 64;
    c.n_bins = 1 + gen() % 50;
    c.ppt_tol = std::ldexp(1.0 + static_cast<double>(gen() % 1000) / 997.0, -static_cast<int>(20 + gen() % 30));
    return c;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST(run_config_json, round_trips_random_configs) {
    std::mt19937_64 gen(99);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_config(gen);
        const auto back = run_config_from_json(nlohmann::json::parse(to_json(c).dump()));
        EXPECT_EQ(back.spec, c.spec);
        EXPECT_EQ(back.n_samples, c.n_samples);
        EXPECT_EQ(back.seed, c.seed);
        EXPECT_EQ(back.n_streams, c.n_streams);
        EXPECT_EQ(back.n_bins, c.n_bins);
        EXPECT_EQ(back.ppt_tol, c.ppt_tol);
    }
}

TEST(output_record_json, round_trips_real_run) {
    RunConfig c;
    c.spec = {Measure::Bures, {2, 2}, 4};
    c.n_samples = 3000;
    c.seed = 5;
    c.n_streams = 2;
    c.n_bins = 20;
    const auto rec = make_record(run(c));
    const auto text = to_json(rec).dump();
    EXPECT_EQ(record_from_json(nlohmann::json::parse(text)), rec);
    // Small run leaves high-radius bins unpopulated; those serialise as null.
    EXPECT_NE(text.find("\"p_sep\":null"), std::string::npos);
}

TEST(output_record_json, rejects_unknown_schema) {
    RunConfig c;
    c.n_samples = 10;
    auto j = to_json(make_record(run(c)));
    j["schema"] = "something-else";
    EXPECT_THROW(record_from_json(j), Error);
}

TEST(provenance, populated) {
    RunConfig c;
    c.n_samples = 10;
    c.seed = 314;
    c.n_streams = 3;
    const auto rec = make_record(run(c));
    EXPECT_EQ(rec.schema, kRecordSchema);
    EXPECT_EQ(rec.provenance.seed, 314u);
    EXPECT_EQ(rec.provenance.n_streams, 3u);
    EXPECT_EQ(rec.provenance.build.rfind("qsep-mc ", 0), 0u);
    ASSERT_EQ(rec.provenance.timestamp.size(), 20u);
    EXPECT_EQ(rec.provenance.timestamp.back(), 'Z');
}

TEST(bins_csv, header_and_one_row_per_bin) {
    RunConfig c;
    c.spec = {Measure::HilbertSchmidt, {2, 3}, 6};
    c.n_samples = 2000;
    c.seed = 8;
    const auto rec = make_record(run(c));
    std::ostringstream out;
    write_bins_csv(out, rec.report);
    const auto rows = lines(out.str());
    ASSERT_EQ(rows.size(), 21u);
    EXPECT_EQ(rows[0], kCsvHeader);
    std::uint64_t total = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream fields(rows[i]);
        std::vector<std::string> f;
        for (std::string cell; std::getline(fields, cell, ',');) f.push_back(cell);
        ASSERT_EQ(f.size(), 7u);
        total += std::stoull(f[2]);
        if (f[2] == "0") {
            EXPECT_EQ(f[4], "nan");
        }
    }
    EXPECT_EQ(total, 2000u);
}

TEST(decimal, shortest_round_trip) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(gen);
        EXPECT_EQ(std::stod(decimal(x)), x);
    }
    EXPECT_EQ(decimal(0.05), "0.05");
    EXPECT_EQ(decimal(1.0), "1");
}

TEST(parse, dims_and_measure) {
    EXPECT_EQ(parse_dims("2x3").b, 3u);
    EXPECT_EQ(parse_measure("bures"), Measure::Bures);
    EXPECT_THROW(parse_dims("3x3"), Error);
    EXPECT_THROW(parse_measure("haar"), Error);
}
