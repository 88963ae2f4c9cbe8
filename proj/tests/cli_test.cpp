// Copyright 2026 The fockswap Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cli_app.hpp"

namespace fs = fockswap;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "fockswap");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = fs::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli({"scheme-a"}).code, 0);
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"no-such-scheme"}).code, 2);
    EXPECT_EQ(run_cli({"scheme-a", "--bogus"}).code, 2);
    EXPECT_EQ(run_cli({"scheme-a", "--tau", "0.1", "--tau2", "0.01"}).code, 2);
    EXPECT_EQ(run_cli({"scheme-a", "--tau2", "1.5"}).code, 2);
    EXPECT_EQ(run_cli({"scheme-a", "--eta", "2"}).code, 2);
    EXPECT_EQ(run_cli({"scheme-b", "--epsilon", "0"}).code, 2);
    EXPECT_EQ(run_cli({"scheme-a", "--format", "xml"}).code, 2);
    EXPECT_EQ(run_cli({"scheme-a", "--shots", "0"}).code, 2);
    EXPECT_EQ(run_cli({"scheme-a", "--param", "eta", "--from", "0", "--to", "1", "--steps", "0"}).code, 2);
    EXPECT_EQ(run_cli({"theta", "--param", "eta", "--values", "0.5"}).code, 2);
    auto bad = run_cli({"scheme-a", "--tau2", "-1"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_FALSE(bad.err.empty());
}

TEST(Cli, VerifyPassesForEveryScheme) {
    for (std::vector<std::string> args : {std::vector<std::string>{"scheme-a", "--tau2", "1e-3"},
                                          {"scheme-b", "--epsilon", "0.1"},
                                          {"scheme-b", "--variant", "pbs", "--eta", "0.7"},
                                          {"verify-phase", "--eta", "0.8"},
                                          {"theta", "--theta", "0.3"},
                                          {"bell-check"},
                                          {"postselect-pol"},
                                          {"postselect-vac"}}) {
        args.push_back("--verify");
        auto r = run_cli(args);
        EXPECT_EQ(r.code, 0) << args[0] << ": " << r.err;
    }
    // Beyond the oracle's size limits: reported as a usage problem, not a mismatch.
    EXPECT_EQ(run_cli({"scheme-a", "--order", "2", "--verify"}).code, 2);
}

TEST(Cli, TableShowsHeadlineFidelity) {
    auto r = run_cli({"scheme-a", "--tau2", "1e-3", "--eta", "1", "--order", "1", "--format", "table"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.999500249875"), std::string::npos) << r.out;
}

TEST(Cli, ZeroTauGivesZeroProbabilities) {
    auto r = run_cli({"scheme-a", "--tau2", "0", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    for (const auto& e : j.at("events")) EXPECT_EQ(e.at("probability").get<double>(), 0.0);
}

TEST(Cli, OutputIsByteStable) {
    for (std::vector<std::string> args :
         {std::vector<std::string>{"scheme-a", "--format", "json", "--shots", "1000", "--seed", "5"},
          {"scheme-b", "--format", "csv"},
          {"verify-phase", "--format", "table", "--shots", "100"},
          {"postselect-pol", "--format", "json"},
          {"scheme-b", "--param", "epsilon", "--values", "0.3,0.1,0.03"},
          {"verify-phase", "--param", "eta", "--from", "0", "--to", "1", "--steps", "11", "--format", "json"}}) {
        auto a = run_cli(args), b = run_cli(args);
        EXPECT_EQ(a.code, 0);
        EXPECT_EQ(a.out, b.out);
    }
    auto s1 = run_cli({"scheme-a", "--format", "json", "--shots", "100000", "--seed", "5"});
    auto s2 = run_cli({"scheme-a", "--format", "json", "--shots", "100000", "--seed", "6"});
    EXPECT_NE(s1.out, s2.out);
}

TEST(Cli, CsvRoundTrips) {
    auto r = run_cli({"verify-phase", "--param", "eta", "--values", "0.25,0.8", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    auto rows = parse_csv(r.out);
    ASSERT_GT(rows.size(), 1u);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), fs::kCsvHeader);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_EQ(rows[i].size(), 6u) << i;
        for (std::size_t c : {1u, 3u, 4u, 5u}) {
            if (rows[i][c].empty()) continue;
            EXPECT_EQ(fs::format_number(std::stod(rows[i][c])), rows[i][c]);
        }
    }
}

TEST(Cli, SweepMatchesSingleRuns) {
    auto sweep = parse_csv(run_cli({"scheme-a", "--param", "tau2", "--from", "0.01", "--to", "0.01", "--steps", "1"}).out);
    auto single = parse_csv(run_cli({"scheme-a", "--tau2", "0.01", "--format", "csv"}).out);
    ASSERT_EQ(sweep.size(), single.size());
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        EXPECT_EQ(sweep[i][0], "tau2");
        EXPECT_EQ(sweep[i][1], "0.01");
        for (std::size_t c = 2; c < 6; ++c) EXPECT_EQ(sweep[i][c], single[i][c]);
    }
}

TEST(Cli, SweepRowsAreOrdered) {
    auto rows = parse_csv(run_cli({"scheme-b", "--param", "epsilon", "--values", "0.3,0.1,0.03"}).out);
    ASSERT_EQ(rows.size(), 1u + 3 * 2);
    EXPECT_EQ(rows[1][1], "0.3");
    EXPECT_EQ(rows[1][2], "d2_click");
    EXPECT_EQ(rows[2][2], "d3_click");
    EXPECT_EQ(rows[6][1], "0.03");
}

TEST(Cli, EfficiencySweepOnPhaseCheck) {
    auto r = run_cli({"verify-phase", "--ideal", "--param", "eta", "--from", "0", "--to", "1", "--steps", "11"});
    ASSERT_EQ(r.code, 0);
    int seen = 0;
    for (const auto& row : parse_csv(r.out)) {
        if (row.size() < 4 || row[2] != "P(D3|event1)") continue;
        const double eta = std::stod(row[1]);
        if (eta == 0.0) {
            EXPECT_TRUE(row[3].empty());
        } else {
            EXPECT_NEAR(std::stod(row[3]), eta, 1e-12);
        }
        ++seen;
    }
    EXPECT_EQ(seen, 11);
}

TEST(Cli, EpsilonSweepSlope) {
    auto rows = parse_csv(run_cli({"scheme-b", "--param", "epsilon", "--values", "0.3,0.1,0.03"}).out);
    std::vector<double> x, y;
    for (const auto& row : rows)
        if (row.size() == 6 && row[2] == "d2_click") {
            x.push_back(std::log(std::stod(row[1])));
            y.push_back(std::log(1.0 - std::stod(row[4])));
        }
    ASSERT_EQ(x.size(), 3u);
    double mx = (x[0] + x[1] + x[2]) / 3, my = (y[0] + y[1] + y[2]) / 3, sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    EXPECT_NEAR(sxy / sxx, 2.0, 0.1);
}

TEST(Cli, JsonSchema) {
    auto r = run_cli({"verify-phase", "--eta", "0", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"scheme", "params", "events", "coincidences", "metrics", "distribution", "notes", "dropped_mass"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_TRUE(j["coincidences"]["conditional"]["P(D3|event1)"].is_null());
}
