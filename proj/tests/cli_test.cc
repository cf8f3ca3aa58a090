// Copyright 2026 The hhqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
};

Result run(const std::string &args) {
    auto log = fs::temp_directory_path() / "hhqec_cli_test.log";
    std::string cmd = std::string(HHQEC_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream f(log);
    std::stringstream ss;
    ss << f.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string &name) {
    auto d = fs::temp_directory_path() / ("hhqec_cli_" + name);
    fs::remove_all(d);
    return d;
}

TEST(Cli, BuildImprovedDuration) {
    auto d = fresh_dir("build_imp");
    auto r = run("build --variant improved --reset off --d 3 --out " + d.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("round_duration_ns 3200"), std::string::npos) << r.out;
    auto rep = nlohmann::json::parse(slurp(d / "durations.json"));
    EXPECT_EQ(rep["round_duration_ns"].get<double>(), 3200);
    EXPECT_TRUE(fs::exists(d / "patch.json"));
    EXPECT_TRUE(fs::exists(d / "circuit.txt"));
    EXPECT_TRUE(fs::exists(d / "manifest.json"));
}

TEST(Cli, BuildOriginalDuration) {
    auto d = fresh_dir("build_orig");
    auto r = run("build --variant original --d 3 --out " + d.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("round_duration_ns 11100"), std::string::npos) << r.out;
}

TEST(Cli, EvenDistanceIsUsageError) {
    auto r = run("build --d 4 --out " + fresh_dir("build_even").string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("odd"), std::string::npos) << r.out;
}

TEST(Cli, SeedIsMandatory) {
    auto r = run("memory --t 1..2 --shots 100 --out " + fresh_dir("noseed").string());
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, UnknownSubcommand) { EXPECT_EQ(run("frobnicate").code, 2); }

TEST(Cli, MemoryWritesFilesAndIsReproducible) {
    auto a = fresh_dir("mem_a"), b = fresh_dir("mem_b");
    std::string args = "memory --t 1..4 --shots 2000 --seed 7 --emit-plot-data --out ";
    ASSERT_EQ(run(args + a.string()).code, 0);
    ASSERT_EQ(run(args + b.string() + " --workers 2").code, 0);
    std::string csv = slurp(a / "points.csv");
    EXPECT_EQ(csv, slurp(b / "points.csv"));
    int rows = 0;
    for (char c : csv) rows += c == '\n';
    EXPECT_EQ(rows, 5);  // header + 4
    EXPECT_TRUE(fs::exists(a / "memory_tidy.csv"));
    auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
    EXPECT_EQ(m["command"], "memory");
    EXPECT_EQ(m["status"], "ok");
    EXPECT_EQ(m["config"]["seed"], "7");
    EXPECT_EQ(m["config"]["shots"], "2000");
    EXPECT_TRUE(nlohmann::json::parse(slurp(a / "fit.json")).contains("fit"));
}

TEST(Cli, StabilityRuns) {
    auto d = fresh_dir("stab");
    auto r = run("stability --t 1..6 --shots 2000 --seed 3 --emit-plot-data --out " + d.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(fs::exists(d / "stability_tidy.csv"));
}

TEST(Cli, BuildDemSampleDecodePipeline) {
    auto d = fresh_dir("pipe");
    ASSERT_EQ(run("build --rounds 3 --out " + d.string()).code, 0);
    auto c = (d / "circuit.txt").string(), p = (d / "patch.json").string();
    auto r = run("dem --circuit " + c + " --patch " + p + " --out " + d.string());
    ASSERT_EQ(r.code, 0) << r.out;
    r = run("sample --circuit " + c + " --patch " + p + " --shots 1000 --seed 4 --out " + d.string());
    ASSERT_EQ(r.code, 0) << r.out;
    r = run("decode --dem " + (d / "dem.txt").string() + " --detectors " + (d / "detectors.hhqf").string() +
            " --out " + d.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(fs::exists(d / "summary.csv"));
}

TEST(Cli, MissingInputIsRuntimeFailure) {
    auto d = fresh_dir("missing");
    auto r = run("dem --circuit /nonexistent/c.txt --patch /nonexistent/p.json --out " + d.string());
    EXPECT_EQ(r.code, 1);
    auto m = nlohmann::json::parse(slurp(d / "manifest.json"));
    EXPECT_EQ(m["status"], "failed");
}

TEST(Cli, RbSimultaneous) {
    auto d = fresh_dir("rb");
    auto r = run("rb --protocol simultaneous --qubits 0,1 --m 1,4,16 --k 5 --shots 200 --seed 2 --out " + d.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(fs::exists(d / "survival.csv"));
    EXPECT_TRUE(fs::exists(d / "rb.json"));
}

TEST(Cli, RbCorrelationFindsPlantedPair) {
    auto d = fresh_dir("corr");
    auto r = run("rb --protocol correlation --qubits 0..4 --k 5 --shots 4000 --seed 9 --crosstalk 0,2 "
                 "--crosstalk-p 0.05 --out " +
                 d.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("edges 1"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("edge 0 2"), std::string::npos) << r.out;
}

TEST(Cli, BadVariantIsUsageError) {
    EXPECT_EQ(run("rb --protocol midcircuit --variant maybe --seed 1 --out " + fresh_dir("badvar").string()).code, 2);
}

}  // namespace
