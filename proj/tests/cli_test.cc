// Copyright 2026 The phasecert Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "phasecert/cli.h"

namespace phasecert::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("phasecert_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }
    std::string path(const std::string &name) const {
        return (dir_ / name).string();
    }
    fs::path dir_;
};

TEST_F(CliTest, SimulateWritesDeterministicFiles) {
    const auto a = invoke({"simulate", "--nbar", "0", "--eta", "0.07", "--count", "260000", "--seed", "1", "--out",
                           path("a.txt")});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_NE(a.out.find("count=260000"), std::string::npos);
    invoke({"simulate", "--nbar", "0", "--eta", "0.07", "--count", "260000", "--seed", "1", "--out", path("b.txt")});
    EXPECT_EQ(slurp(path("a.txt")), slurp(path("b.txt")));
    std::ifstream f(path("a.txt"));
    std::string line;
    std::size_t lines = 0;
    while (std::getline(f, line)) {
        ++lines;
    }
    EXPECT_EQ(lines, 260001u);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(invoke({"simulate", "--nbar", "0", "--eta", "0.5", "--count", "0", "--seed", "1", "--out", path("x")}).code,
              2);
    EXPECT_EQ(invoke({"simulate", "--nbar", "0", "--eta", "1.5", "--count", "5", "--seed", "1", "--out", path("x")}).code,
              2);
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"bogus"}).code, 2);
    EXPECT_EQ(invoke({"scan", "--steps", "1", "--out", path("s.csv")}).code, 2);
    const auto unknown = invoke({"certify", "--nbar", "1", "--eta", "0.5", "--certifiers", "eq2,eq9"});
    EXPECT_EQ(unknown.code, 2);
    EXPECT_NE(unknown.err.find("eq1, eq2, wigner-negativity, mandel"), std::string::npos) << unknown.err;
    EXPECT_EQ(invoke({"certify", "--in", path("missing.txt")}).code, 2);  // no seed in dataset mode
    EXPECT_EQ(invoke({"threshold", "--certifier", "nope", "--nbar", "1"}).code, 2);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, RuntimeErrorsCarryLocation) {
    {
        std::ofstream f(path("bad.txt"));
        f << "# quadrature-v1 count=2 seed=1 nbar=na eta=na\n0.1,0.2\n0.2,oops\n";
    }
    const auto r = invoke({"reconstruct", "--in", path("bad.txt"), "--out", path("r.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
    EXPECT_EQ(invoke({"reconstruct", "--in", path("missing.txt"), "--out", path("r.json")}).code, 1);

    ASSERT_EQ(invoke({"simulate", "--nbar", "2", "--eta", "1", "--count", "20000", "--seed", "3", "--out",
                      path("bright.txt")})
                  .code,
              0);
    const auto c = invoke({"reconstruct", "--in", path("bright.txt"), "--cutoff", "4", "--out", path("r.json")});
    EXPECT_EQ(c.code, 1);
    EXPECT_NE(c.err.find("cutoff"), std::string::npos) << c.err;
}

TEST_F(CliTest, ReconstructVacuum) {
    ASSERT_EQ(invoke({"simulate", "--nbar", "0", "--eta", "0", "--count", "50000", "--seed", "2", "--out",
                      path("vac.txt")})
                  .code,
              0);
    const auto r = invoke({"reconstruct", "--in", path("vac.txt"), "--out", path("vac.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(slurp(path("vac.json")));
    EXPECT_EQ(doc["schema_version"], kSchemaVersion);
    EXPECT_EQ(doc["command"], "reconstruct");
    EXPECT_GT(doc["outputs"]["probabilities"][0].get<double>(), 0.99);
    EXPECT_TRUE(doc.contains("warnings"));
}

TEST_F(CliTest, CertifyAnalytic) {
    const auto r = invoke({"certify", "--nbar", "0.98", "--eta", "0.3", "--certifiers", "eq2", "--out", path("c.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(slurp(path("c.json")));
    const auto &rep = doc["outputs"]["reports"][0];
    EXPECT_EQ(rep["certifier"], "eq2");
    EXPECT_NEAR(rep["value"].get<double>(), -1.03e-2, 1e-4);
    EXPECT_TRUE(rep["detected"].get<bool>());
    EXPECT_EQ(rep["sigma"].get<double>(), 0.0);

    const auto thermal = invoke({"certify", "--nbar", "0.98", "--eta", "0.9", "--no-add-photon", "--out",
                                 path("t.json")});
    ASSERT_EQ(thermal.code, 0);
    for (const auto &rep2 : nlohmann::json::parse(slurp(path("t.json")))["outputs"]["reports"]) {
        EXPECT_FALSE(rep2["detected"].get<bool>()) << rep2["certifier"];
    }
}

TEST_F(CliTest, CertifyDataset) {
    ASSERT_EQ(invoke({"simulate", "--nbar", "0", "--eta", "0.5", "--count", "50000", "--seed", "4", "--out",
                      path("d.txt")})
                  .code,
              0);
    const auto r = invoke({"certify", "--in", path("d.txt"), "--certifiers", "eq2,mandel", "--resamples", "5",
                           "--seed", "9", "--out", path("d.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(slurp(path("d.json")));
    for (const auto &rep : doc["outputs"]["reports"]) {
        EXPECT_GT(rep["sigma"].get<double>(), 0.0);
        EXPECT_TRUE(rep["detected"].get<bool>()) << rep["certifier"];
    }
}

TEST_F(CliTest, ScanTables) {
    const auto r = invoke({"scan", "--nbar-min", "1.2", "--nbar-max", "1.2", "--eta-min", "0.45", "--eta-max", "0.45",
                           "--out", path("one.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string one = slurp(path("one.csv"));
    EXPECT_EQ(one.substr(0, one.find('\n')), "nbar,eta,eq1,eq2,wmin,mandel,label");
    EXPECT_NE(one.find("1.2,0.45,"), std::string::npos);
    EXPECT_NE(one.find("detected-only-by-phase-space-inequality"), std::string::npos);

    ASSERT_EQ(invoke({"scan", "--steps", "3", "--eta-steps", "2", "--out", path("a.csv")}).code, 0);
    ASSERT_EQ(invoke({"scan", "--steps", "3", "--eta-steps", "2", "--out", path("b.csv")}).code, 0);
    const std::string a = slurp(path("a.csv"));
    EXPECT_EQ(a, slurp(path("b.csv")));
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 7);
}

TEST_F(CliTest, Threshold) {
    const auto w = invoke({"threshold", "--certifier", "wigner-negativity", "--nbar", "0.98"});
    ASSERT_EQ(w.code, 0);
    EXPECT_NE(w.out.find("critical_eta=0.500"), std::string::npos) << w.out;
    const auto e0 = invoke({"threshold", "--certifier", "eq2", "--nbar", "0", "--out", path("t.json")});
    ASSERT_EQ(e0.code, 0);
    EXPECT_NE(e0.out.find("no-threshold"), std::string::npos);
    const auto e98 = invoke({"threshold", "--certifier", "eq2", "--nbar", "0.98"});
    EXPECT_NE(e98.out.find("critical_eta=0.16"), std::string::npos) << e98.out;
}

}  // namespace
}  // namespace phasecert::cli
