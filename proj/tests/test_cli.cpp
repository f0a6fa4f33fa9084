// Copyright 2026 The irb Authors
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

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "irb/cli.hpp"

namespace irb {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(std::move(args), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag = "") {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("irb_") + info->test_suite_name() + "_" + info->name() + tag);
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string config(const std::string& name) { return std::string(IRB_CONFIG_DIR) + "/" + name; }

TEST(Cli, MinimalSimulateWritesDatasetAndManifest) {
  TempDir dir;
  const auto o = run_cli({"simulate", config("minimal.json"), "--output", dir.path().string(), "--threads", "2"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(dir / "standard.csv"));
  EXPECT_TRUE(fs::exists(dir / "standard.json"));
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  std::size_t csv = 0;
  for (const auto& entry : fs::directory_iterator(dir.path())) {
    if (entry.path().extension() == ".csv" && !entry.path().stem().string().ends_with("_fit")) ++csv;
  }
  EXPECT_EQ(csv, 1u);
  const auto manifest = nlohmann::json::parse(read_text_file(dir / "manifest.json"));
  EXPECT_EQ(manifest.at("tool"), "irb");
  EXPECT_EQ(manifest.at("seed"), 1);
  EXPECT_EQ(manifest.at("threads"), 2);
  EXPECT_EQ(manifest.at("config").at("K"), 8);
  const auto data = load_dataset_csv(dir / "standard.csv");
  EXPECT_EQ(data.points.size(), 3u);
  EXPECT_EQ(dataset_from_json(nlohmann::json::parse(read_text_file(dir / "standard.json"))).points, data.points);
}

TEST(Cli, TwoTargetConfigProducesThreeDatasets) {
  TempDir dir;
  const auto o = run_cli({"simulate", config("x90_y90.json"), "--output", dir.path().string()});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* stem : {"standard", "interleaved_X90", "interleaved_Y90"}) {
    const auto data = load_dataset_csv(dir / (std::string(stem) + ".csv"));
    EXPECT_EQ(data.points.size(), 48u) << stem;
    EXPECT_EQ(data.points.front().sequences, 32u);
  }
  EXPECT_EQ(load_dataset_csv(dir / "interleaved_X90.csv").mode, RbMode::kInterleaved);
}

TEST(Cli, SameSeedGivesIdenticalFilesAcrossThreadCounts) {
  TempDir a("_a"), b("_b");
  ASSERT_EQ(run_cli({"simulate", config("two_qubit.json"), "--output", (a / "run"), "--seed", "99", "--threads", "1"}).code, 0);
  ASSERT_EQ(run_cli({"simulate", config("two_qubit.json"), "--output", (b / "run"), "--seed", "99", "--threads", "4"}).code, 0);
  for (const char* f : {"standard.csv", "interleaved_cnot.csv", "standard_fit.csv"}) {
    EXPECT_EQ(read_text_file(a / (std::string("run/") + f)), read_text_file(b / (std::string("run/") + f))) << f;
  }
  TempDir c("_c");
  ASSERT_EQ(run_cli({"simulate", config("two_qubit.json"), "--output", (c / "run"), "--seed", "100"}).code, 0);
  EXPECT_NE(read_text_file(a / "run/standard.csv"), read_text_file(c / "run/standard.csv"));
}

TEST(Cli, EstimateMatchesWorkedExample) {
  TempDir dir;
  const auto o = run_cli({"estimate", "--p", "0.984", "--p-err", "0.004", "--pc", "0.978", "--pc-err", "0.005",
                          "--output", dir / "report.json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(read_text_file(dir / "report.json"));
  EXPECT_NEAR(j.at("r_est").get<double>(), 0.003, 5e-4);
  EXPECT_EQ(j.at("interval").at(0).get<double>(), 0.0);
  EXPECT_NEAR(j.at("interval").at(1).get<double>(), 0.016, 1e-3);
  EXPECT_NE(o.out.find("r_est"), std::string::npos);
}

TEST(Cli, EstimateRejectsInvalidParameters) {
  EXPECT_EQ(run_cli({"estimate", "--p", "1.5", "--pc", "0.9"}).code, 2);
  EXPECT_EQ(run_cli({"estimate", "--p", "0", "--pc", "0.9"}).code, 2);
  EXPECT_EQ(run_cli({"estimate", "--p", "0.9"}).code, 2);
  EXPECT_EQ(run_cli({"estimate", "--p", "0.9", "--pc", "0.8", "--noise-class", "odd"}).code, 2);
}

TEST(Cli, MalformedCsvExitsWithLineNumber) {
  TempDir dir;
  write_text_file(dir / "good.csv", "m,mean,stderr,K,mode\n1,0.9,0.01,5,standard\n");
  write_text_file(dir / "bad.csv", "m,mean,stderr,K,mode\n1,0.9,0.01,5,interleaved\n2,zero,0.01,5,interleaved\n");
  const auto o = run_cli({"analyze", dir / "good.csv", dir / "bad.csv"});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("line 3"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("bad.csv"), std::string::npos) << o.err;
}

TEST(Cli, InputErrorsExitTwo) {
  TempDir dir;
  write_text_file(dir / "broken.json", "{\"n\": 1,");
  write_text_file(dir / "invalid.json", R"({"lengths": [1, 2], "K": 0})");
  EXPECT_EQ(run_cli({"simulate", dir / "broken.json", "--output", dir / "o"}).code, 2);
  EXPECT_EQ(run_cli({"simulate", dir / "invalid.json", "--output", dir / "o"}).code, 2);
  EXPECT_EQ(run_cli({"simulate", dir / "missing.json"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"simulate", config("minimal.json"), "--model", "third"}).code, 2);
}

TEST(Cli, AnalyzeRecoversInjectedErrorWithinBound) {
  TempDir dir;
  ASSERT_EQ(run_cli({"simulate", config("x90_y90.json"), "--output", dir.path().string()}).code, 0);
  for (const auto& [label, r_true] :
       std::vector<std::pair<std::string, double>>{{"X90", average_fidelity(depolarizing(0.994, 1)).gate_error},
                                                   {"Y90", theoretical_overrotation_error(0.11)}}) {
    const auto o = run_cli({"analyze", dir / "standard.csv", dir / ("interleaved_" + label + ".csv"), "--label", label,
                            "--output", dir / (label + ".json")});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find(label), std::string::npos);
    const auto j = nlohmann::json::parse(read_text_file(dir / (label + ".json")));
    const auto& rep = j.at("report");
    const double slack = 3 * rep.at("r_est_err").get<double>() + 1e-9;
    EXPECT_GE(r_true, rep.at("raw_interval").at(0).get<double>() - slack) << label;
    EXPECT_LE(r_true, rep.at("raw_interval").at(1).get<double>() + slack) << label;
  }
}

TEST(Cli, AnalyzeDepolarizingClassIsExact) {
  TempDir dir;
  ASSERT_EQ(run_cli({"simulate", config("x90_y90.json"), "--output", dir.path().string()}).code, 0);
  const auto o = run_cli({"analyze", dir / "standard.csv", dir / "interleaved_X90.csv", "--noise-class",
                          "depolarizing", "--output", dir / "r.json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rep = nlohmann::json::parse(read_text_file(dir / "r.json")).at("report");
  EXPECT_EQ(rep.at("E").get<double>(), 0.0);
  EXPECT_NEAR(rep.at("r_est").get<double>(), 0.003, 1e-9);
}

TEST(Cli, MiscalibrationRowsFollowTheory) {
  TempDir dir;
  std::ostringstream out;
  cli::MiscalibrationOptions opts;
  opts.config_path = config("miscalibration.json");
  opts.output_dir = dir.path().string();
  opts.threads = 2;
  const auto result = cli::cmd_miscalibration(opts, out);
  ASSERT_EQ(result.rows.size(), 3u);
  EXPECT_NEAR(result.rows[0].report.r_est, 0.0, 1e-9);
  EXPECT_NEAR(result.rows[0].report.p_interleaved, result.standard_fit.p, 1e-9);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    EXPECT_NEAR(row.report.r_est, row.r_theory, 3 * row.report.r_est_err + 1e-3);
    EXPECT_TRUE(row.report.contains(row.r_true));
    if (i > 0) {
      EXPECT_GT(row.r_theory, result.rows[i - 1].r_theory);
      EXPECT_GE(row.report.upper, result.rows[i - 1].report.upper);
    }
  }
  EXPECT_GT(result.rows[2].report.upper, result.rows[0].report.upper);
  EXPECT_NE(out.str().find("pi/20"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "miscalibration.json"));
  EXPECT_TRUE(fs::exists(dir / "interleaved_eps2.csv"));
}

TEST(Cli, CliffordActions) {
  auto o = run_cli({"clifford", "compose", "X90", "X90"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, parse_target("X180", 1).to_text() + "\n");
  o = run_cli({"clifford", "inverse", "X90"});
  EXPECT_EQ(o.out, parse_target("X-90", 1).to_text() + "\n");
  o = run_cli({"clifford", "decompose", "H"});
  EXPECT_NE(o.out.find("X180 Y-90"), std::string::npos);
  o = run_cli({"clifford", "decompose", "I"});
  EXPECT_EQ(o.code, 0);
  o = run_cli({"clifford", "show", "CNOT", "--qubits", "2"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(run_cli({"clifford", "inverse", "T"}).code, 2);
  EXPECT_EQ(run_cli({"clifford", "inverse", "X90", "Y90"}).code, 2);
  EXPECT_EQ(run_cli({"clifford", "decompose", "CNOT", "--qubits", "2"}).code, 2);
}

TEST(Cli, VersionFlag) {
  const auto o = run_cli({"--version"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("0.1.0"), std::string::npos);
}

Outcome run_process(const std::string& args, const std::string& env = "env -u RB_SEED") {
  Outcome o;
  const std::string command = env + " " + std::string(IRB_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) {
    o.code = -1;
    return o;
  }
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) o.out += buf;
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

TEST(CliProcess, ExitCodesAndOutput) {
  auto o = run_process("estimate --p 0.984 --pc 0.978");
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("\"r_est\""), std::string::npos);
  EXPECT_EQ(run_process("estimate --p 2 --pc 0.978").code, 2);
  EXPECT_EQ(run_process("").code, 2);
  TempDir dir;
  o = run_process("simulate " + config("minimal.json") + " --output " + dir.path().string());
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
}

TEST(CliProcess, EnvironmentSeedIsUsedUnlessFlagGiven) {
  TempDir dir;
  const std::string cfg = config("minimal.json");
  ASSERT_EQ(run_process("simulate " + cfg + " --output " + (dir / "flag") + " --seed 77").code, 0);
  ASSERT_EQ(run_process("simulate " + cfg + " --output " + (dir / "env"), "env RB_SEED=77").code, 0);
  ASSERT_EQ(run_process("simulate " + cfg + " --output " + (dir / "both") + " --seed 77", "env RB_SEED=5").code, 0);
  ASSERT_EQ(run_process("simulate " + cfg + " --output " + (dir / "config")).code, 0);
  EXPECT_EQ(nlohmann::json::parse(read_text_file(dir / "env/manifest.json")).at("seed"), 77);
  EXPECT_EQ(nlohmann::json::parse(read_text_file(dir / "both/manifest.json")).at("seed"), 77);
  EXPECT_EQ(nlohmann::json::parse(read_text_file(dir / "config/manifest.json")).at("seed"), 1);
  EXPECT_EQ(read_text_file(dir / "env/standard.csv"), read_text_file(dir / "flag/standard.csv"));
  EXPECT_EQ(run_process("simulate " + cfg + " --output " + (dir / "bad"), "env RB_SEED=abc").code, 2);
}

}  // namespace
}  // namespace irb
