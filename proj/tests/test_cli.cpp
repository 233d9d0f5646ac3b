// Copyright 2026 The ChromaCycle Authors.
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

// Drives the installed binary end to end through the shell.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;
using chromacycle::testing::TempDir;
using nlohmann::json;

int run(const std::string& args) {
  const std::string cmd = std::string(CHROMACYCLE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int count_lines(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

// A small shared dataset plus a short cond-cyclegan run, built once for the suite.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir();
    ASSERT_EQ(run("synth-data --out " + q(data()) + " --n 4 --size 32 --seed 0"), 0);
    ASSERT_EQ(run("train --regime cond-cyclegan --data " + q(manifest()) + " --out " +
                  q(cond_run()) + " --iters 50 --seed 0 --image-size 32"),
              0);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static fs::path data() { return *dir_ / "data"; }
  static fs::path manifest() { return data() / "manifest.json"; }
  static fs::path cond_run() { return *dir_ / "cond"; }
  static fs::path scratch(const std::string& name) { return *dir_ / name; }

  static TempDir* dir_;
};
TempDir* Cli::dir_ = nullptr;

TEST_F(Cli, SynthDataWritesManifest) {
  EXPECT_TRUE(fs::exists(manifest()));
  const json m = json::parse(slurp(manifest()));
  EXPECT_EQ(m.at("entries").size(), 4u);
}

TEST_F(Cli, SynthDataRejectsZeroImages) {
  EXPECT_EQ(run("synth-data --out " + q(scratch("zero")) + " --n 0 --size 32 --seed 0"), 1);
}

TEST_F(Cli, SynthDataIsByteIdentical) {
  ASSERT_EQ(run("synth-data --out " + q(scratch("again")) + " --n 4 --size 32 --seed 0"), 0);
  for (const auto& e : fs::directory_iterator(data())) {
    if (e.path().extension() != ".png") continue;
    EXPECT_EQ(slurp(e.path()), slurp(scratch("again") / e.path().filename())) << e.path();
  }
}

TEST_F(Cli, TrainWritesFiveRowsPerIteration) {
  EXPECT_EQ(count_lines(cond_run() / "losses.csv"), 1 + 50 * 5);
  EXPECT_TRUE(fs::exists(cond_run() / "checkpoint.ckpt"));
  const json meta = json::parse(slurp(cond_run() / "run.json"));
  EXPECT_EQ(meta.at("regime"), "cond-cyclegan");
  EXPECT_EQ(meta.at("iterations"), 50);
}

TEST_F(Cli, TrainIsByteIdenticalAcrossRuns) {
  ASSERT_EQ(run("train --regime cond-cyclegan --data " + q(manifest()) + " --out " +
                q(scratch("cond2")) + " --iters 50 --seed 0 --image-size 32"),
            0);
  EXPECT_EQ(slurp(cond_run() / "losses.csv"), slurp(scratch("cond2") / "losses.csv"));
  EXPECT_EQ(slurp(cond_run() / "checkpoint.ckpt"), slurp(scratch("cond2") / "checkpoint.ckpt"));
}

TEST_F(Cli, TrainUsageErrors) {
  const std::string base = "--data " + q(manifest()) + " --out " + q(scratch("bad")) + " --iters 2 --seed 0";
  EXPECT_EQ(run("train --regime pix2pix " + base), 1);
  EXPECT_EQ(run("train --regime gan --clip 0.01 " + base), 1);
  EXPECT_EQ(run("train --regime cyclegan --n-critic 5 " + base), 1);
  EXPECT_EQ(run("train --regime wgan --lambda-cyc 10 " + base), 1);
  EXPECT_EQ(run("train --regime gan --frobnicate " + base), 1);
  EXPECT_EQ(run("train --regime gan --data " + q(scratch("none.json")) + " --out " +
                q(scratch("bad")) + " --iters 2 --seed 0"),
            1);
}

TEST_F(Cli, ColorizeFile) {
  const fs::path in = *std::find_if(fs::directory_iterator(data()), fs::directory_iterator(),
                                    [](const auto& e) { return e.path().extension() == ".png"; });
  const fs::path out = scratch("colorized.png");
  EXPECT_EQ(run("colorize --ckpt " + q(cond_run() / "checkpoint.ckpt") + " --in " + q(in) +
                " --out " + q(out)),
            0);
  EXPECT_TRUE(fs::exists(out));
  EXPECT_EQ(run("colorize --ckpt " + q(cond_run() / "checkpoint.ckpt") + " --in " + q(in) +
                " --out " + q(out) + " --noise-seed 3"),
            1);
}

TEST_F(Cli, ColorizeDirectory) {
  const fs::path out = scratch("colorized_dir");
  EXPECT_EQ(run("colorize --ckpt " + q(cond_run() / "checkpoint.ckpt") + " --in " + q(data()) +
                " --out " + q(out)),
            0);
  int pngs = 0;
  for (const auto& e : fs::directory_iterator(out)) pngs += e.path().extension() == ".png";
  EXPECT_EQ(pngs, 4);
}

TEST_F(Cli, CompareStability) {
  const fs::path other = scratch("cond_seed1");
  ASSERT_EQ(run("train --regime cond-cyclegan --data " + q(manifest()) + " --out " + q(other) +
                " --iters 20 --seed 1 --image-size 32"),
            0);
  const fs::path report = scratch("stability.json");
  EXPECT_EQ(run("compare-stability --logs " + q(cond_run() / "losses.csv") + " " +
                q(other / "losses.csv") + " --loss cyc --window 10 --out " + q(report)),
            0);
  const json r = json::parse(slurp(report));
  EXPECT_EQ(r.at("runs").size(), 2u);
  EXPECT_EQ(run("compare-stability --logs " + q(other / "losses.csv") +
                " --loss cyc --window 100 --out " + q(report)),
            1);
}

TEST_F(Cli, CompareStabilityMedians) {
  const double values[3][3] = {{1, 2, 3}, {2, 2, 2}, {5, 7, 9}};
  std::string logs;
  for (int i = 0; i < 3; ++i) {
    const fs::path p = scratch("tiny" + std::to_string(i) + ".csv");
    std::ofstream out(p);
    out << "iteration,name,value\n";
    for (int k = 0; k < 3; ++k) out << k + 1 << ",cyc," << values[i][k] << '\n';
    logs += " " + q(p);
  }
  const fs::path report = scratch("tiny.json");
  ASSERT_EQ(run("compare-stability --logs" + logs + " --loss cyc --window 3 --out " + q(report)), 0);
  const json r = json::parse(slurp(report));
  ASSERT_EQ(r.at("runs").size(), 3u);
  // Without run.json each log is its own group; means are 2, 2, 7.
  EXPECT_EQ(r.at("runs")[0].at("mean"), 2.0);
  EXPECT_EQ(r.at("runs")[1].at("variance"), 0.0);
  EXPECT_EQ(r.at("runs")[2].at("variance"), 4.0);
}

TEST_F(Cli, EvalReportsCycleErrorOnlyForCycleRegimes) {
  const fs::path out = scratch("eval_cond.json");
  ASSERT_EQ(run("eval --ckpt " + q(cond_run() / "checkpoint.ckpt") + " --data " + q(manifest()) +
                " --out " + q(out)),
            0);
  const json cond = json::parse(slurp(out));
  EXPECT_TRUE(cond.contains("cycle_reconstruction_error"));
  EXPECT_TRUE(cond.contains("psnr_db_mean"));

  const fs::path gan_run = scratch("gan");
  ASSERT_EQ(run("train --regime gan --data " + q(manifest()) + " --out " + q(gan_run) +
                " --iters 2 --seed 0 --image-size 32"),
            0);
  const fs::path gan_out = scratch("eval_gan.json");
  ASSERT_EQ(run("eval --ckpt " + q(gan_run / "checkpoint.ckpt") + " --data " + q(manifest()) +
                " --out " + q(gan_out)),
            0);
  EXPECT_FALSE(json::parse(slurp(gan_out)).contains("cycle_reconstruction_error"));

  EXPECT_EQ(run("eval --ckpt " + q(scratch("missing.ckpt")) + " --data " + q(manifest()) +
                " --out " + q(out)),
            1);
}

TEST_F(Cli, HelpAndUsage) {
  EXPECT_EQ(run("--help"), 0);
  for (const char* sub : {"synth-data", "train", "colorize", "compare-stability", "eval"}) {
    EXPECT_EQ(run(std::string(sub) + " --help"), 0) << sub;
  }
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("paint"), 1);
}

}  // namespace
