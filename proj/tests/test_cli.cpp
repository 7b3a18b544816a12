// Copyright (c) 2026 The HyGEN-cpp Authors. All Rights Reserved.
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
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (const char c : s) n += c == '\n';
  return n;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / ("hygen_cli_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(root_);
    work_ = root_ / "work";
    fs::create_directories(work_);
    std::ofstream(work_ / "small.spec") << "num_nodes=40\nnum_communities=4\nedges_per_community=10\nseed=3\n";
    std::ofstream(work_ / "small.cfg") << "epochs=3\nd=8\nchannels=4\nnoise_dim=3\nbatch_size=16\neval_every=1\n";
  }
  void TearDown() override { fs::remove_all(root_); }

  // Runs the CLI inside work_; stdout and stderr are captured outside it.
  RunResult run(const std::string& args) {
    const fs::path out = root_ / "stdout.txt";
    const fs::path err = root_ / "stderr.txt";
    const std::string cmd = "cd '" + work_.string() + "' && '" HYGEN_CLI_PATH "' " + args + " > '" + out.string() +
                            "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  RunResult train(const std::string& out_dir, const std::string& extra = "") {
    return run("train --config small.cfg --synthetic small.spec --seed 7 --out " + out_dir + " " + extra);
  }

  fs::path root_;
  fs::path work_;
};

TEST_F(Cli, MissingConfigNamesPath) {
  const auto r = run("train --config does-not-exist.cfg --synthetic small.spec --out o");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("does-not-exist.cfg"), std::string::npos) << r.err;
}

TEST_F(Cli, UnknownConfigKeyIsUsageError) {
  const auto r = train("o", "--set learning_rate=1");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("learning_rate"), std::string::npos) << r.err;
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("train --no-such-flag").code, 1);
  EXPECT_EQ(run("sample-negatives --synthetic small.spec --method xyz --count 3").code, 1);
  EXPECT_EQ(run("train --out o").code, 1);
}

TEST_F(Cli, TrainWritesArtifactsAndIsSeedDeterministic) {
  ASSERT_EQ(train("a").code, 0);
  ASSERT_EQ(train("b").code, 0);
  for (const char* f : {"metrics.csv", "checkpoint.txt", "split.txt", "manifest-train.json"}) {
    EXPECT_TRUE(fs::exists(work_ / "a" / f)) << f;
  }
  const auto metrics = slurp(work_ / "a" / "metrics.csv");
  EXPECT_EQ(metrics, slurp(work_ / "b" / "metrics.csv"));
  EXPECT_EQ(slurp(work_ / "a" / "checkpoint.txt"), slurp(work_ / "b" / "checkpoint.txt"));
  EXPECT_EQ(metrics.substr(0, metrics.find('\n')), "epoch,loss_d,loss_g,loss_reg,mean_theta,valid_avg_auroc");
  EXPECT_EQ(count_lines(metrics), 4u);

  const auto manifest = nlohmann::json::parse(slurp(work_ / "a" / "manifest-train.json"));
  EXPECT_EQ(manifest["command"], "train");
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["config"]["epochs"], "3");
  EXPECT_EQ(manifest["inputs"].size(), 2u);
  EXPECT_EQ(manifest["inputs"][0]["fnv1a64"].get<std::string>().size(), 16u);
  EXPECT_TRUE(manifest.contains("wall_clock_seconds"));
}

TEST_F(Cli, EvaluatePrintsJsonAndCsvDeterministically) {
  ASSERT_EQ(train("t").code, 0);
  const std::string cmd = "evaluate --synthetic small.spec --checkpoint t/checkpoint.txt --split t/split.txt --out e";
  const auto a = run(cmd);
  const auto b = run(cmd);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto first = a.out.substr(0, a.out.find('\n'));
  const auto j = nlohmann::json::parse(first);
  for (const char* key : {"sns_auroc", "mns_auroc", "cns_auroc", "avg_auroc", "sns_ap", "mns_ap", "cns_ap", "avg_ap"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(count_lines(slurp(work_ / "e" / "eval.csv")), 2u);
}

TEST_F(Cli, CorruptedCheckpointIsVersionError) {
  ASSERT_EQ(train("t").code, 0);
  auto text = slurp(work_ / "t" / "checkpoint.txt");
  text.replace(text.find("param "), 5, "parm ");
  std::ofstream(work_ / "bad.txt") << text;
  const auto r = run("evaluate --synthetic small.spec --checkpoint bad.txt --out e");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("checkpoint"), std::string::npos);
}

TEST_F(Cli, CheckpointOnOtherDatasetIsRejected) {
  ASSERT_EQ(train("t").code, 0);
  std::ofstream(work_ / "other.spec") << "num_nodes=50\nnum_communities=5\nedges_per_community=8\n";
  EXPECT_EQ(run("evaluate --synthetic other.spec --checkpoint t/checkpoint.txt --out e").code, 2);
}

TEST_F(Cli, SweepRecordsFailedCells) {
  const auto r = run(
      "sweep --config small.cfg --set epochs=1 --synthetic small.spec --k-values 0,0.5 --p-values 1,2 --workers 2 "
      "--out s");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(work_ / "s" / "sweep.csv");
  EXPECT_EQ(count_lines(csv), 5u);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "k,p,avg_auroc,avg_ap,status");
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("0,1,,,failed", 0), 0u) << line;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("0,2,,,failed", 0), 0u) << line;
  std::getline(lines, line);
  EXPECT_NE(line.find(",ok"), std::string::npos) << line;
}

TEST_F(Cli, GradcheckFiltersAndFailsOnBrokenFixture) {
  const auto one = run("gradcheck --ops sigmoid --out g");
  EXPECT_EQ(one.code, 0);
  EXPECT_NE(one.out.find("sigmoid"), std::string::npos);
  EXPECT_EQ(one.out.find("matmul"), std::string::npos);
  EXPECT_EQ(run("gradcheck --ops broken_fixture --broken-fixture --out g").code, 4);
  EXPECT_EQ(run("gradcheck --ops nonsense --out g").code, 1);
}

TEST_F(Cli, SynthAndSampling) {
  ASSERT_EQ(run("synth --spec small.spec --out d").code, 0);
  for (const char* f : {"edges.txt", "features.txt", "labels.txt"}) EXPECT_TRUE(fs::exists(work_ / "d" / f)) << f;
  EXPECT_EQ(count_lines(slurp(work_ / "d" / "edges.txt")), 40u);
  EXPECT_EQ(count_lines(slurp(work_ / "d" / "labels.txt")), 40u);

  const std::string data = "--edges d/edges.txt --features d/features.txt";
  const auto a = run("sample-negatives " + data + " --method mns --count 25 --seed 4 --out n");
  const auto b = run("sample-negatives " + data + " --method mns --count 25 --seed 4 --out n");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(count_lines(a.out), 25u);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, slurp(work_ / "n" / "negatives-mns.txt"));
}

TEST_F(Cli, GenerateAndScore) {
  ASSERT_EQ(train("t").code, 0);
  const auto g = run("generate --synthetic small.spec --checkpoint t/checkpoint.txt --count 5 --out gen");
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(count_lines(g.out), 5u);
  EXPECT_EQ(count_lines(slurp(work_ / "gen" / "memberships.csv")), 6u);

  std::ofstream(work_ / "cand.txt") << "0,1,2\n3,4\n5,6,7,8\n";
  const auto s = run("score --synthetic small.spec --checkpoint t/checkpoint.txt --candidates cand.txt --out sc");
  ASSERT_EQ(s.code, 0) << s.err;
  std::istringstream lines(s.out);
  double v = 0.0;
  std::size_t n = 0;
  while (lines >> v) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
    ++n;
  }
  EXPECT_EQ(n, 3u);
  std::ofstream(work_ / "bad_cand.txt") << "0,99\n";
  EXPECT_EQ(run("score --synthetic small.spec --checkpoint t/checkpoint.txt --candidates bad_cand.txt --out sc").code,
            2);
}

TEST_F(Cli, WritesOnlyInsideOut) {
  ASSERT_EQ(train("o").code, 0);
  ASSERT_EQ(run("evaluate --synthetic small.spec --checkpoint o/checkpoint.txt --out o").code, 0);
  ASSERT_EQ(run("gradcheck --ops matmul --out o").code, 0);
  std::set<std::string> entries;
  for (const auto& e : fs::directory_iterator(work_)) entries.insert(e.path().filename().string());
  EXPECT_EQ(entries, (std::set<std::string>{"small.spec", "small.cfg", "o"}));
}

}  // namespace
