//
// Copyright 2026 The Unlearn Audit Authors
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
//

#include "unlearn_audit/cli.h"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace unlearn_audit {
namespace {

namespace fs = std::filesystem;
using testing::ReadFile;
using testing::TempDir;
using testing::WriteText;

constexpr char kSmallConfig[] = R"(synthetic.n_samples = 500
synthetic.n_features = 6
synthetic.n_classes = 3
synthetic.separation = 2
target.hidden = 12
target.epochs = 8
target.lr = 0.05
shadow.count = 2
attack.epochs = 8
unlearn.epochs = 2
unlearn.batch_size = 16
)";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = Dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

// Every file under `root`, keyed by relative path. report.json is compared
// without wall-clock timings and the output path it records.
std::map<std::string, std::string> Snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::string text = ReadFile(entry.path());
    if (entry.path().extension() == ".json") {
      auto j = nlohmann::json::parse(text);
      j.erase("wall_clock_seconds");
      if (j.contains("config")) j["config"].erase("output.dir");
      if (j.contains("entries")) {
        for (auto& e : j["entries"]) {
          if (e.contains("report")) {
            e["report"].erase("wall_clock_seconds");
            e["report"]["config"].erase("output.dir");
          }
        }
      }
      text = j.dump();
    }
    files[fs::relative(entry.path(), root).string()] = text;
  }
  return files;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    config_ = (dir_ / "exp.cfg").string();
    WriteText(dir_ / "exp.cfg", kSmallConfig);
  }
  std::string Out(const std::string& name) const {
    return (dir_ / name).string();
  }

  TempDir dir_;
  std::string config_;
};

TEST_F(CliTest, RunWritesAllOutputs) {
  const Result r = Invoke({"run", "--config", config_, "--out", Out("run")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"metrics.csv", "report.json", "curves.svg"}) {
    EXPECT_TRUE(fs::exists(dir_ / "run" / f)) << f;
  }
  EXPECT_NE(r.out.find("neggrad after 2 epochs"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  Result r = Invoke({"run", "--config", config_, "--lr", "not_a_number"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--lr"), std::string::npos);
  EXPECT_NE(r.err.find("usage:"), std::string::npos);

  EXPECT_EQ(Invoke({"frobnicate", "--config", config_}).code, kExitUsage);
  EXPECT_EQ(Invoke({"run", "--config", config_, "--bogus", "1"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"run"}).code, kExitUsage);
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"run", "--config", config_, "--method", "retrain"}).code,
            kExitUsage);
  EXPECT_EQ(Invoke({"run", "--config", Out("missing.cfg")}).code, kExitUsage);
  EXPECT_EQ(Invoke({"sweep", "--config", config_}).code, kExitUsage);
  r = Invoke({"sweep", "--config", config_, "--rates", "0.05,0.01"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--rates"), std::string::npos);

  WriteText(dir_ / "bad.cfg", "target.epochs = many\n");
  r = Invoke({"run", "--config", Out("bad.cfg")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("target.epochs"), std::string::npos);
}

TEST_F(CliTest, RuntimeFailureNamesPhaseAndExitsTwo) {
  WriteText(dir_ / "missing_data.cfg",
            std::string(kSmallConfig) + "dataset.path = " + Out("nope.bin") +
                "\n");
  const Result r = Invoke({"run", "--config", Out("missing_data.cfg"), "--out",
                        Out("fail")});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("error in phase load_data"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "fail" / "metrics.csv"));
}

TEST_F(CliTest, SameSeedGivesIdenticalTrees) {
  ASSERT_EQ(Invoke({"run", "--config", config_, "--seed", "7", "--out", Out("a")})
                .code,
            kExitOk);
  ASSERT_EQ(Invoke({"run", "--config", config_, "--seed", "7", "--out", Out("b")})
                .code,
            kExitOk);
  ASSERT_EQ(Invoke({"run", "--config", config_, "--seed", "8", "--out", Out("c")})
                .code,
            kExitOk);
  EXPECT_EQ(Snapshot(dir_ / "a"), Snapshot(dir_ / "b"));
  EXPECT_NE(ReadFile(dir_ / "a" / "metrics.csv"),
            ReadFile(dir_ / "c" / "metrics.csv"));
}

TEST_F(CliTest, FlagsMatchEquivalentConfigEdits) {
  ASSERT_EQ(Invoke({"run", "--config", config_, "--method", "scrub", "--epochs",
                 "3", "--lr", "0.02", "--seed", "4", "--out", Out("flags")})
                .code,
            kExitOk);
  WriteText(dir_ / "edited.cfg",
            std::string(kSmallConfig) +
                "unlearn.method = scrub\nunlearn.epochs = 3\n"
                "unlearn.lr = 0.02\nseed = 4\n");
  ASSERT_EQ(
      Invoke({"run", "--config", Out("edited.cfg"), "--out", Out("edited")}).code,
      kExitOk);
  EXPECT_EQ(ReadFile(dir_ / "flags" / "metrics.csv"),
            ReadFile(dir_ / "edited" / "metrics.csv"));
  const auto j =
      nlohmann::json::parse(ReadFile(dir_ / "flags" / "report.json"));
  EXPECT_EQ(j["trace"]["method"], "scrub");
  EXPECT_EQ(j["trace"]["epochs_run"], 3);
}

TEST_F(CliTest, SweepWritesOneDirectoryPerRate) {
  const Result r = Invoke({"sweep", "--config", config_, "--rates",
                        "0.001,0.01,0.1", "--out", Out("sweep")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  int dirs = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "sweep")) {
    if (entry.is_directory()) {
      ++dirs;
      EXPECT_TRUE(fs::exists(entry.path() / "metrics.csv"));
    }
  }
  EXPECT_EQ(dirs, 3);
  const auto j = nlohmann::json::parse(ReadFile(dir_ / "sweep" / "sweep.json"));
  EXPECT_EQ(j["entries"].size(), 3u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
}

TEST_F(CliTest, ReportRerendersFromJson) {
  ASSERT_EQ(Invoke({"run", "--config", config_, "--out", Out("src")}).code,
            kExitOk);
  const Result r = Invoke({"report", "--input", Out("src/report.json"), "--out",
                        Out("again"), "--formats", "csv,svg"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(ReadFile(dir_ / "src" / "metrics.csv"),
            ReadFile(dir_ / "again" / "metrics.csv"));
  EXPECT_EQ(ReadFile(dir_ / "src" / "curves.svg"),
            ReadFile(dir_ / "again" / "curves.svg"));
  EXPECT_FALSE(fs::exists(dir_ / "again" / "report.json"));

  EXPECT_EQ(Invoke({"report", "--input", Out("none.json")}).code, kExitUsage);
  WriteText(dir_ / "garbage.json", "{not json");
  EXPECT_EQ(Invoke({"report", "--input", Out("garbage.json")}).code,
            kExitRuntime);
}

TEST_F(CliTest, OutputRootFromEnvironment) {
  ::setenv("UNLEARN_AUDIT_OUT", Out("env_root").c_str(), 1);
  const Result r = Invoke({"split", "--config", config_});
  ::unsetenv("UNLEARN_AUDIT_OUT");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "env_root" / "splits.json"));
}

TEST_F(CliTest, StageSubcommands) {
  ASSERT_EQ(Invoke({"gen-data", "--config", config_, "--out", Out("s")}).code,
            kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "s" / "data.bin"));
  ASSERT_EQ(Invoke({"gen-data", "--config", config_, "--out", Out("s"),
                 "--format", "csv_labeled"})
                .code,
            kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "s" / "data.csv"));

  ASSERT_EQ(Invoke({"split", "--config", config_, "--out", Out("s")}).code,
            kExitOk);
  const auto splits = nlohmann::json::parse(ReadFile(dir_ / "s" / "splits.json"));
  EXPECT_EQ(splits["target_train"].size(), 200u);
  EXPECT_EQ(splits["retain"].size() + splits["forget"].size(), 200u);

  ASSERT_EQ(Invoke({"train", "--config", config_, "--out", Out("s")}).code,
            kExitOk);
  const std::string curve = ReadFile(dir_ / "s" / "target_training.csv");
  EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 9);

  ASSERT_EQ(Invoke({"attack", "--config", config_, "--out", Out("s")}).code,
            kExitOk);
  const auto attack = nlohmann::json::parse(ReadFile(dir_ / "s" / "attack.json"));
  EXPECT_EQ(attack["completed_stage"], "baseline_audit");
  EXPECT_TRUE(attack["trace"]["entries"].empty());

  ASSERT_EQ(Invoke({"unlearn", "--config", config_, "--out", Out("s")}).code,
            kExitOk);
  const std::string metrics = ReadFile(dir_ / "s" / "metrics.csv");
  EXPECT_EQ(std::count(metrics.begin(), metrics.end(), '\n'), 3);

  // The dataset written by gen-data reloads to the same run.
  WriteText(dir_ / "from_file.cfg",
            std::string(kSmallConfig) + "dataset.path = " + Out("s/data.bin") +
                "\n");
  ASSERT_EQ(Invoke({"unlearn", "--config", Out("from_file.cfg"), "--out",
                 Out("reload")})
                .code,
            kExitOk);
  EXPECT_EQ(ReadFile(dir_ / "reload" / "metrics.csv"), metrics);
}

}  // namespace
}  // namespace unlearn_audit
