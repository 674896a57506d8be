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
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "unlearn_audit/config.h"
#include "unlearn_audit/error.h"
#include "unlearn_audit/harness.h"
#include "unlearn_audit/report_writer.h"
#include "unlearn_audit/tabular_io.h"

namespace unlearn_audit {
namespace {

constexpr char kDefaultOutputRoot[] = "unlearn_audit_out";

constexpr char kSynopsis[] =
    "usage: unlearn-audit <gen-data|split|train|attack|unlearn|run|sweep|"
    "report> --config FILE [--seed N] [--out DIR] [--method neggrad|scrub|"
    "sftc] [--epochs N] [--lr RATE] [--rates R1,R2,...]\n"
    "       unlearn-audit report --input report.json [--out DIR] "
    "[--formats csv,json,svg]";

struct Flags {
  std::string config;
  std::optional<std::string> seed;
  std::optional<std::string> out;
  std::optional<std::string> method;
  std::optional<std::string> epochs;
  std::optional<std::string> lr;
  std::string rates;
  std::string input;
  std::string formats = "csv,json,svg";
  std::string data_format = "binary_f32";
};

// Thrown for problems the user can fix by changing the invocation.
struct UsageError {
  std::string message;
};

void AddOverrideFlags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "key=value experiment config")
      ->required();
  cmd.add_option("--seed", f.seed, "master seed")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--out", f.out, "output directory");
  cmd.add_option("--method", f.method, "unlearning method")
      ->check(CLI::IsMember({"neggrad", "scrub", "sftc"}));
  cmd.add_option("--epochs", f.epochs, "unlearning epochs")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--lr", f.lr, "unlearning learning rate")
      ->check(CLI::PositiveNumber);
}

std::vector<double> ParseRates(const std::string& list) {
  std::vector<double> rates;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw UsageError{"--rates: '" + item + "' is not a number"};
    }
    rates.push_back(v);
  }
  if (rates.empty()) throw UsageError{"--rates: empty list"};
  return rates;
}

ExperimentConfig ResolveConfig(const Flags& f) {
  try {
    ConfigMap overrides;
    if (f.seed) overrides["seed"] = *f.seed;
    if (f.out) overrides["output.dir"] = *f.out;
    if (f.method) overrides["unlearn.method"] = *f.method;
    if (f.epochs) overrides["unlearn.epochs"] = *f.epochs;
    if (f.lr) overrides["unlearn.lr"] = *f.lr;
    ConfigMap merged = MergeConfig(LoadConfigFile(f.config), overrides);
    ExperimentConfig config = BuildExperimentConfig(merged);
    if (config.output_dir.empty()) {
      const char* env = std::getenv("UNLEARN_AUDIT_OUT");
      config.output_dir = env != nullptr && *env != '\0' ? env
                                                         : kDefaultOutputRoot;
    }
    return config;
  } catch (const Error& e) {
    throw UsageError{e.what()};
  }
}

void WriteJsonFile(const std::filesystem::path& path,
                   const nlohmann::json& j) {
  std::filesystem::create_directories(path.parent_path());
  WriteFileAtomic(path, j.dump(2) + "\n");
}

nlohmann::json SplitsToJson(const ExperimentArtifacts& a) {
  return {{"target_train", a.splits.target_train},
          {"shadow_pool", a.splits.shadow_pool},
          {"test", a.splits.test},
          {"validation", a.validation},
          {"holdout", a.holdout},
          {"retain", a.splits.retain},
          {"forget", a.splits.forget}};
}

void PrintSummary(std::ostream& out, const ExperimentReport& r) {
  out << "dataset " << r.dataset_name << ": " << r.sizes.target_train
      << " target / " << r.sizes.shadow_pool << " shadow / " << r.sizes.test
      << " holdout rows\n";
  out << "baseline: test_acc=" << FormatReal(r.baseline.metrics.test_acc)
      << " forget_acc=" << FormatReal(r.baseline.metrics.forget_acc)
      << " mia_forget=" << FormatReal(r.baseline.attack.mia_forget_acc)
      << " mia_retain=" << FormatReal(r.baseline.attack.mia_retain_acc)
      << "\n";
  if (!r.trace.entries.empty()) {
    const TraceEntry& last = r.trace.entries.back();
    out << r.trace.method << " after " << r.trace.epochs_run
        << " epochs: test_acc=" << FormatReal(last.metrics.test_acc)
        << " forget_acc=" << FormatReal(last.metrics.forget_acc)
        << " mia_forget=" << FormatReal(last.attack.mia_forget_acc)
        << " adversary_success=" << FormatReal(last.attack.adversary_success)
        << "\n";
  }
}

int RunSubcommand(const std::string& name, const Flags& f, std::ostream& out) {
  if (name == "report") {
    std::ifstream in(f.input);
    if (!in) throw UsageError{"--input: cannot open '" + f.input + "'"};
    ReportFormats formats;
    try {
      formats = ParseReportFormats(f.formats);
    } catch (const Error& e) {
      throw UsageError{std::string("--formats: ") + e.what()};
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, f.input + ": " + e.what());
    }
    const ExperimentReport report = ReportFromJson(j);
    const std::filesystem::path dir =
        f.out ? std::filesystem::path(*f.out)
              : std::filesystem::path(f.input).parent_path();
    for (const auto& path : WriteReport(report, dir, formats)) {
      out << path.string() << "\n";
    }
    return kExitOk;
  }

  ExperimentConfig config = ResolveConfig(f);
  const std::filesystem::path dir = config.output_dir;

  if (name == "gen-data") {
    const auto format = ParseTabularFormat(f.data_format);
    if (!format) throw UsageError{"--format: unknown '" + f.data_format + "'"};
    const Dataset data = RunPipeline(config, PipelineStage::kLoadData).dataset;
    std::filesystem::create_directories(dir);
    const auto path =
        dir / (*format == TabularFormat::kBinaryF32 ? "data.bin" : "data.csv");
    SaveTabular(data, path, *format);
    out << path.string() << "\n";
    return kExitOk;
  }
  if (name == "split") {
    const ExperimentArtifacts a = RunPipeline(config, PipelineStage::kSplit);
    WriteJsonFile(dir / "splits.json", SplitsToJson(a));
    out << (dir / "splits.json").string() << "\n";
    return kExitOk;
  }
  if (name == "train") {
    const ExperimentArtifacts a =
        RunPipeline(config, PipelineStage::kTrainTarget);
    std::filesystem::create_directories(dir);
    WriteFileAtomic(dir / "target_training.csv",
                    FormatTrainingCsv(a.report.baseline.target_history));
    WriteJsonFile(dir / "baseline.json", ReportToJson(a.report, false));
    out << (dir / "target_training.csv").string() << "\n";
    return kExitOk;
  }
  if (name == "attack") {
    const ExperimentArtifacts a =
        RunPipeline(config, PipelineStage::kBaselineAudit);
    WriteJsonFile(dir / "attack.json", ReportToJson(a.report, false));
    PrintSummary(out, a.report);
    return kExitOk;
  }
  if (name == "unlearn") {
    const ExperimentArtifacts a = RunPipeline(config);
    WriteReport(a.report, dir, {ReportFormat::kCsv});
    PrintSummary(out, a.report);
    return kExitOk;
  }
  if (name == "run") {
    PrintSummary(out, RunExperiment(config));
    return kExitOk;
  }
  if (name == "sweep") {
    if (f.rates.empty()) throw UsageError{"sweep requires --rates"};
    const std::vector<double> rates = ParseRates(f.rates);
    SweepReport sweep;
    try {
      sweep = SensitivitySweep(config, rates);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfig) {
        throw UsageError{std::string("--rates: ") + e.what()};
      }
      throw;
    }
    bool any_failed = false;
    for (const SweepEntry& e : sweep.entries) {
      out << "lr=" << FormatReal(e.learning_rate) << ": ";
      if (e.report && !e.report->trace.entries.empty()) {
        const TraceEntry& last = e.report->trace.entries.back();
        out << "mia_forget=" << FormatReal(last.attack.mia_forget_acc)
            << " forget_acc=" << FormatReal(last.metrics.forget_acc) << "\n";
      } else if (e.report) {
        out << "no unlearning epochs\n";
      } else {
        any_failed = true;
        out << "failed: " << e.error << "\n";
      }
    }
    return any_failed ? kExitRuntime : kExitOk;
  }
  throw UsageError{"unknown subcommand '" + name + "'"};
}

}  // namespace

int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Machine-unlearning membership-inference audit harness",
               "unlearn-audit"};
  app.require_subcommand(1, 1);
  Flags flags;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen-data", "write the configured dataset to <out>/data.bin"},
      {"split", "write split index sets to <out>/splits.json"},
      {"train", "train the target and write its training curve"},
      {"attack", "train shadows and the attack; audit the target"},
      {"unlearn", "run unlearning and write metrics.csv"},
      {"run", "full pipeline; write metrics.csv, report.json, curves.svg"},
      {"sweep", "repeat the run over several unlearning learning rates"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    AddOverrideFlags(*cmd, flags);
    if (name == "sweep") {
      cmd->add_option("--rates", flags.rates,
                      "comma-separated learning rates, strictly increasing")
          ->required();
    }
    if (name == "gen-data") {
      cmd->add_option("--format", flags.data_format, "binary_f32 or csv_labeled");
    }
  }
  CLI::App* report = app.add_subcommand("report", "re-render a report.json");
  report->add_option("--input", flags.input, "path to report.json")
      ->required();
  report->add_option("--out", flags.out, "output directory");
  report->add_option("--formats", flags.formats, "subset of csv,json,svg");

  // CLI11 consumes arguments in reverse order.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << kSynopsis << "\n";
    return kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return RunSubcommand(name, flags, out);
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n" << kSynopsis << "\n";
    return kExitUsage;
  } catch (const PhaseError& e) {
    err << "error in phase " << e.phase() << ": " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace unlearn_audit
