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

#include "unlearn_audit/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <utility>

#include "unlearn_audit/error.h"
#include "unlearn_audit/report_writer.h"
#include "unlearn_audit/synthetic.h"
#include "unlearn_audit/tabular_io.h"

namespace unlearn_audit {
namespace {

// Times `body` and rethrows any failure tagged with the phase name.
template <typename Fn>
void RunPhase(PipelineStage stage, ExperimentReport& report, Fn&& body) {
  const std::string name(StageName(stage));
  const auto start = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const PhaseError&) {
    throw;
  } catch (const Error& e) {
    throw PhaseError(name, e);
  } catch (const std::exception& e) {
    throw PhaseError(name, ErrorCode::kInvalidArgument, e.what());
  }
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  report.timings.push_back({name, elapsed.count()});
  report.completed_stage = name;
}

std::vector<int> LayerDims(const ExperimentConfig& config,
                           const Dataset& dataset) {
  std::vector<int> dims = {dataset.feature_dim()};
  dims.insert(dims.end(), config.hidden_units.begin(),
              config.hidden_units.end());
  dims.push_back(dataset.num_classes);
  return dims;
}

// Shortest %g rendering that parses back to the same double.
std::string ShortestReal(double value) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

}  // namespace

std::string_view StageName(PipelineStage stage) {
  switch (stage) {
    case PipelineStage::kLoadData:
      return "load_data";
    case PipelineStage::kSplit:
      return "split";
    case PipelineStage::kTrainTarget:
      return "train_target";
    case PipelineStage::kTrainShadows:
      return "train_shadows";
    case PipelineStage::kTrainAttack:
      return "train_attack";
    case PipelineStage::kBaselineAudit:
      return "baseline_audit";
    case PipelineStage::kUnlearn:
      return "unlearn";
  }
  return "unknown";
}

Dataset LoadExperimentData(const ExperimentConfig& config) {
  if (config.data.path.empty()) {
    SyntheticSpec spec = config.data.synthetic;
    spec.seed = config.seed;
    return GenerateSynthetic(spec);
  }
  return LoadTabular(config.data.path, config.data.format);
}

ExperimentArtifacts RunPipeline(const ExperimentConfig& config,
                                PipelineStage stop_after) {
  ExperimentArtifacts a;
  ExperimentReport& report = a.report;
  report.config = config.source;
  report.seed = config.seed;
  report.trace.method = MethodName(config.method);
  report.trace.learning_rate = LearningRate(config.method);
  auto done = [stop_after](PipelineStage stage) { return stage >= stop_after; };

  RunPhase(PipelineStage::kLoadData, report, [&] {
    a.dataset = LoadExperimentData(config);
    a.dataset.Validate();
    report.dataset_name = a.dataset.name;
    report.num_classes = a.dataset.num_classes;
    report.feature_dim = a.dataset.feature_dim();
  });
  if (done(PipelineStage::kLoadData)) return a;

  RunPhase(PipelineStage::kSplit, report, [&] {
    SplitPlan plan = config.split;
    plan.seed = config.seed + kSplitSeedOffset;
    a.splits = MakeSplits(a.dataset, plan);
    // The validation slice comes out of the test split so that retain and
    // forget stay exactly the rows the target trains on.
    Rng rng(DeriveSeed(plan.seed, 9));
    std::vector<std::size_t> test = a.splits.test;
    std::shuffle(test.begin(), test.end(), rng);
    const std::size_t val_count = static_cast<std::size_t>(
        static_cast<double>(test.size()) * config.target.validation_fraction);
    if (val_count >= test.size()) {
      throw Error(ErrorCode::kSplit, "validation slice consumes the test set");
    }
    a.validation.assign(test.begin(),
                        test.begin() + static_cast<std::ptrdiff_t>(val_count));
    a.holdout.assign(test.begin() + static_cast<std::ptrdiff_t>(val_count),
                     test.end());
    report.sizes = {a.splits.target_train.size(), a.splits.shadow_pool.size(),
                    a.holdout.size(),           a.validation.size(),
                    a.splits.retain.size(),     a.splits.forget.size()};
  });
  if (done(PipelineStage::kSplit)) return a;

  const RowSet target_rows(a.dataset, a.splits.target_train);
  const RowSet validation(a.dataset, a.validation);
  const RowSet holdout(a.dataset, a.holdout);
  const RowSet retain(a.dataset, a.splits.retain);
  const RowSet forget(a.dataset, a.splits.forget);
  EvalSets eval;
  eval.train = &target_rows;
  eval.validation = validation.empty() ? nullptr : &validation;
  eval.test = &holdout;
  eval.forget = &forget;
  eval.retain = &retain;
  const std::vector<int> dims = LayerDims(config, a.dataset);

  RunPhase(PipelineStage::kTrainTarget, report, [&] {
    const std::uint64_t seed = config.seed + kTargetSeedOffset;
    MlpModel target = InitMlp(dims, seed);
    TrainConfig train = config.target;
    train.seed = DeriveSeed(seed, 1);
    train.validation_fraction = 0.0;
    report.baseline.target_history = Train(target, target_rows, train, eval);
    report.baseline.metrics = EvaluateEpochMetrics(target, 0, eval);
    report.baseline.metrics.mean_loss = MeanCrossEntropy(target, target_rows);
    a.original_target = std::move(target);
  });
  if (done(PipelineStage::kTrainTarget)) return a;

  ShadowEnsemble ensemble;
  RunPhase(PipelineStage::kTrainShadows, report, [&] {
    ensemble = TrainShadows(a.splits.shadow_pool, a.dataset, dims,
                            config.target, config.shadow_count,
                            config.seed + kShadowSeedOffset);
    for (const ShadowModel& s : ensemble.shadows) {
      report.baseline.shadows.push_back({s.members.size(), s.nonmembers.size(),
                                         s.member_acc, s.nonmember_acc});
    }
  });
  if (done(PipelineStage::kTrainShadows)) return a;

  RunPhase(PipelineStage::kTrainAttack, report, [&] {
    const AttackDataset attack_data = BuildAttackDataset(ensemble, a.dataset);
    report.baseline.attack_records = attack_data.features.size();
    TrainConfig attack = config.attack;
    attack.seed =
        config.attack_seed.value_or(config.seed + kAttackSeedOffset);
    a.attack = TrainAttackModel(attack_data, attack);
  });
  if (done(PipelineStage::kTrainAttack)) return a;

  const std::uint64_t audit_seed = config.seed + kAuditSeedOffset;
  RunPhase(PipelineStage::kBaselineAudit, report, [&] {
    report.baseline.attack = AuditModel(*a.attack, *a.original_target, forget,
                                        retain, holdout, audit_seed);
  });
  if (done(PipelineStage::kBaselineAudit)) return a;

  RunPhase(PipelineStage::kUnlearn, report, [&] {
    UnlearnOptions options;
    options.epochs = config.unlearn_epochs;
    options.batch_size = config.unlearn_batch_size;
    options.seed = config.seed + kUnlearnSeedOffset;
    const UnlearnHook hook = [&](const MlpModel& model, int epoch) {
      TraceEntry entry;
      entry.metrics = EvaluateEpochMetrics(model, epoch, eval);
      entry.metrics.mean_loss = MeanCrossEntropy(model, target_rows);
      entry.attack =
          AuditModel(*a.attack, model, forget, retain, holdout, audit_seed);
      return entry;
    };
    UnlearnResult result = RunUnlearning(*a.original_target, a.splits,
                                         a.dataset, config.method, options,
                                         hook);
    report.trace = std::move(result.trace);
    a.final_target = std::move(result.model);
  });
  return a;
}

ExperimentReport RunExperiment(const ExperimentConfig& config) {
  ExperimentReport report = RunPipeline(config).report;
  if (!config.output_dir.empty()) {
    try {
      WriteReport(report, config.output_dir, AllReportFormats());
    } catch (const Error& e) {
      throw PhaseError("write_report", e);
    }
  }
  return report;
}

std::string RateDirectoryName(double learning_rate) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "lr_%.6g", learning_rate);
  return buf;
}

SweepReport SensitivitySweep(const ExperimentConfig& base,
                             std::span<const double> learning_rates) {
  if (learning_rates.empty()) {
    throw Error(ErrorCode::kConfig, "sweep needs at least one learning rate");
  }
  for (std::size_t i = 0; i < learning_rates.size(); ++i) {
    if (!(learning_rates[i] > 0.0) || !std::isfinite(learning_rates[i])) {
      throw Error(ErrorCode::kConfig, "sweep learning rates must be positive");
    }
    if (i > 0 && !(learning_rates[i] > learning_rates[i - 1])) {
      throw Error(ErrorCode::kConfig,
                  "sweep learning rates must be strictly increasing");
    }
  }
  SweepReport sweep;
  for (double lr : learning_rates) {
    ExperimentConfig config = base;
    config.method = WithLearningRate(base.method, lr);
    config.source["unlearn.lr"] = ShortestReal(lr);
    if (!base.output_dir.empty()) {
      config.output_dir = base.output_dir / RateDirectoryName(lr);
    }
    SweepEntry entry;
    entry.learning_rate = lr;
    try {
      entry.report = RunExperiment(config);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    sweep.entries.push_back(std::move(entry));
  }
  if (!base.output_dir.empty()) {
    std::filesystem::create_directories(base.output_dir);
    WriteFileAtomic(base.output_dir / "sweep.json",
                    SweepToJson(sweep).dump(2) + "\n");
  }
  return sweep;
}

}  // namespace unlearn_audit
