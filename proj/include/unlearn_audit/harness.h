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

#ifndef UNLEARN_AUDIT_HARNESS_H_
#define UNLEARN_AUDIT_HARNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unlearn_audit/config.h"
#include "unlearn_audit/dataset.h"
#include "unlearn_audit/mia.h"
#include "unlearn_audit/splits.h"
#include "unlearn_audit/train.h"
#include "unlearn_audit/unlearn.h"

namespace unlearn_audit {

// Child seeds are master seed + a fixed offset per phase. Synthetic data
// uses the master seed itself.
inline constexpr std::uint64_t kSplitSeedOffset = 1;
inline constexpr std::uint64_t kTargetSeedOffset = 2;
inline constexpr std::uint64_t kShadowSeedOffset = 3;
inline constexpr std::uint64_t kAttackSeedOffset = 10;
inline constexpr std::uint64_t kUnlearnSeedOffset = 11;
// Subsampling inside MIA evaluation.
inline constexpr std::uint64_t kAuditSeedOffset = 12;

// Phases in execution order; a run may stop after any of them.
enum class PipelineStage {
  kLoadData,
  kSplit,
  kTrainTarget,
  kTrainShadows,
  kTrainAttack,
  kBaselineAudit,
  kUnlearn,
};

std::string_view StageName(PipelineStage stage);

struct SplitSizes {
  std::size_t target_train = 0;
  std::size_t shadow_pool = 0;
  std::size_t test = 0;
  std::size_t validation = 0;
  std::size_t retain = 0;
  std::size_t forget = 0;
};

struct ShadowSummary {
  std::size_t members = 0;
  std::size_t nonmembers = 0;
  double member_acc = 0.0;
  double nonmember_acc = 0.0;
};

// Pre-unlearning state of the target and the attack.
struct BaselineSummary {
  EpochMetrics metrics;
  AttackReport attack;
  std::vector<EpochMetrics> target_history;
  std::vector<ShadowSummary> shadows;
  std::size_t attack_records = 0;
};

struct PhaseTiming {
  std::string phase;
  double seconds = 0.0;
};

struct ExperimentReport {
  ConfigMap config;
  std::uint64_t seed = 0;
  std::string dataset_name;
  int num_classes = 0;
  int feature_dim = 0;
  SplitSizes sizes;
  std::string completed_stage;
  BaselineSummary baseline;
  UnlearnTrace trace;
  std::vector<PhaseTiming> timings;
};

// Everything a run produced, for callers that need more than the report.
struct ExperimentArtifacts {
  Dataset dataset;
  SplitBundle splits;
  // Test rows left after carving the validation slice.
  std::vector<std::size_t> holdout;
  std::vector<std::size_t> validation;
  std::optional<MlpModel> original_target;
  std::optional<MlpModel> final_target;
  std::optional<AttackModel> attack;
  ExperimentReport report;
};

Dataset LoadExperimentData(const ExperimentConfig& config);

// Runs the phases up to `stop_after`. Each failure is rethrown as a
// PhaseError naming the phase. Nothing is written to disk.
ExperimentArtifacts RunPipeline(const ExperimentConfig& config,
                                PipelineStage stop_after =
                                    PipelineStage::kUnlearn);

// Full pipeline. When config.output_dir is set, the report is persisted
// there as metrics.csv, report.json and curves.svg.
ExperimentReport RunExperiment(const ExperimentConfig& config);

struct SweepEntry {
  double learning_rate = 0.0;
  std::optional<ExperimentReport> report;
  std::string error;
};

struct SweepReport {
  std::vector<SweepEntry> entries;
};

// One experiment per rate with only the unlearning rate changed. Rates must
// be positive and strictly increasing. A failing rate is recorded and the
// sweep continues. Each rate persists under output_dir/lr_<rate>/ when
// output_dir is set.
SweepReport SensitivitySweep(const ExperimentConfig& base,
                             std::span<const double> learning_rates);

std::string RateDirectoryName(double learning_rate);

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_HARNESS_H_
