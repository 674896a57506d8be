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

#ifndef UNLEARN_AUDIT_UNLEARN_H_
#define UNLEARN_AUDIT_UNLEARN_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "unlearn_audit/dataset.h"
#include "unlearn_audit/mia.h"
#include "unlearn_audit/mlp.h"
#include "unlearn_audit/random.h"
#include "unlearn_audit/splits.h"
#include "unlearn_audit/train.h"

namespace unlearn_audit {

// Gradient ascent on the forget set.
struct NegGradParams {
  double learning_rate = 0.01;
};

// Teacher-student unlearning: push the student away from the frozen teacher
// on the forget set, keep it close (and accurate) on the retain set.
struct ScrubParams {
  double learning_rate = 0.01;
  // Weight of KL(teacher || student) in the retain-phase loss.
  double alpha = 0.5;
  // Step scale of the forget-phase ascent on KL(teacher || student).
  double gamma = 1.0;
};

enum class ConfusionResample { kPerEpoch, kOnce };

// Fine-tuning on the retain set interleaved with training the forget set
// towards deliberately wrong labels.
struct SftcParams {
  double learning_rate = 0.01;
  ConfusionResample resample = ConfusionResample::kPerEpoch;
};

using UnlearnMethod = std::variant<NegGradParams, ScrubParams, SftcParams>;

std::string MethodName(const UnlearnMethod& method);
double LearningRate(const UnlearnMethod& method);
UnlearnMethod WithLearningRate(UnlearnMethod method, double learning_rate);
// Throws unless the learning rate is positive and alpha, gamma >= 0.
void ValidateMethod(const UnlearnMethod& method);

// One shuffled pass of descent on the true labels.
void FineTuneEpoch(MlpModel& model, const RowSet& retain, double learning_rate,
                   int batch_size, Rng& rng);

// One shuffled pass of cross-entropy ascent over `forget`. Never reads any
// other rows.
void NegGradEpoch(MlpModel& model, const RowSet& forget, double learning_rate,
                  int batch_size, Rng& rng);

// Max phase over forget (skipped when gamma == 0), then min phase over
// retain (plain fine-tuning when alpha == 0). `teacher` is read-only.
void ScrubEpoch(MlpModel& student, const MlpModel& teacher,
                const RowSet& retain, const RowSet& forget,
                const ScrubParams& params, int batch_size, Rng& rng);

// For each label, a class drawn uniformly from the num_classes - 1 wrong
// ones. Throws kConfig when num_classes < 2.
std::vector<int> SampleConfusionLabels(std::span<const int> labels,
                                       int num_classes, Rng& rng);

// Retain batches and forget batches alternate, retain first; leftovers of
// the longer list run at the end. Forget batches descend on confusion
// labels: `confusion_labels` (aligned with forget.rows()) when nonempty,
// otherwise freshly sampled. Retain shuffling happens before any forget
// draw, so an empty forget set reproduces FineTuneEpoch exactly.
void SftcEpoch(MlpModel& model, const RowSet& retain, const RowSet& forget,
               const SftcParams& params, int batch_size, Rng& rng,
               std::span<const int> confusion_labels = {});

struct TraceEntry {
  EpochMetrics metrics;
  AttackReport attack;
};

struct UnlearnTrace {
  std::string method;
  double learning_rate = 0.0;
  int epochs_run = 0;
  std::vector<TraceEntry> entries;
};

// Called after every epoch with the current model and the 1-based epoch.
using UnlearnHook =
    std::function<TraceEntry(const MlpModel& model, int epoch)>;

struct UnlearnOptions {
  int epochs = 0;
  int batch_size = 64;
  std::uint64_t seed = 0;
  // Attached to the retain and forget row sets used for updates.
  const RowAccessObserver* observer = nullptr;
};

struct UnlearnResult {
  MlpModel model;
  UnlearnTrace trace;
};

// Snapshots the teacher, then runs `options.epochs` epochs of `method`,
// calling `hook` after each. Without a hook, entries hold only the epoch
// index.
UnlearnResult RunUnlearning(MlpModel model, const SplitBundle& splits,
                            const Dataset& dataset,
                            const UnlearnMethod& method,
                            const UnlearnOptions& options,
                            const UnlearnHook& hook = {});

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_UNLEARN_H_
