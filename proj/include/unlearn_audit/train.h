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

#ifndef UNLEARN_AUDIT_TRAIN_H_
#define UNLEARN_AUDIT_TRAIN_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "unlearn_audit/dataset.h"
#include "unlearn_audit/mlp.h"
#include "unlearn_audit/random.h"

namespace unlearn_audit {

struct TrainConfig {
  int epochs = 1;
  double learning_rate = 0.01;
  int batch_size = 64;
  std::uint64_t seed = 0;
  // Share of the training rows held out as a validation set when the caller
  // does not pass one explicitly.
  double validation_fraction = 0.1;

  void Validate() const;
};

// Accuracies are NaN when the corresponding set was not supplied.
struct EpochMetrics {
  static constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

  int epoch = 0;
  double train_acc = kMissing;
  double val_acc = kMissing;
  double test_acc = kMissing;
  double forget_acc = kMissing;
  double retain_acc = kMissing;
  double mean_loss = 0.0;
};

// Optional sets to score after every epoch. Pointers must stay valid for
// the duration of the call that receives them.
struct EvalSets {
  const RowSet* train = nullptr;
  const RowSet* validation = nullptr;
  const RowSet* test = nullptr;
  const RowSet* forget = nullptr;
  const RowSet* retain = nullptr;
};

double EvaluateAccuracy(const MlpModel& model, const RowSet& rows);

// Mean cross-entropy of `model` on `rows` against their labels.
double MeanCrossEntropy(const MlpModel& model, const RowSet& rows);

// Scores every supplied set. mean_loss is left at zero.
EpochMetrics EvaluateEpochMetrics(const MlpModel& model, int epoch,
                                  const EvalSets& sets);

using EpochHook =
    std::function<void(const MlpModel& model, const EpochMetrics& metrics)>;

// One gradient step on a batch against `labels`. Returns the batch loss.
// Throws kNumerical on a non-finite loss or parameter, naming `context`.
double SgdStep(MlpModel& model, const Matrix& features,
               std::span<const int> labels, double learning_rate,
               StepDirection direction, const char* context);

// Shuffled mini-batches of positions in [0, count). The last batch may be
// short. Draws from `rng` only when count > 1.
std::vector<std::vector<std::size_t>> ShuffledBatches(std::size_t count,
                                                      int batch_size, Rng& rng);

// One shuffled pass of SgdStep over `rows` with their true labels. Returns
// the sample-weighted mean batch loss.
double SgdPass(MlpModel& model, const RowSet& rows, double learning_rate,
               int batch_size, StepDirection direction, Rng& rng,
               const char* context);

// Plain mini-batch SGD. When eval.validation is null and
// config.validation_fraction > 0, a seeded validation slice is carved from
// `train_set` and excluded from the updates. `eval.train` is ignored; train
// accuracy is measured on the rows actually used for updates.
std::vector<EpochMetrics> Train(MlpModel& model, const RowSet& train_set,
                                const TrainConfig& config,
                                const EvalSets& eval = {},
                                const EpochHook& hook = {});

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_TRAIN_H_
