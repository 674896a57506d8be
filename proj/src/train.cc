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

#include "unlearn_audit/train.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "unlearn_audit/error.h"

namespace unlearn_audit {

void TrainConfig::Validate() const {
  if (epochs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  }
  if (batch_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  }
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "validation_fraction must lie in [0, 1)");
  }
}

double EvaluateAccuracy(const MlpModel& model, const RowSet& rows) {
  const Batch batch = rows.Materialize();
  return EvaluateAccuracy(model, batch.features, batch.labels);
}

double MeanCrossEntropy(const MlpModel& model, const RowSet& rows) {
  if (rows.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mean loss of an empty set");
  }
  const Batch batch = rows.Materialize();
  const Matrix p = Forward(model, batch.features);
  double total = 0.0;
  for (int i = 0; i < p.rows(); ++i) {
    total -= std::log(std::max(p(i, batch.labels[i]),
                               std::numeric_limits<double>::min()));
  }
  return total / static_cast<double>(p.rows());
}

EpochMetrics EvaluateEpochMetrics(const MlpModel& model, int epoch,
                                  const EvalSets& sets) {
  auto score = [&model](const RowSet* rows) {
    return rows == nullptr || rows->empty() ? EpochMetrics::kMissing
                                            : EvaluateAccuracy(model, *rows);
  };
  EpochMetrics m;
  m.epoch = epoch;
  m.train_acc = score(sets.train);
  m.val_acc = score(sets.validation);
  m.test_acc = score(sets.test);
  m.forget_acc = score(sets.forget);
  m.retain_acc = score(sets.retain);
  return m;
}

double SgdStep(MlpModel& model, const Matrix& features,
               std::span<const int> labels, double learning_rate,
               StepDirection direction, const char* context) {
  const LossAndGradient lg = ComputeLossAndGradient(model, features, labels);
  if (!std::isfinite(lg.mean_loss)) {
    throw Error(ErrorCode::kNumerical,
                std::string(context) + ": non-finite loss");
  }
  ApplyStep(model, lg.gradients, learning_rate, direction);
  if (!model.AllFinite()) {
    throw Error(ErrorCode::kNumerical,
                std::string(context) + ": parameters diverged to NaN/Inf");
  }
  return lg.mean_loss;
}

std::vector<std::vector<std::size_t>> ShuffledBatches(std::size_t count,
                                                      int batch_size,
                                                      Rng& rng) {
  if (batch_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  }
  const std::vector<std::size_t> order = ShuffledIndices(count, rng);
  std::vector<std::vector<std::size_t>> batches;
  const auto step = static_cast<std::size_t>(batch_size);
  for (std::size_t start = 0; start < count; start += step) {
    const std::size_t end = std::min(count, start + step);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

double SgdPass(MlpModel& model, const RowSet& rows, double learning_rate,
               int batch_size, StepDirection direction, Rng& rng,
               const char* context) {
  double weighted = 0.0;
  for (const auto& positions : ShuffledBatches(rows.size(), batch_size, rng)) {
    const Batch batch = rows.Gather(positions);
    weighted += SgdStep(model, batch.features, batch.labels, learning_rate,
                        direction, context) *
                static_cast<double>(positions.size());
  }
  return rows.empty() ? 0.0 : weighted / static_cast<double>(rows.size());
}

std::vector<EpochMetrics> Train(MlpModel& model, const RowSet& train_set,
                                const TrainConfig& config,
                                const EvalSets& eval, const EpochHook& hook) {
  config.Validate();
  if (train_set.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "training set is empty");
  }
  if (train_set.feature_dim() != model.input_dim()) {
    throw Error(ErrorCode::kShape,
                "training features have " +
                    std::to_string(train_set.feature_dim()) +
                    " columns, model expects " +
                    std::to_string(model.input_dim()));
  }
  if (train_set.num_classes() > model.num_classes()) {
    throw Error(ErrorCode::kShape,
                "dataset has more classes than the model outputs");
  }

  RowSet fit_rows = train_set;
  std::optional<RowSet> carved_validation;
  EvalSets sets = eval;
  if (eval.validation == nullptr && config.validation_fraction > 0.0) {
    Rng carve_rng(DeriveSeed(config.seed, 1));
    std::vector<std::size_t> order = train_set.rows();
    std::shuffle(order.begin(), order.end(), carve_rng);
    const auto val_count = static_cast<std::size_t>(std::floor(
        static_cast<double>(order.size()) * config.validation_fraction));
    if (val_count > 0 && val_count < order.size()) {
      carved_validation.emplace(
          train_set.dataset(),
          std::vector<std::size_t>(order.begin(),
                                   order.begin() + static_cast<std::ptrdiff_t>(
                                                       val_count)));
      fit_rows = RowSet(train_set.dataset(),
                        std::vector<std::size_t>(
                            order.begin() +
                                static_cast<std::ptrdiff_t>(val_count),
                            order.end()));
      sets.validation = &*carved_validation;
    }
  }
  sets.train = &fit_rows;

  Rng rng(config.seed);
  std::vector<EpochMetrics> history;
  history.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const std::string context = "training epoch " + std::to_string(epoch);
    const double loss =
        SgdPass(model, fit_rows, config.learning_rate, config.batch_size,
                StepDirection::kDescend, rng, context.c_str());
    EpochMetrics metrics = EvaluateEpochMetrics(model, epoch, sets);
    metrics.mean_loss = loss;
    history.push_back(metrics);
    if (hook) hook(model, metrics);
  }
  return history;
}

}  // namespace unlearn_audit
