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

#include "unlearn_audit/unlearn.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

#include "unlearn_audit/error.h"

namespace unlearn_audit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void CheckFinite(const MlpModel& model, double loss, const char* context) {
  if (!std::isfinite(loss)) {
    throw Error(ErrorCode::kNumerical,
                std::string(context) + ": non-finite loss");
  }
  if (!model.AllFinite()) {
    throw Error(ErrorCode::kNumerical,
                std::string(context) + ": parameters diverged to NaN/Inf");
  }
}

}  // namespace

std::string MethodName(const UnlearnMethod& method) {
  return std::visit(Overloaded{[](const NegGradParams&) { return "neggrad"; },
                               [](const ScrubParams&) { return "scrub"; },
                               [](const SftcParams&) { return "sftc"; }},
                    method);
}

double LearningRate(const UnlearnMethod& method) {
  return std::visit([](const auto& p) { return p.learning_rate; }, method);
}

UnlearnMethod WithLearningRate(UnlearnMethod method, double learning_rate) {
  std::visit([learning_rate](auto& p) { p.learning_rate = learning_rate; },
             method);
  return method;
}

void ValidateMethod(const UnlearnMethod& method) {
  const double lr = LearningRate(method);
  if (!(lr > 0.0) || !std::isfinite(lr)) {
    throw Error(ErrorCode::kConfig, "unlearning learning rate must be > 0");
  }
  if (const auto* scrub = std::get_if<ScrubParams>(&method)) {
    if (!(scrub->alpha >= 0.0) || !(scrub->gamma >= 0.0)) {
      throw Error(ErrorCode::kConfig, "scrub alpha and gamma must be >= 0");
    }
  }
}

void FineTuneEpoch(MlpModel& model, const RowSet& retain, double learning_rate,
                   int batch_size, Rng& rng) {
  SgdPass(model, retain, learning_rate, batch_size, StepDirection::kDescend,
          rng, "fine-tune");
}

void NegGradEpoch(MlpModel& model, const RowSet& forget, double learning_rate,
                  int batch_size, Rng& rng) {
  if (forget.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "NegGrad needs a forget set");
  }
  SgdPass(model, forget, learning_rate, batch_size, StepDirection::kAscend, rng,
          "neggrad");
}

void ScrubEpoch(MlpModel& student, const MlpModel& teacher,
                const RowSet& retain, const RowSet& forget,
                const ScrubParams& params, int batch_size, Rng& rng) {
  if (student.layer_dims != teacher.layer_dims) {
    throw Error(ErrorCode::kShape, "student and teacher shapes differ");
  }
  if (retain.empty() || forget.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "SCRUB needs nonempty retain and forget sets");
  }
  if (params.gamma > 0.0) {
    for (const auto& positions :
         ShuffledBatches(forget.size(), batch_size, rng)) {
      const Batch batch = forget.Gather(positions);
      const Matrix targets = Forward(teacher, batch.features);
      const LossAndGradient lg =
          ComputeLossAndGradient(student, batch.features, targets);
      ApplyStep(student, lg.gradients, params.learning_rate * params.gamma,
                StepDirection::kAscend);
      CheckFinite(student, lg.mean_loss, "scrub max phase");
    }
  }
  if (params.alpha == 0.0) {
    FineTuneEpoch(student, retain, params.learning_rate, batch_size, rng);
    return;
  }
  for (const auto& positions :
       ShuffledBatches(retain.size(), batch_size, rng)) {
    const Batch batch = retain.Gather(positions);
    LossAndGradient ce =
        ComputeLossAndGradient(student, batch.features, batch.labels);
    const Matrix targets = Forward(teacher, batch.features);
    const LossAndGradient kl =
        ComputeLossAndGradient(student, batch.features, targets);
    AddScaled(ce.gradients, kl.gradients, params.alpha);
    ApplyStep(student, ce.gradients, params.learning_rate,
              StepDirection::kDescend);
    CheckFinite(student, ce.mean_loss + params.alpha * kl.mean_loss,
                "scrub min phase");
  }
}

std::vector<int> SampleConfusionLabels(std::span<const int> labels,
                                       int num_classes, Rng& rng) {
  if (num_classes < 2) {
    throw Error(ErrorCode::kConfig,
                "confusion labels need at least two classes");
  }
  std::uniform_int_distribution<int> pick(0, num_classes - 2);
  std::vector<int> out;
  out.reserve(labels.size());
  for (int label : labels) {
    const int draw = pick(rng);
    // Skip over the true class so every wrong class is equally likely.
    out.push_back(draw >= label ? draw + 1 : draw);
  }
  return out;
}

void SftcEpoch(MlpModel& model, const RowSet& retain, const RowSet& forget,
               const SftcParams& params, int batch_size, Rng& rng,
               std::span<const int> confusion_labels) {
  if (retain.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "SFTC needs a retain set");
  }
  if (model.num_classes() < 2) {
    throw Error(ErrorCode::kConfig,
                "SFTC needs at least two classes to confuse");
  }
  if (!confusion_labels.empty() && confusion_labels.size() != forget.size()) {
    throw Error(ErrorCode::kShape,
                "confusion labels must align with the forget set");
  }
  const auto retain_batches = ShuffledBatches(retain.size(), batch_size, rng);
  std::vector<int> sampled;
  if (confusion_labels.empty() && !forget.empty()) {
    sampled = SampleConfusionLabels(forget.Labels(), model.num_classes(), rng);
    confusion_labels = sampled;
  }
  const auto forget_batches = ShuffledBatches(forget.size(), batch_size, rng);

  const std::size_t rounds =
      std::max(retain_batches.size(), forget_batches.size());
  for (std::size_t i = 0; i < rounds; ++i) {
    if (i < retain_batches.size()) {
      const Batch batch = retain.Gather(retain_batches[i]);
      SgdStep(model, batch.features, batch.labels, params.learning_rate,
              StepDirection::kDescend, "sftc retain step");
    }
    if (i < forget_batches.size()) {
      const Batch batch = forget.Gather(forget_batches[i]);
      std::vector<int> wrong;
      wrong.reserve(forget_batches[i].size());
      for (std::size_t pos : forget_batches[i]) {
        wrong.push_back(confusion_labels[pos]);
      }
      SgdStep(model, batch.features, wrong, params.learning_rate,
              StepDirection::kDescend, "sftc forget step");
    }
  }
}

UnlearnResult RunUnlearning(MlpModel model, const SplitBundle& splits,
                            const Dataset& dataset,
                            const UnlearnMethod& method,
                            const UnlearnOptions& options,
                            const UnlearnHook& hook) {
  ValidateMethod(method);
  if (options.epochs < 0) {
    throw Error(ErrorCode::kConfig, "unlearning epochs must be >= 0");
  }
  if (options.batch_size < 1) {
    throw Error(ErrorCode::kConfig, "unlearning batch size must be >= 1");
  }
  RowSet retain(dataset, splits.retain);
  RowSet forget(dataset, splits.forget);
  retain.set_observer(options.observer);
  forget.set_observer(options.observer);

  UnlearnResult result{std::move(model), {}};
  result.trace.method = MethodName(method);
  result.trace.learning_rate = LearningRate(method);
  if (options.epochs == 0) return result;

  const MlpModel teacher = result.model;
  Rng rng(options.seed);
  std::vector<int> fixed_confusion;
  if (const auto* sftc = std::get_if<SftcParams>(&method);
      sftc != nullptr && sftc->resample == ConfusionResample::kOnce &&
      !forget.empty()) {
    fixed_confusion =
        SampleConfusionLabels(forget.Labels(), result.model.num_classes(), rng);
  }

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::visit(
        Overloaded{
            [&](const NegGradParams& p) {
              NegGradEpoch(result.model, forget, p.learning_rate,
                           options.batch_size, rng);
            },
            [&](const ScrubParams& p) {
              ScrubEpoch(result.model, teacher, retain, forget, p,
                         options.batch_size, rng);
            },
            [&](const SftcParams& p) {
              SftcEpoch(result.model, retain, forget, p, options.batch_size,
                        rng, fixed_confusion);
            }},
        method);
    TraceEntry entry;
    if (hook) {
      entry = hook(result.model, epoch);
    }
    entry.metrics.epoch = epoch;
    result.trace.entries.push_back(entry);
    result.trace.epochs_run = epoch;
  }
  return result;
}

}  // namespace unlearn_audit
