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

#ifndef UNLEARN_AUDIT_MLP_H_
#define UNLEARN_AUDIT_MLP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "unlearn_audit/linalg.h"

namespace unlearn_audit {

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out
};

// A fully connected network with rectifier hidden units and logit outputs.
// layer_dims = {input, hidden..., classes}.
struct MlpModel {
  std::vector<int> layer_dims;
  std::vector<DenseLayer> layers;

  int input_dim() const { return layer_dims.front(); }
  int num_classes() const { return layer_dims.back(); }
  std::size_t ParameterCount() const;
  bool AllFinite() const;
};

// Per-parameter gradients, shaped exactly like the model's layers.
struct GradientSet {
  std::vector<DenseLayer> layers;
};

// True when every parameter of `a` and `b` has the same bit pattern.
bool BitwiseEqual(const MlpModel& a, const MlpModel& b);
double MaxAbsDifference(const MlpModel& a, const MlpModel& b);

// Glorot-uniform weights, zero biases.
MlpModel InitMlp(std::span<const int> layer_dims, std::uint64_t seed);
MlpModel ZeroMlp(std::span<const int> layer_dims);

Matrix Logits(const MlpModel& model, const Matrix& features);
// Row-wise softmax with max subtraction.
Matrix Softmax(const Matrix& logits);
// Posterior probabilities, one distribution per row.
Matrix Forward(const MlpModel& model, const Matrix& features);

struct LossAndGradient {
  double mean_loss = 0.0;
  GradientSet gradients;
};

// Mean softmax cross-entropy against integer labels.
LossAndGradient ComputeLossAndGradient(const MlpModel& model,
                                       const Matrix& features,
                                       std::span<const int> labels);
// Mean cross-entropy -sum_c t_c log p_c against soft targets (one row per
// sample). With teacher posteriors as targets the gradient equals that of
// KL(teacher || model).
LossAndGradient ComputeLossAndGradient(const MlpModel& model,
                                       const Matrix& features,
                                       const Matrix& soft_targets);

enum class StepDirection { kDescend, kAscend };

// params -= lr * grad (descend) or params += lr * grad (ascend).
void ApplyStep(MlpModel& model, const GradientSet& gradients,
               double learning_rate, StepDirection direction);

// into += scale * other.
void AddScaled(GradientSet& into, const GradientSet& other, double scale);

// Lowest index wins ties.
int ArgMax(const Eigen::Ref<const Vector>& values);
std::vector<int> Predict(const MlpModel& model, const Matrix& features);

double EvaluateAccuracy(const MlpModel& model, const Matrix& features,
                        std::span<const int> labels);

// sum_i p_i ln((p_i + eps) / (q_i + eps)), eps = 1e-12.
double KlDivergence(std::span<const double> p, std::span<const double> q);

// Mean over rows of KL(p_row || q_row).
double MeanKlDivergence(const Matrix& p, const Matrix& q);

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_MLP_H_
