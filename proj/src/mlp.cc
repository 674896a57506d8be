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

#include "unlearn_audit/mlp.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <string>

#include "unlearn_audit/error.h"
#include "unlearn_audit/random.h"

namespace unlearn_audit {
namespace {

constexpr double kKlEpsilon = 1e-12;

void ValidateDims(std::span<const int> layer_dims) {
  if (layer_dims.size() < 2) {
    throw Error(ErrorCode::kShape,
                "an MLP needs at least an input and an output dimension");
  }
  for (int dim : layer_dims) {
    if (dim < 1) {
      throw Error(ErrorCode::kShape,
                  "layer dimensions must be positive, got " +
                      std::to_string(dim));
    }
  }
}

void CheckInput(const MlpModel& model, const Matrix& features) {
  if (features.cols() != model.input_dim()) {
    throw Error(ErrorCode::kShape,
                "features have " + std::to_string(features.cols()) +
                    " columns, model expects " +
                    std::to_string(model.input_dim()));
  }
}

void CheckCongruent(const MlpModel& model, const GradientSet& gradients) {
  bool ok = gradients.layers.size() == model.layers.size();
  for (std::size_t k = 0; ok && k < model.layers.size(); ++k) {
    ok = gradients.layers[k].weight.rows() == model.layers[k].weight.rows() &&
         gradients.layers[k].weight.cols() == model.layers[k].weight.cols() &&
         gradients.layers[k].bias.size() == model.layers[k].bias.size();
  }
  if (!ok) {
    throw Error(ErrorCode::kShape, "gradient set does not match model shape");
  }
}

Matrix LogSoftmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    const double log_sum =
        std::log((logits.row(i).array() - m).exp().sum()) + m;
    out.row(i) = logits.row(i).array() - log_sum;
  }
  return out;
}

struct ForwardCache {
  std::vector<Matrix> activations;  // input, then each hidden output
  std::vector<Matrix> pre_activations;
  Matrix logits;
};

ForwardCache RunForward(const MlpModel& model, const Matrix& features) {
  CheckInput(model, features);
  ForwardCache cache;
  cache.activations.push_back(features);
  for (std::size_t k = 0; k < model.layers.size(); ++k) {
    const DenseLayer& layer = model.layers[k];
    Matrix z = cache.activations.back() * layer.weight.transpose();
    z.rowwise() += layer.bias.transpose();
    if (k + 1 == model.layers.size()) {
      cache.logits = std::move(z);
    } else {
      cache.activations.push_back(z.cwiseMax(0.0));
      cache.pre_activations.push_back(std::move(z));
    }
  }
  return cache;
}

// d(mean loss)/d(logits) -> parameter gradients.
GradientSet Backward(const MlpModel& model, const ForwardCache& cache,
                     Matrix delta) {
  GradientSet grads;
  grads.layers.resize(model.layers.size());
  for (std::size_t k = model.layers.size(); k-- > 0;) {
    grads.layers[k].weight = delta.transpose() * cache.activations[k];
    grads.layers[k].bias = delta.colwise().sum().transpose();
    if (k > 0) {
      Matrix upstream = delta * model.layers[k].weight;
      const Matrix& z = cache.pre_activations[k - 1];
      delta = (z.array() > 0.0).select(upstream, 0.0);
    }
  }
  return grads;
}

void CheckFeaturesFinite(const Matrix& features) {
  if (!features.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "features contain NaN or Inf");
  }
}

}  // namespace

std::size_t MlpModel::ParameterCount() const {
  std::size_t count = 0;
  for (const DenseLayer& layer : layers) {
    count += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  }
  return count;
}

bool MlpModel::AllFinite() const {
  return std::all_of(layers.begin(), layers.end(), [](const DenseLayer& l) {
    return l.weight.allFinite() && l.bias.allFinite();
  });
}

bool BitwiseEqual(const MlpModel& a, const MlpModel& b) {
  if (a.layer_dims != b.layer_dims || a.layers.size() != b.layers.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.layers.size(); ++k) {
    const DenseLayer& x = a.layers[k];
    const DenseLayer& y = b.layers[k];
    if (x.weight.size() != y.weight.size() || x.bias.size() != y.bias.size()) {
      return false;
    }
    if (std::memcmp(x.weight.data(), y.weight.data(),
                    sizeof(double) * x.weight.size()) != 0 ||
        std::memcmp(x.bias.data(), y.bias.data(),
                    sizeof(double) * x.bias.size()) != 0) {
      return false;
    }
  }
  return true;
}

double MaxAbsDifference(const MlpModel& a, const MlpModel& b) {
  if (a.layer_dims != b.layer_dims) {
    throw Error(ErrorCode::kShape, "models have different layer dims");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.layers.size(); ++k) {
    worst = std::max(
        worst, (a.layers[k].weight - b.layers[k].weight).cwiseAbs().maxCoeff());
    worst = std::max(
        worst, (a.layers[k].bias - b.layers[k].bias).cwiseAbs().maxCoeff());
  }
  return worst;
}

MlpModel InitMlp(std::span<const int> layer_dims, std::uint64_t seed) {
  MlpModel model = ZeroMlp(layer_dims);
  Rng rng(seed);
  for (DenseLayer& layer : model.layers) {
    const double fan_out = static_cast<double>(layer.weight.rows());
    const double fan_in = static_cast<double>(layer.weight.cols());
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> uniform(-limit, limit);
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) {
      layer.weight.data()[i] = uniform(rng);
    }
  }
  return model;
}

MlpModel ZeroMlp(std::span<const int> layer_dims) {
  ValidateDims(layer_dims);
  MlpModel model;
  model.layer_dims.assign(layer_dims.begin(), layer_dims.end());
  for (std::size_t k = 0; k + 1 < layer_dims.size(); ++k) {
    model.layers.push_back(
        {Matrix::Zero(layer_dims[k + 1], layer_dims[k]),
         Vector::Zero(layer_dims[k + 1])});
  }
  return model;
}

Matrix Logits(const MlpModel& model, const Matrix& features) {
  return RunForward(model, features).logits;
}

Matrix Softmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    out.row(i) = (logits.row(i).array() - m).exp();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

Matrix Forward(const MlpModel& model, const Matrix& features) {
  return Softmax(Logits(model, features));
}

LossAndGradient ComputeLossAndGradient(const MlpModel& model,
                                       const Matrix& features,
                                       std::span<const int> labels) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw Error(ErrorCode::kShape,
                std::to_string(features.rows()) + " feature rows but " +
                    std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty batch");
  }
  for (int label : labels) {
    if (label < 0 || label >= model.num_classes()) {
      throw Error(ErrorCode::kLabel,
                  "label " + std::to_string(label) + " outside [0, " +
                      std::to_string(model.num_classes()) + ")");
    }
  }
  CheckFeaturesFinite(features);
  const ForwardCache cache = RunForward(model, features);
  const Matrix log_probs = LogSoftmax(cache.logits);
  const auto n = static_cast<double>(labels.size());

  LossAndGradient out;
  Matrix delta = log_probs.array().exp();
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    total -= log_probs(row, labels[i]);
    delta(row, labels[i]) -= 1.0;
  }
  delta /= n;
  out.mean_loss = total / n;
  out.gradients = Backward(model, cache, std::move(delta));
  return out;
}

LossAndGradient ComputeLossAndGradient(const MlpModel& model,
                                       const Matrix& features,
                                       const Matrix& soft_targets) {
  if (soft_targets.rows() != features.rows() ||
      soft_targets.cols() != model.num_classes()) {
    throw Error(ErrorCode::kShape, "soft targets must be n x num_classes");
  }
  if (features.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty batch");
  }
  if (!soft_targets.allFinite() || (soft_targets.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidArgument,
                "soft targets must be finite and nonnegative");
  }
  CheckFeaturesFinite(features);
  const ForwardCache cache = RunForward(model, features);
  const Matrix log_probs = LogSoftmax(cache.logits);
  const auto n = static_cast<double>(features.rows());

  LossAndGradient out;
  out.mean_loss = -(soft_targets.array() * log_probs.array()).sum() / n;
  // d/dz of -sum t log softmax(z) is p * sum(t) - t.
  Matrix delta = log_probs.array().exp();
  for (Eigen::Index i = 0; i < delta.rows(); ++i) {
    delta.row(i) *= soft_targets.row(i).sum();
  }
  delta -= soft_targets;
  delta /= n;
  out.gradients = Backward(model, cache, std::move(delta));
  return out;
}

void ApplyStep(MlpModel& model, const GradientSet& gradients,
               double learning_rate, StepDirection direction) {
  CheckCongruent(model, gradients);
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  const double signed_rate =
      direction == StepDirection::kDescend ? -learning_rate : learning_rate;
  for (std::size_t k = 0; k < model.layers.size(); ++k) {
    model.layers[k].weight += signed_rate * gradients.layers[k].weight;
    model.layers[k].bias += signed_rate * gradients.layers[k].bias;
  }
}

void AddScaled(GradientSet& into, const GradientSet& other, double scale) {
  if (into.layers.size() != other.layers.size()) {
    throw Error(ErrorCode::kShape, "gradient sets differ in depth");
  }
  for (std::size_t k = 0; k < into.layers.size(); ++k) {
    into.layers[k].weight += scale * other.layers[k].weight;
    into.layers[k].bias += scale * other.layers[k].bias;
  }
}

int ArgMax(const Eigen::Ref<const Vector>& values) {
  int best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = static_cast<int>(i);
  }
  return best;
}

std::vector<int> Predict(const MlpModel& model, const Matrix& features) {
  const Matrix logits = Logits(model, features);
  std::vector<int> out(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = ArgMax(logits.row(i).transpose());
  }
  return out;
}

double EvaluateAccuracy(const MlpModel& model, const Matrix& features,
                        std::span<const int> labels) {
  if (labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "accuracy over an empty set is undefined");
  }
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw Error(ErrorCode::kShape, "feature rows and labels differ in count");
  }
  const std::vector<int> predicted = Predict(model, features);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predicted[i] == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double KlDivergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kShape, "distributions differ in length");
  }
  auto check = [](std::span<const double> d, const char* name) {
    double sum = 0.0;
    for (double v : d) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(name) + " has a negative or non-finite entry");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(name) + " does not sum to 1");
    }
  };
  check(p, "p");
  check(q, "q");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      kl += p[i] * std::log((p[i] + kKlEpsilon) / (q[i] + kKlEpsilon));
    }
  }
  return kl;
}

double MeanKlDivergence(const Matrix& p, const Matrix& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols() || p.rows() == 0) {
    throw Error(ErrorCode::kShape, "posterior matrices must match");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    total += KlDivergence(std::span<const double>(p.row(i).data(), p.cols()),
                          std::span<const double>(q.row(i).data(), q.cols()));
  }
  return total / static_cast<double>(p.rows());
}

}  // namespace unlearn_audit
