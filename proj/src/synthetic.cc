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

#include "unlearn_audit/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "unlearn_audit/error.h"
#include "unlearn_audit/random.h"

namespace unlearn_audit {

void SyntheticSpec::Validate() const {
  if (n_samples < 1 || n_features < 1 || n_classes < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic sizes must be positive");
  }
  if (n_samples < n_classes) {
    throw Error(ErrorCode::kInvalidArgument,
                "n_samples (" + std::to_string(n_samples) +
                    ") must be at least n_classes (" +
                    std::to_string(n_classes) + ")");
  }
  if (!(class_separation > 0.0) || !std::isfinite(class_separation)) {
    throw Error(ErrorCode::kInvalidArgument,
                "class_separation must be positive");
  }
}

Dataset GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix centroids(spec.n_classes, spec.n_features);
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    for (Eigen::Index j = 0; j < centroids.cols(); ++j) {
      centroids(c, j) = normal(rng);
    }
  }
  // Gram-Schmidt when possible; plain normalization otherwise.
  const bool orthogonal = spec.n_classes <= spec.n_features;
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    if (orthogonal) {
      for (Eigen::Index prev = 0; prev < c; ++prev) {
        const double proj = centroids.row(c).dot(centroids.row(prev));
        centroids.row(c) -= proj * centroids.row(prev);
      }
    }
    centroids.row(c).normalize();
  }
  centroids *= spec.class_separation / std::sqrt(2.0);

  std::vector<int> labels(spec.n_samples);
  for (int i = 0; i < spec.n_samples; ++i) labels[i] = i % spec.n_classes;
  std::shuffle(labels.begin(), labels.end(), rng);

  Dataset dataset;
  dataset.name = "synthetic";
  dataset.num_classes = spec.n_classes;
  dataset.features.resize(spec.n_samples, spec.n_features);
  for (int i = 0; i < spec.n_samples; ++i) {
    for (int j = 0; j < spec.n_features; ++j) {
      dataset.features(i, j) = centroids(labels[i], j) + normal(rng);
    }
  }
  dataset.labels = std::move(labels);
  return dataset;
}

}  // namespace unlearn_audit
