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

#ifndef UNLEARN_AUDIT_SYNTHETIC_H_
#define UNLEARN_AUDIT_SYNTHETIC_H_

#include <cstdint>

#include "unlearn_audit/dataset.h"

namespace unlearn_audit {

// Gaussian class blobs with unit-variance isotropic noise.
struct SyntheticSpec {
  int n_samples = 1000;
  int n_features = 20;
  int n_classes = 5;
  // Distance between class centroids, in units of the noise sigma.
  double class_separation = 3.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Centroids are drawn once per class. When n_classes <= n_features they are
// orthogonal after a random rotation, so every pair of centroids is exactly
// `class_separation` apart; otherwise they are random directions with the
// same norm. Classes are balanced within one sample and rows are shuffled.
Dataset GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_SYNTHETIC_H_
