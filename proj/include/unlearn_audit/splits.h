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

#ifndef UNLEARN_AUDIT_SPLITS_H_
#define UNLEARN_AUDIT_SPLITS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "unlearn_audit/dataset.h"

namespace unlearn_audit {

enum class ForgetMode { kRandomRows, kSingleClass };

struct SplitPlan {
  double train_fraction = 0.8;
  double target_shadow_fraction = 0.5;
  double retain_fraction = 0.8;
  ForgetMode forget_mode = ForgetMode::kRandomRows;
  // Only read when forget_mode == kSingleClass.
  int forget_class = 0;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Index sets into the dataset rows.
//
// target_train, shadow_pool and test partition the dataset; retain and
// forget partition target_train.
struct SplitBundle {
  std::vector<std::size_t> target_train;
  std::vector<std::size_t> shadow_pool;
  std::vector<std::size_t> test;
  std::vector<std::size_t> retain;
  std::vector<std::size_t> forget;
};

// Size of the part that receives `fraction` of `n` items. The smaller part
// is floored and the larger part takes the remainder.
std::size_t FractionCount(std::size_t n, double fraction);

// Seeded shuffle, then sequential carving: test, then target/shadow halves
// of the rest, then retain/forget inside target_train.
SplitBundle MakeSplits(const Dataset& dataset, const SplitPlan& plan);

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_SPLITS_H_
