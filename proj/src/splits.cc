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

#include "unlearn_audit/splits.h"

#include <cmath>
#include <string>

#include "unlearn_audit/error.h"
#include "unlearn_audit/random.h"

namespace unlearn_audit {
namespace {

void CheckFraction(double f, const char* name) {
  if (!(f > 0.0 && f < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(name) + " must lie strictly in (0, 1), got " +
                    std::to_string(f));
  }
}

void CheckNonEmpty(const std::vector<std::size_t>& part, const char* name) {
  if (part.empty()) {
    throw Error(ErrorCode::kSplit,
                std::string("split leaves '") + name + "' empty");
  }
}

}  // namespace

void SplitPlan::Validate() const {
  CheckFraction(train_fraction, "train_fraction");
  CheckFraction(target_shadow_fraction, "target_shadow_fraction");
  CheckFraction(retain_fraction, "retain_fraction");
  if (forget_mode == ForgetMode::kSingleClass && forget_class < 0) {
    throw Error(ErrorCode::kInvalidArgument, "forget_class must be >= 0");
  }
}

std::size_t FractionCount(std::size_t n, double fraction) {
  // The epsilon absorbs representation error such as (1 - 0.8) * 100.
  constexpr double kSlack = 1e-9;
  if (fraction <= 0.5) {
    return static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * fraction + kSlack));
  }
  const auto other = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * (1.0 - fraction) + kSlack));
  return n - other;
}

SplitBundle MakeSplits(const Dataset& dataset, const SplitPlan& plan) {
  plan.Validate();
  const std::size_t n = dataset.size();
  Rng rng(plan.seed);
  const std::vector<std::size_t> order = ShuffledIndices(n, rng);

  SplitBundle bundle;
  const std::size_t test_count = n - FractionCount(n, plan.train_fraction);
  const std::size_t train_count = n - test_count;
  const std::size_t target_count =
      FractionCount(train_count, plan.target_shadow_fraction);

  bundle.test.assign(order.begin(), order.begin() + test_count);
  bundle.target_train.assign(order.begin() + test_count,
                             order.begin() + test_count + target_count);
  bundle.shadow_pool.assign(order.begin() + test_count + target_count,
                            order.end());
  CheckNonEmpty(bundle.test, "test");
  CheckNonEmpty(bundle.target_train, "target_train");
  CheckNonEmpty(bundle.shadow_pool, "shadow_pool");

  if (plan.forget_mode == ForgetMode::kRandomRows) {
    const std::size_t retain_count =
        FractionCount(bundle.target_train.size(), plan.retain_fraction);
    bundle.retain.assign(bundle.target_train.begin(),
                         bundle.target_train.begin() + retain_count);
    bundle.forget.assign(bundle.target_train.begin() + retain_count,
                         bundle.target_train.end());
  } else {
    for (std::size_t row : bundle.target_train) {
      if (dataset.labels[row] == plan.forget_class) {
        bundle.forget.push_back(row);
      } else {
        bundle.retain.push_back(row);
      }
    }
    if (bundle.forget.empty()) {
      throw Error(ErrorCode::kClass,
                  "class " + std::to_string(plan.forget_class) +
                      " does not occur in target_train");
    }
  }
  CheckNonEmpty(bundle.retain, "retain");
  CheckNonEmpty(bundle.forget, "forget");
  return bundle;
}

}  // namespace unlearn_audit
