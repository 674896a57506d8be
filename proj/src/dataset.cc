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

#include "unlearn_audit/dataset.h"

#include <numeric>
#include <string>
#include <utility>

#include "unlearn_audit/error.h"

namespace unlearn_audit {

void Dataset::Validate() const {
  if (labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset '" + name + "' has no rows");
  }
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw Error(ErrorCode::kShape,
                "dataset '" + name + "' has " +
                    std::to_string(features.rows()) + " feature rows but " +
                    std::to_string(labels.size()) + " labels");
  }
  if (num_classes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "num_classes must be positive");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw Error(ErrorCode::kLabel, "row " + std::to_string(i) + " label " +
                                         std::to_string(labels[i]) +
                                         " outside [0, " +
                                         std::to_string(num_classes) + ")");
    }
  }
  if (!features.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset '" + name + "' contains non-finite features");
  }
}

RowSet::RowSet(const Dataset& dataset, std::vector<std::size_t> rows)
    : dataset_(&dataset), rows_(std::move(rows)) {
  for (std::size_t row : rows_) {
    if (row >= dataset.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(row) + " outside dataset of size " +
                      std::to_string(dataset.size()));
    }
  }
}

RowSet RowSet::All(const Dataset& dataset) {
  std::vector<std::size_t> rows(dataset.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return RowSet(dataset, std::move(rows));
}

Batch RowSet::Gather(std::span<const std::size_t> positions) const {
  Batch batch;
  batch.features.resize(static_cast<Eigen::Index>(positions.size()),
                        dataset_->features.cols());
  batch.labels.resize(positions.size());
  std::vector<std::size_t> touched;
  touched.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::size_t row = rows_.at(positions[i]);
    batch.features.row(static_cast<Eigen::Index>(i)) =
        dataset_->features.row(static_cast<Eigen::Index>(row));
    batch.labels[i] = dataset_->labels[row];
    touched.push_back(row);
  }
  if (observer_ != nullptr && *observer_) (*observer_)(touched);
  return batch;
}

Batch RowSet::Materialize() const {
  std::vector<std::size_t> positions(rows_.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  return Gather(positions);
}

std::vector<int> RowSet::Labels() const {
  std::vector<int> out;
  out.reserve(rows_.size());
  for (std::size_t row : rows_) out.push_back(dataset_->labels[row]);
  return out;
}

}  // namespace unlearn_audit
