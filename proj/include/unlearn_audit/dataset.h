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

#ifndef UNLEARN_AUDIT_DATASET_H_
#define UNLEARN_AUDIT_DATASET_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "unlearn_audit/linalg.h"

namespace unlearn_audit {

// A labeled feature matrix. Rows are samples.
struct Dataset {
  std::string name;
  Matrix features;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }
  int feature_dim() const { return static_cast<int>(features.cols()); }

  // Throws unless n >= 1, shapes agree, labels are in range and every
  // feature is finite.
  void Validate() const;
};

// A dense copy of some rows, ready to feed to a model.
struct Batch {
  Matrix features;
  std::vector<int> labels;
};

// Called with the dataset row ids every time a RowSet copies rows out.
using RowAccessObserver =
    std::function<void(std::span<const std::size_t> dataset_rows)>;

// An ordered selection of rows from a Dataset. Does not own the dataset,
// which must outlive the RowSet.
class RowSet {
 public:
  RowSet(const Dataset& dataset, std::vector<std::size_t> rows);

  static RowSet All(const Dataset& dataset);

  const Dataset& dataset() const { return *dataset_; }
  const std::vector<std::size_t>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  int num_classes() const { return dataset_->num_classes; }
  int feature_dim() const { return dataset_->feature_dim(); }

  // `positions` index into rows(), not into the dataset.
  Batch Gather(std::span<const std::size_t> positions) const;
  Batch Materialize() const;
  std::vector<int> Labels() const;

  // The observer must outlive the RowSet. Pass nullptr to detach.
  void set_observer(const RowAccessObserver* observer) {
    observer_ = observer;
  }

 private:
  const Dataset* dataset_;
  std::vector<std::size_t> rows_;
  const RowAccessObserver* observer_ = nullptr;
};

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_DATASET_H_
