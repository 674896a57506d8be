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

#ifndef UNLEARN_AUDIT_CONFIG_H_
#define UNLEARN_AUDIT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unlearn_audit/splits.h"
#include "unlearn_audit/synthetic.h"
#include "unlearn_audit/tabular_io.h"
#include "unlearn_audit/train.h"
#include "unlearn_audit/unlearn.h"

namespace unlearn_audit {

// Raw key=value pairs, ordered so that echoes are deterministic.
using ConfigMap = std::map<std::string, std::string>;

struct DataSource {
  // Empty path means: generate `synthetic`.
  std::filesystem::path path;
  TabularFormat format = TabularFormat::kBinaryF32;
  SyntheticSpec synthetic;
};

struct ExperimentConfig {
  DataSource data;
  SplitPlan split;
  std::vector<int> hidden_units = {128};
  TrainConfig target;
  int shadow_count = 5;
  TrainConfig attack;
  std::optional<std::uint64_t> attack_seed;
  UnlearnMethod method = NegGradParams{};
  int unlearn_epochs = 10;
  int unlearn_batch_size = 64;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  // The key=value pairs this config was built from.
  ConfigMap source;
};

// Every accepted key with its default value.
const ConfigMap& DefaultConfigMap();
bool IsConfigKey(std::string_view key);

// Flat key=value lines; '#' starts a comment; blank lines are ignored.
// Unknown keys and malformed lines are kConfig errors naming the line.
ConfigMap ParseConfigText(std::string_view text);
ConfigMap LoadConfigFile(const std::filesystem::path& path);

// Later entries win. Unknown keys are kConfig errors.
ConfigMap MergeConfig(const ConfigMap& base, const ConfigMap& overrides);

// Applies defaults for missing keys and validates every value.
ExperimentConfig BuildExperimentConfig(const ConfigMap& values);

std::string FormatConfig(const ConfigMap& values);

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_CONFIG_H_
