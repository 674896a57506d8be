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

#include "unlearn_audit/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <system_error>

#include "unlearn_audit/error.h"

namespace unlearn_audit {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value,
                           const char* want) {
  throw Error(ErrorCode::kConfig,
              "key '" + key + "': '" + value + "' is not " + want);
}

class Reader {
 public:
  explicit Reader(const ConfigMap& values) : values_(values) {}

  const std::string& Raw(const std::string& key) const {
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    return DefaultConfigMap().at(key);
  }

  double Real(const std::string& key) const {
    const std::string& v = Raw(key);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() ||
        !std::isfinite(out)) {
      BadValue(key, v, "a finite real number");
    }
    return out;
  }

  long long Integer(const std::string& key) const {
    const std::string& v = Raw(key);
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      BadValue(key, v, "an integer");
    }
    return out;
  }

  int PositiveInt(const std::string& key) const {
    const long long v = Integer(key);
    if (v < 1 || v > std::numeric_limits<int>::max()) {
      BadValue(key, Raw(key), "a positive integer");
    }
    return static_cast<int>(v);
  }

  int NonNegativeInt(const std::string& key) const {
    const long long v = Integer(key);
    if (v < 0 || v > std::numeric_limits<int>::max()) {
      BadValue(key, Raw(key), "a non-negative integer");
    }
    return static_cast<int>(v);
  }

  std::uint64_t Seed(const std::string& key) const {
    const std::string& v = Raw(key);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      BadValue(key, v, "an unsigned 64-bit integer");
    }
    return out;
  }

  std::vector<int> IntList(const std::string& key) const {
    const std::string& v = Raw(key);
    std::vector<int> out;
    if (v == "none" || v.empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string_view t = Trim(item);
      int x = 0;
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
      if (ec != std::errc() || ptr != t.data() + t.size() || x < 1) {
        BadValue(key, v, "a comma-separated list of positive integers");
      }
      out.push_back(x);
    }
    return out;
  }

 private:
  const ConfigMap& values_;
};

TrainConfig ReadTrainConfig(const Reader& r, const std::string& prefix) {
  TrainConfig c;
  c.epochs = r.PositiveInt(prefix + ".epochs");
  c.learning_rate = r.Real(prefix + ".lr");
  c.batch_size = r.PositiveInt(prefix + ".batch_size");
  return c;
}

}  // namespace

const ConfigMap& DefaultConfigMap() {
  static const ConfigMap* const kDefaults = new ConfigMap{
      {"dataset.path", ""},
      {"dataset.format", "binary_f32"},
      {"synthetic.n_samples", "2000"},
      {"synthetic.n_features", "20"},
      {"synthetic.n_classes", "5"},
      {"synthetic.separation", "3"},
      {"split.train_fraction", "0.8"},
      {"split.target_shadow_fraction", "0.5"},
      {"split.retain_fraction", "0.8"},
      {"split.forget_mode", "random_rows"},
      {"split.forget_class", "0"},
      {"target.hidden", "128"},
      {"target.epochs", "100"},
      {"target.lr", "0.01"},
      {"target.batch_size", "64"},
      {"target.validation_fraction", "0.1"},
      {"shadow.count", "5"},
      {"attack.epochs", "50"},
      {"attack.lr", "0.01"},
      {"attack.batch_size", "32"},
      {"attack.seed", ""},
      {"unlearn.method", "neggrad"},
      {"unlearn.epochs", "10"},
      {"unlearn.lr", ""},
      {"unlearn.batch_size", ""},
      {"scrub.alpha", "0.5"},
      {"scrub.gamma", "1.0"},
      {"sftc.resample", "per_epoch"},
      {"output.dir", ""},
      {"seed", "0"},
  };
  return *kDefaults;
}

bool IsConfigKey(std::string_view key) {
  return DefaultConfigMap().count(std::string(key)) > 0;
}

ConfigMap ParseConfigText(std::string_view text) {
  ConfigMap out;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_number;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(line_number) +
                                          ": expected key=value");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string value(Trim(line.substr(eq + 1)));
    if (!IsConfigKey(key)) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(line_number) +
                                          ": unknown key '" + key + "'");
    }
    out[key] = value;
    if (end == text.size()) break;
  }
  return out;
}

ConfigMap LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseConfigText(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

ConfigMap MergeConfig(const ConfigMap& base, const ConfigMap& overrides) {
  ConfigMap out = base;
  for (const auto& [key, value] : overrides) {
    if (!IsConfigKey(key)) {
      throw Error(ErrorCode::kConfig, "unknown key '" + key + "'");
    }
    out[key] = value;
  }
  return out;
}

ExperimentConfig BuildExperimentConfig(const ConfigMap& values) {
  for (const auto& [key, value] : values) {
    if (!IsConfigKey(key)) {
      throw Error(ErrorCode::kConfig, "unknown key '" + key + "'");
    }
  }
  const Reader r(values);
  ExperimentConfig c;
  c.source = values;
  c.seed = r.Seed("seed");

  c.data.path = r.Raw("dataset.path");
  const auto format = ParseTabularFormat(r.Raw("dataset.format"));
  if (!format) {
    BadValue("dataset.format", r.Raw("dataset.format"),
             "csv_labeled or binary_f32");
  }
  c.data.format = *format;
  c.data.synthetic.n_samples = r.PositiveInt("synthetic.n_samples");
  c.data.synthetic.n_features = r.PositiveInt("synthetic.n_features");
  c.data.synthetic.n_classes = r.PositiveInt("synthetic.n_classes");
  c.data.synthetic.class_separation = r.Real("synthetic.separation");
  c.data.synthetic.seed = c.seed;
  if (c.data.path.empty()) c.data.synthetic.Validate();

  c.split.train_fraction = r.Real("split.train_fraction");
  c.split.target_shadow_fraction = r.Real("split.target_shadow_fraction");
  c.split.retain_fraction = r.Real("split.retain_fraction");
  const std::string& mode = r.Raw("split.forget_mode");
  if (mode == "random_rows") {
    c.split.forget_mode = ForgetMode::kRandomRows;
  } else if (mode == "single_class") {
    c.split.forget_mode = ForgetMode::kSingleClass;
  } else {
    BadValue("split.forget_mode", mode, "random_rows or single_class");
  }
  c.split.forget_class = r.NonNegativeInt("split.forget_class");
  try {
    c.split.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }

  c.hidden_units = r.IntList("target.hidden");
  c.target = ReadTrainConfig(r, "target");
  c.target.validation_fraction = r.Real("target.validation_fraction");
  c.shadow_count = r.PositiveInt("shadow.count");
  c.attack = ReadTrainConfig(r, "attack");
  c.attack.validation_fraction = 0.0;
  if (!r.Raw("attack.seed").empty()) c.attack_seed = r.Seed("attack.seed");
  try {
    c.target.Validate();
    c.attack.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }

  const double unlearn_lr = r.Raw("unlearn.lr").empty()
                                ? c.target.learning_rate
                                : r.Real("unlearn.lr");
  const std::string& method = r.Raw("unlearn.method");
  if (method == "neggrad") {
    c.method = NegGradParams{unlearn_lr};
  } else if (method == "scrub") {
    c.method = ScrubParams{unlearn_lr, r.Real("scrub.alpha"),
                           r.Real("scrub.gamma")};
  } else if (method == "sftc") {
    const std::string& resample = r.Raw("sftc.resample");
    SftcParams p{unlearn_lr, ConfusionResample::kPerEpoch};
    if (resample == "once") {
      p.resample = ConfusionResample::kOnce;
    } else if (resample != "per_epoch") {
      BadValue("sftc.resample", resample, "per_epoch or once");
    }
    c.method = p;
  } else {
    BadValue("unlearn.method", method, "neggrad, scrub or sftc");
  }
  ValidateMethod(c.method);
  c.unlearn_epochs = r.NonNegativeInt("unlearn.epochs");
  c.unlearn_batch_size = r.Raw("unlearn.batch_size").empty()
                             ? c.target.batch_size
                             : r.PositiveInt("unlearn.batch_size");
  c.output_dir = r.Raw("output.dir");
  return c;
}

std::string FormatConfig(const ConfigMap& values) {
  std::string out;
  for (const auto& [key, value] : values) {
    out += key + "=" + value + "\n";
  }
  return out;
}

}  // namespace unlearn_audit
