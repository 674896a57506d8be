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

#ifndef UNLEARN_AUDIT_TESTS_FIXTURES_H_
#define UNLEARN_AUDIT_TESTS_FIXTURES_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <system_error>
#include <unistd.h>

#include "unlearn_audit/config.h"
#include "unlearn_audit/dataset.h"
#include "unlearn_audit/random.h"
#include "unlearn_audit/tabular_io.h"

namespace unlearn_audit::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("unlearn_audit_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void WriteText(const std::filesystem::path& path,
                      const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

// Binary-feature records in the style of a shopping-basket dataset: each
// class has a random 0/1 prototype and every bit is flipped with
// probability `flip`. Labels cycle through the classes in shuffled order.
inline Dataset MakePurchaseStyle(int n, int d, int num_classes, double flip,
                                 std::uint64_t seed) {
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution flipper(flip);
  Matrix prototypes(num_classes, d);
  for (int c = 0; c < num_classes; ++c) {
    for (int j = 0; j < d; ++j) prototypes(c, j) = coin(rng) ? 1.0 : 0.0;
  }
  Dataset data;
  data.name = "purchase_style";
  data.num_classes = num_classes;
  data.labels.resize(n);
  for (int i = 0; i < n; ++i) data.labels[i] = i % num_classes;
  std::shuffle(data.labels.begin(), data.labels.end(), rng);
  data.features.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      const double bit = prototypes(data.labels[i], j);
      data.features(i, j) = flipper(rng) ? 1.0 - bit : bit;
    }
  }
  return data;
}

// 50-class Gaussian blobs with a wide MLP trained far past convergence:
// memorizes the target split while generalizing poorly.
inline ConfigMap OverfitFixtureConfig() {
  return ParseConfigText(R"(
synthetic.n_samples = 2000
synthetic.n_features = 50
synthetic.n_classes = 50
synthetic.separation = 3
target.hidden = 128
target.epochs = 150
target.lr = 0.05
target.batch_size = 32
shadow.count = 5
attack.epochs = 80
unlearn.method = neggrad
unlearn.epochs = 50
unlearn.lr = 0.03
unlearn.batch_size = 16
)");
}

inline constexpr int kPurchaseRows = 2000;
inline constexpr int kPurchaseFeatures = 100;
inline constexpr int kPurchaseClasses = 20;
inline constexpr double kPurchaseFlip = 0.4;

// Writes the purchase-style dataset to `path` as binary_f32 and returns an
// SFTC experiment over it.
inline ConfigMap PurchaseFixtureConfig(const std::filesystem::path& path,
                                       std::uint64_t data_seed = 1) {
  SaveTabular(MakePurchaseStyle(kPurchaseRows, kPurchaseFeatures,
                                kPurchaseClasses, kPurchaseFlip, data_seed),
              path, TabularFormat::kBinaryF32);
  ConfigMap config = ParseConfigText(R"(
dataset.format = binary_f32
target.hidden = 128
target.epochs = 60
target.lr = 0.05
target.batch_size = 32
shadow.count = 5
attack.epochs = 80
unlearn.method = sftc
unlearn.epochs = 20
unlearn.lr = 0.02
unlearn.batch_size = 32
)");
  config["dataset.path"] = path.string();
  return config;
}

}  // namespace unlearn_audit::testing

#endif  // UNLEARN_AUDIT_TESTS_FIXTURES_H_
