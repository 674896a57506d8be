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

#ifndef UNLEARN_AUDIT_MIA_H_
#define UNLEARN_AUDIT_MIA_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "unlearn_audit/dataset.h"
#include "unlearn_audit/mlp.h"
#include "unlearn_audit/train.h"

namespace unlearn_audit {

inline constexpr int kAttackTopK = 10;
// Top-k posteriors, log1p(loss), correctness flag, scaled class id.
inline constexpr int kAttackInputDim = kAttackTopK + 3;

// What the adversary observes about one queried sample.
struct AttackFeature {
  // Descending, zero-padded beyond min(C, kAttackTopK).
  std::array<double, kAttackTopK> sorted_posteriors{};
  double sample_loss = 0.0;
  int correct = 0;
  int true_class = 0;
};

// Queries `model` on every row of `rows`.
std::vector<AttackFeature> ExtractAttackFeatures(const MlpModel& model,
                                                 const RowSet& rows);

// Dense network input for a feature. The class id is scaled to [0, 1].
Matrix EncodeAttackFeatures(std::span<const AttackFeature> features,
                            int num_classes);

// Membership-labelled attack records (1 = member).
struct AttackDataset {
  std::vector<AttackFeature> features;
  std::vector<int> membership;
  int num_classes = 0;
};

struct ShadowModel {
  MlpModel model;
  std::vector<std::size_t> members;
  std::vector<std::size_t> nonmembers;
  double member_acc = 0.0;
  double nonmember_acc = 0.0;
};

struct ShadowEnsemble {
  std::vector<ShadowModel> shadows;
};

// The pool is shuffled and cut into folds of floor(|pool| / max(k, 2)) rows.
// Shadow i trains on fold i with `layer_dims` and `config`; its
// non-members are an equal-size sample of pool rows outside fold i.
// Validation carving is disabled for shadows so every member is trained on.
ShadowEnsemble TrainShadows(std::span<const std::size_t> shadow_pool,
                            const Dataset& dataset,
                            std::span<const int> layer_dims,
                            const TrainConfig& config, int k,
                            std::uint64_t seed);

// Exactly balanced: each shadow contributes |members| ones and as many
// zeros, queried on that shadow.
AttackDataset BuildAttackDataset(const ShadowEnsemble& ensemble,
                                 const Dataset& dataset);

// The adversary: a binary MLP over encoded attack features.
struct AttackModel {
  MlpModel network;
  int num_classes = 0;

  // P(member) for each feature.
  std::vector<double> MembershipProbability(
      std::span<const AttackFeature> features) const;
  // 1 when P(member) > 0.5.
  std::vector<int> PredictMembership(
      std::span<const AttackFeature> features) const;
};

inline constexpr int kAttackHiddenUnits = 64;

// Requires both membership labels to be present. Validation carving is
// ignored; the whole attack dataset is used for fitting.
AttackModel TrainAttackModel(const AttackDataset& attack_data,
                             const TrainConfig& config);

struct MiaResult {
  double balanced_accuracy = 0.0;
  double true_positive_rate = 0.0;
  double true_negative_rate = 0.0;
  std::size_t member_count = 0;
  std::size_t nonmember_count = 0;
};

// 0.5 * (mean(member_predictions) + mean(1 - nonmember_predictions)).
double BalancedAccuracy(std::span<const int> member_predictions,
                        std::span<const int> nonmember_predictions);

// Scores pre-extracted features. The larger side is subsampled (seeded) to
// the size of the smaller one.
MiaResult EvaluateMiaFeatures(const AttackModel& attack,
                              std::span<const AttackFeature> members,
                              std::span<const AttackFeature> nonmembers,
                              std::uint64_t seed);

// Queries the current `target` on both sets, then EvaluateMiaFeatures.
MiaResult EvaluateMia(const AttackModel& attack, const MlpModel& target,
                      const RowSet& members, const RowSet& nonmembers,
                      std::uint64_t seed);

// S(A, f') = 0.5 * [P(A = 1 | x in forget) + P(A = 0 | x not in train)],
// estimated on equal-size samples of the forget and holdout rows.
double AdversarySuccess(const AttackModel& attack, const MlpModel& unlearned,
                        const RowSet& forget, const RowSet& holdout,
                        std::uint64_t seed);

struct AttackReport {
  double mia_forget_acc = 0.0;
  double mia_retain_acc = 0.0;
  double adversary_success = 0.0;
  // Members scored per side; non-members always match.
  std::size_t forget_pairs = 0;
  std::size_t retain_pairs = 0;
  std::size_t success_pairs = 0;
};

// Forget-vs-holdout and retain-vs-holdout MIA accuracy plus S(A, f').
AttackReport AuditModel(const AttackModel& attack, const MlpModel& target,
                        const RowSet& forget, const RowSet& retain,
                        const RowSet& holdout, std::uint64_t seed);

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_MIA_H_
