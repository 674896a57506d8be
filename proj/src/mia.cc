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

#include "unlearn_audit/mia.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <string>

#include "unlearn_audit/error.h"
#include "unlearn_audit/random.h"

namespace unlearn_audit {
namespace {

std::vector<std::size_t> Positions(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

std::vector<AttackFeature> Subsample(std::span<const AttackFeature> features,
                                     std::size_t count, Rng& rng) {
  std::vector<AttackFeature> out;
  out.reserve(count);
  for (std::size_t i :
       SampleWithoutReplacement(Positions(features.size()), count, rng)) {
    out.push_back(features[i]);
  }
  return out;
}

}  // namespace

std::vector<AttackFeature> ExtractAttackFeatures(const MlpModel& model,
                                                 const RowSet& rows) {
  if (rows.empty()) return {};
  const Batch batch = rows.Materialize();
  const Matrix posteriors = Forward(model, batch.features);
  const int k = std::min(model.num_classes(), kAttackTopK);
  std::vector<AttackFeature> out(batch.labels.size());
  std::vector<double> sorted(static_cast<std::size_t>(posteriors.cols()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    AttackFeature& f = out[i];
    for (Eigen::Index c = 0; c < posteriors.cols(); ++c) {
      sorted[static_cast<std::size_t>(c)] = posteriors(row, c);
    }
    std::partial_sort(sorted.begin(), sorted.begin() + k, sorted.end(),
                      std::greater<>());
    std::copy(sorted.begin(), sorted.begin() + k, f.sorted_posteriors.begin());
    const int label = batch.labels[i];
    // Floor at the smallest normal double so a saturated softmax still gives
    // a finite loss.
    const double p_true =
        std::max(posteriors(row, label), std::numeric_limits<double>::min());
    f.sample_loss = -std::log(p_true);
    f.correct = ArgMax(posteriors.row(row).transpose()) == label ? 1 : 0;
    f.true_class = label;
  }
  return out;
}

Matrix EncodeAttackFeatures(std::span<const AttackFeature> features,
                            int num_classes) {
  Matrix out(static_cast<Eigen::Index>(features.size()), kAttackInputDim);
  const double class_scale =
      num_classes > 1 ? 1.0 / static_cast<double>(num_classes - 1) : 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const AttackFeature& f = features[i];
    for (int j = 0; j < kAttackTopK; ++j) {
      out(row, j) = f.sorted_posteriors[static_cast<std::size_t>(j)];
    }
    out(row, kAttackTopK) = std::log1p(f.sample_loss);
    out(row, kAttackTopK + 1) = static_cast<double>(f.correct);
    out(row, kAttackTopK + 2) = static_cast<double>(f.true_class) * class_scale;
  }
  return out;
}

ShadowEnsemble TrainShadows(std::span<const std::size_t> shadow_pool,
                            const Dataset& dataset,
                            std::span<const int> layer_dims,
                            const TrainConfig& config, int k,
                            std::uint64_t seed) {
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "shadow count must be >= 1");
  }
  const std::size_t fold =
      shadow_pool.size() / static_cast<std::size_t>(std::max(k, 2));
  if (fold == 0) {
    throw Error(ErrorCode::kSizing,
                "shadow pool of " + std::to_string(shadow_pool.size()) +
                    " rows is too small for " + std::to_string(k) +
                    " shadows with disjoint non-member holdouts");
  }
  Rng rng(seed);
  std::vector<std::size_t> pool(shadow_pool.begin(), shadow_pool.end());
  std::shuffle(pool.begin(), pool.end(), rng);

  TrainConfig shadow_config = config;
  shadow_config.validation_fraction = 0.0;

  ShadowEnsemble ensemble;
  for (int i = 0; i < k; ++i) {
    const std::size_t begin = static_cast<std::size_t>(i) * fold;
    ShadowModel shadow;
    shadow.members.assign(pool.begin() + static_cast<std::ptrdiff_t>(begin),
                          pool.begin() +
                              static_cast<std::ptrdiff_t>(begin + fold));
    std::vector<std::size_t> outside;
    outside.reserve(pool.size() - fold);
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (j < begin || j >= begin + fold) outside.push_back(pool[j]);
    }
    shadow.nonmembers = SampleWithoutReplacement(outside, fold, rng);

    const std::uint64_t shadow_seed = DeriveSeed(seed, 100 + i);
    shadow.model = InitMlp(layer_dims, shadow_seed);
    shadow_config.seed = DeriveSeed(seed, 200 + i);
    const RowSet members(dataset, shadow.members);
    const RowSet nonmembers(dataset, shadow.nonmembers);
    Train(shadow.model, members, shadow_config);
    shadow.member_acc = EvaluateAccuracy(shadow.model, members);
    shadow.nonmember_acc = EvaluateAccuracy(shadow.model, nonmembers);
    ensemble.shadows.push_back(std::move(shadow));
  }
  return ensemble;
}

AttackDataset BuildAttackDataset(const ShadowEnsemble& ensemble,
                                 const Dataset& dataset) {
  AttackDataset out;
  out.num_classes = dataset.num_classes;
  for (const ShadowModel& shadow : ensemble.shadows) {
    if (shadow.members.size() != shadow.nonmembers.size()) {
      throw Error(ErrorCode::kBalance,
                  "shadow member and non-member sets differ in size");
    }
    for (const auto& [rows, label] :
         {std::pair{&shadow.members, 1}, std::pair{&shadow.nonmembers, 0}}) {
      const std::vector<AttackFeature> features =
          ExtractAttackFeatures(shadow.model, RowSet(dataset, *rows));
      out.features.insert(out.features.end(), features.begin(),
                          features.end());
      out.membership.insert(out.membership.end(), features.size(), label);
    }
  }
  return out;
}

std::vector<double> AttackModel::MembershipProbability(
    std::span<const AttackFeature> features) const {
  if (features.empty()) return {};
  const Matrix posteriors =
      Forward(network, EncodeAttackFeatures(features, num_classes));
  std::vector<double> out(features.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = posteriors(static_cast<Eigen::Index>(i), 1);
  }
  return out;
}

std::vector<int> AttackModel::PredictMembership(
    std::span<const AttackFeature> features) const {
  const std::vector<double> p = MembershipProbability(features);
  std::vector<int> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] > 0.5 ? 1 : 0;
  return out;
}

AttackModel TrainAttackModel(const AttackDataset& attack_data,
                             const TrainConfig& config) {
  if (attack_data.features.size() != attack_data.membership.size()) {
    throw Error(ErrorCode::kShape, "attack features and labels differ");
  }
  const auto members = static_cast<std::size_t>(
      std::count(attack_data.membership.begin(), attack_data.membership.end(),
                 1));
  if (members == 0 || members == attack_data.membership.size()) {
    throw Error(ErrorCode::kBalance,
                "attack dataset needs both members and non-members");
  }
  Dataset encoded;
  encoded.name = "attack";
  encoded.features =
      EncodeAttackFeatures(attack_data.features, attack_data.num_classes);
  encoded.labels = attack_data.membership;
  encoded.num_classes = 2;

  AttackModel attack;
  attack.num_classes = attack_data.num_classes;
  const std::vector<int> dims = {kAttackInputDim, kAttackHiddenUnits, 2};
  attack.network = InitMlp(dims, DeriveSeed(config.seed, 7));
  TrainConfig fit = config;
  fit.validation_fraction = 0.0;
  Train(attack.network, RowSet::All(encoded), fit);
  return attack;
}

double BalancedAccuracy(std::span<const int> member_predictions,
                        std::span<const int> nonmember_predictions) {
  if (member_predictions.empty() || nonmember_predictions.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "balanced accuracy needs members and non-members");
  }
  const double tp = static_cast<double>(std::count(
      member_predictions.begin(), member_predictions.end(), 1));
  const double tn = static_cast<double>(std::count(
      nonmember_predictions.begin(), nonmember_predictions.end(), 0));
  return 0.5 * (tp / static_cast<double>(member_predictions.size()) +
                tn / static_cast<double>(nonmember_predictions.size()));
}

MiaResult EvaluateMiaFeatures(const AttackModel& attack,
                              std::span<const AttackFeature> members,
                              std::span<const AttackFeature> nonmembers,
                              std::uint64_t seed) {
  if (members.empty() || nonmembers.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "MIA evaluation needs nonempty member and non-member sets");
  }
  Rng rng(seed);
  const std::size_t count = std::min(members.size(), nonmembers.size());
  const std::vector<AttackFeature> m = Subsample(members, count, rng);
  const std::vector<AttackFeature> n = Subsample(nonmembers, count, rng);
  const std::vector<int> member_pred = attack.PredictMembership(m);
  const std::vector<int> nonmember_pred = attack.PredictMembership(n);

  MiaResult result;
  result.member_count = count;
  result.nonmember_count = count;
  result.true_positive_rate =
      static_cast<double>(
          std::count(member_pred.begin(), member_pred.end(), 1)) /
      static_cast<double>(count);
  result.true_negative_rate =
      static_cast<double>(
          std::count(nonmember_pred.begin(), nonmember_pred.end(), 0)) /
      static_cast<double>(count);
  result.balanced_accuracy = BalancedAccuracy(member_pred, nonmember_pred);
  return result;
}

MiaResult EvaluateMia(const AttackModel& attack, const MlpModel& target,
                      const RowSet& members, const RowSet& nonmembers,
                      std::uint64_t seed) {
  if (members.empty() || nonmembers.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "MIA evaluation needs nonempty member and non-member sets");
  }
  return EvaluateMiaFeatures(attack, ExtractAttackFeatures(target, members),
                             ExtractAttackFeatures(target, nonmembers), seed);
}

double AdversarySuccess(const AttackModel& attack, const MlpModel& unlearned,
                        const RowSet& forget, const RowSet& holdout,
                        std::uint64_t seed) {
  return EvaluateMia(attack, unlearned, forget, holdout, seed)
      .balanced_accuracy;
}

AttackReport AuditModel(const AttackModel& attack, const MlpModel& target,
                        const RowSet& forget, const RowSet& retain,
                        const RowSet& holdout, std::uint64_t seed) {
  const std::vector<AttackFeature> forget_f =
      ExtractAttackFeatures(target, forget);
  const std::vector<AttackFeature> retain_f =
      ExtractAttackFeatures(target, retain);
  const std::vector<AttackFeature> holdout_f =
      ExtractAttackFeatures(target, holdout);

  AttackReport report;
  const MiaResult f =
      EvaluateMiaFeatures(attack, forget_f, holdout_f, DeriveSeed(seed, 1));
  const MiaResult r =
      EvaluateMiaFeatures(attack, retain_f, holdout_f, DeriveSeed(seed, 2));
  const MiaResult s =
      EvaluateMiaFeatures(attack, forget_f, holdout_f, DeriveSeed(seed, 3));
  report.mia_forget_acc = f.balanced_accuracy;
  report.mia_retain_acc = r.balanced_accuracy;
  report.adversary_success = s.balanced_accuracy;
  report.forget_pairs = f.member_count;
  report.retain_pairs = r.member_count;
  report.success_pairs = s.member_count;
  return report;
}

}  // namespace unlearn_audit
