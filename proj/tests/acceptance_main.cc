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

// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.h"
#include "oracles.h"
#include "unlearn_audit/config.h"
#include "unlearn_audit/harness.h"
#include "unlearn_audit/mia.h"
#include "unlearn_audit/mlp.h"
#include "unlearn_audit/random.h"
#include "unlearn_audit/splits.h"
#include "unlearn_audit/synthetic.h"
#include "unlearn_audit/train.h"
#include "unlearn_audit/unlearn.h"

namespace unlearn_audit {
namespace {

using testing::TempDir;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0,
                double d = 0, double e = 0, double f = 0) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d, e, f);
  return buf;
}

// Criterion 1.
Outcome GradientCheck() {
  struct Case {
    std::vector<int> dims;
    int batch;
  };
  // One and three hidden layers at the widths of the reference
  // architectures; input widths reduced to keep the naive oracle fast.
  const std::vector<Case> cases = {{{600, 128, 100}, 16},
                                   {{64, 512, 256, 128, 10}, 8}};
  int checked = 0;
  int failed = 0;
  int skipped_kinks = 0;
  double worst = 0.0;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& c = cases[ci];
    const MlpModel model = InitMlp(c.dims, 100 + ci);
    Rng rng(200 + ci);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> label(0, c.dims.back() - 1);
    Matrix x(c.batch, c.dims.front());
    for (int i = 0; i < x.rows(); ++i) {
      for (int j = 0; j < x.cols(); ++j) x(i, j) = normal(rng);
    }
    std::vector<int> y(c.batch);
    for (int& v : y) v = label(rng);
    const GradientSet grads = ComputeLossAndGradient(model, x, y).gradients;
    const auto result = testing::FiniteDifferenceCheck(model, grads, x, y,
                                                       150, 1e-4, 300 + ci);
    checked += result.checked;
    skipped_kinks += result.skipped_kinks;
    for (double err : result.relative_errors) {
      worst = std::max(worst, err);
      if (err > 1e-4) ++failed;
    }
  }
  return {checked >= 100 && failed == 0,
          Fmt("%.0f coordinates, worst relative error %.2e, %.0f over "
              "tolerance, %.0f ReLU-kink draws redrawn",
              checked, worst, failed, skipped_kinks)};
}

// Criterion 2.
Outcome SplitProtocol() {
  Dataset data = GenerateSynthetic({100, 4, 4, 3.0, 5});
  int bad = 0;
  std::string first_problem;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SplitPlan plan;
    plan.seed = seed;
    const SplitBundle s = MakeSplits(data, plan);
    const std::string problem = testing::CheckPartition(s, data.size());
    const bool sizes = s.test.size() == 20 && s.target_train.size() == 40 &&
                       s.shadow_pool.size() == 40 && s.retain.size() == 32 &&
                       s.forget.size() == 8;
    if (!sizes || !problem.empty()) {
      if (bad++ == 0) first_problem = sizes ? problem : "size mismatch";
    }
  }
  return {bad == 0, bad == 0 ? "20/40/40/32/8 and partitions hold on 100 seeds"
                             : Fmt("%.0f seeds failed: ", bad) + first_problem};
}

ExperimentConfig Build(const ConfigMap& map) {
  return BuildExperimentConfig(map);
}

// Criterion 3.
Outcome AttackNull() {
  constexpr std::size_t kPerSide = 200;
  ExperimentConfig config = Build(testing::OverfitFixtureConfig());
  const ExperimentArtifacts a = RunPipeline(config, PipelineStage::kTrainAttack);
  std::vector<std::size_t> members(a.splits.target_train.begin(),
                                   a.splits.target_train.begin() + kPerSide);
  std::vector<std::size_t> nonmembers(a.holdout.begin(),
                                      a.holdout.begin() + kPerSide);
  const RowSet member_rows(a.dataset, members);
  const RowSet nonmember_rows(a.dataset, nonmembers);

  // (a) Real attack against a never-trained target.
  std::vector<int> dims = {a.dataset.feature_dim()};
  dims.insert(dims.end(), config.hidden_units.begin(),
              config.hidden_units.end());
  dims.push_back(a.dataset.num_classes);
  const MlpModel untrained = InitMlp(dims, 4242);
  const double untrained_acc =
      EvaluateMia(*a.attack, untrained, member_rows, nonmember_rows, 1)
          .balanced_accuracy;

  // (b) Permutation null: membership labels of the shadow records are
  // shuffled, the attack is fitted on one half and scored on the other.
  ShadowEnsemble shadows =
      TrainShadows(a.splits.shadow_pool, a.dataset, dims, config.target,
                   config.shadow_count, DeriveSeed(config.seed, 3));
  const AttackDataset records = BuildAttackDataset(shadows, a.dataset);
  Rng rng(77);
  std::vector<int> permuted_labels = records.membership;
  std::shuffle(permuted_labels.begin(), permuted_labels.end(), rng);
  const std::vector<std::size_t> order =
      ShuffledIndices(records.features.size(), rng);
  AttackDataset fit_half;
  fit_half.num_classes = records.num_classes;
  std::vector<AttackFeature> held_in;
  std::vector<AttackFeature> held_out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t r = order[i];
    if (i % 2 == 0) {
      fit_half.features.push_back(records.features[r]);
      fit_half.membership.push_back(permuted_labels[r]);
    } else if (permuted_labels[r] == 1 && held_in.size() < kPerSide) {
      held_in.push_back(records.features[r]);
    } else if (permuted_labels[r] == 0 && held_out.size() < kPerSide) {
      held_out.push_back(records.features[r]);
    }
  }
  TrainConfig attack_config = config.attack;
  attack_config.validation_fraction = 0.0;
  const AttackModel permuted = TrainAttackModel(fit_half, attack_config);
  const double permuted_acc =
      EvaluateMiaFeatures(permuted, held_in, held_out, 2).balanced_accuracy;

  // (c) Shadows and target fitted to randomly permuted class labels with a
  // single epoch, so the labels stay unlearned (train accuracy near chance).
  Dataset scrambled = a.dataset;
  std::shuffle(scrambled.labels.begin(), scrambled.labels.end(), rng);
  TrainConfig short_config = config.target;
  short_config.epochs = 1;
  short_config.validation_fraction = 0.0;
  ShadowEnsemble random_shadows =
      TrainShadows(a.splits.shadow_pool, scrambled, dims, short_config,
                   config.shadow_count, 99);
  const AttackModel random_attack = TrainAttackModel(
      BuildAttackDataset(random_shadows, scrambled), attack_config);
  MlpModel random_target = InitMlp(dims, 98);
  short_config.seed = 97;
  const RowSet scrambled_train(scrambled, a.splits.target_train);
  Train(random_target, scrambled_train, short_config);
  const double chance = 1.0 / scrambled.num_classes;
  const double random_train_acc = EvaluateAccuracy(random_target, scrambled_train);
  const double random_acc =
      EvaluateMia(random_attack, random_target, RowSet(scrambled, members),
                  RowSet(scrambled, nonmembers), 3)
          .balanced_accuracy;
  const bool unlearned = random_train_acc <= 2.0 * chance;

  const auto near_half = [](double v) { return std::abs(v - 0.5) <= 0.05; };
  return {near_half(untrained_acc) && near_half(permuted_acc) &&
              near_half(random_acc) && unlearned,
          Fmt("untrained target %.3f, permuted membership %.3f, "
              "random-label shadows %.3f with target train acc %.3f (chance "
              "%.3f); 200 per side",
              untrained_acc, permuted_acc, random_acc, random_train_acc,
              chance)};
}

// Shared by criteria 4 to 7.
struct OverfitRun {
  ExperimentArtifacts artifacts;
  bool ok = false;
};

OverfitRun& Overfit() {
  static OverfitRun run = [] {
    OverfitRun r;
    r.artifacts = RunPipeline(Build(testing::OverfitFixtureConfig()));
    r.ok = true;
    return r;
  }();
  return run;
}

// Criterion 4.
Outcome AttackSignal() {
  const ExperimentArtifacts& a = Overfit().artifacts;
  const EpochMetrics& base = a.report.baseline.metrics;
  const RowSet members(a.dataset, a.splits.target_train);
  const RowSet nonmembers(a.dataset, a.holdout);
  const double attack_acc =
      EvaluateMia(*a.attack, *a.original_target, members, nonmembers, 5)
          .balanced_accuracy;
  const double oracle_acc = testing::BestLossThresholdAccuracy(
      *a.original_target, a.dataset, a.splits.target_train, a.holdout);
  const bool fixture = base.train_acc >= 0.99 && base.test_acc <= 0.6;
  return {fixture && attack_acc >= 0.6 && attack_acc >= oracle_acc - 0.05,
          Fmt("train %.3f test %.3f; attack %.3f vs loss-threshold oracle "
              "%.3f",
              base.train_acc, base.test_acc, attack_acc, oracle_acc)};
}

// Criterion 5.
Outcome NegGradTrend() {
  const ExperimentReport& r = Overfit().artifacts.report;
  const TraceEntry& last = r.trace.entries.back();
  const double before = r.baseline.metrics.test_acc;
  return {r.trace.epochs_run <= 50 && last.metrics.forget_acc < 0.05 &&
              last.metrics.test_acc < before,
          Fmt("%.0f epochs: forget acc %.3f, test acc %.3f -> %.3f",
              r.trace.epochs_run, last.metrics.forget_acc, before,
              last.metrics.test_acc)};
}

// Criterion 6.
Outcome NegGradConvergence() {
  const ExperimentReport& r = Overfit().artifacts.report;
  const AttackReport& last = r.trace.entries.back().attack;
  const auto near_half = [](double v) { return std::abs(v - 0.5) <= 0.07; };
  return {near_half(last.mia_forget_acc) && near_half(last.adversary_success),
          Fmt("terminal MIA forget %.3f, adversary success %.3f",
              last.mia_forget_acc, last.adversary_success)};
}

// Criterion 7.
Outcome NegGradDecline() {
  const ExperimentReport& r = Overfit().artifacts.report;
  std::vector<double> series;
  for (const TraceEntry& e : r.trace.entries) {
    series.push_back(e.attack.mia_forget_acc);
  }
  const double slope = testing::LeastSquaresSlope(series);
  return {slope < 0.0, Fmt("least-squares slope %.5f per epoch (%.3f -> %.3f)",
                           slope, series.front(), series.back())};
}

// Criterion 8.
Outcome SftcDissociation() {
  TempDir dir;
  const ExperimentArtifacts a = RunPipeline(
      Build(testing::PurchaseFixtureConfig(dir / "purchase.bin")));
  const ExperimentReport& r = a.report;
  const TraceEntry& last = r.trace.entries.back();
  const double f0 = r.baseline.metrics.forget_acc;
  const double m0 = r.baseline.attack.mia_forget_acc;
  const double r0 = r.baseline.attack.mia_retain_acc;
  const bool pass = last.metrics.forget_acc >= 0.8 * f0 &&
                    m0 - last.attack.mia_forget_acc >= 0.03 &&
                    std::abs(last.attack.mia_retain_acc - r0) <= 0.05;
  return {pass,
          Fmt("forget acc %.3f -> %.3f, MIA forget %.3f -> %.3f, MIA retain "
              "%.3f -> %.3f",
              f0, last.metrics.forget_acc, m0, last.attack.mia_forget_acc, r0,
              last.attack.mia_retain_acc)};
}

// Criterion 9.
Outcome ScrubBalance() {
  const auto f = testing::MakeScrubFixture();
  const Matrix forget_x = f.forget.Materialize().features;
  const Matrix teacher_p = Forward(f.teacher, forget_x);
  MlpModel student = f.teacher;
  const double kl_start = MeanKlDivergence(teacher_p, Forward(student, forget_x));
  const double retain0 = EvaluateAccuracy(student, f.retain);
  const double test0 = EvaluateAccuracy(student, f.test);
  Rng rng(31);
  double kl_first = 0.0;
  for (int epoch = 1; epoch <= testing::kScrubEpochs; ++epoch) {
    ScrubEpoch(student, f.teacher, f.retain, f.forget, f.params, 16, rng);
    if (epoch == 1) {
      kl_first = MeanKlDivergence(teacher_p, Forward(student, forget_x));
    }
  }
  const double kl_end = MeanKlDivergence(teacher_p, Forward(student, forget_x));
  const double retain1 = EvaluateAccuracy(student, f.retain);
  const double test1 = EvaluateAccuracy(student, f.test);
  const bool pass = kl_end > kl_start && kl_end > kl_first &&
                    std::abs(retain1 - retain0) <= 0.05 &&
                    std::abs(test1 - test0) <= 0.05;
  return {pass, Fmt("forget KL %.4f -> %.4f (epoch 1 %.4f); retain acc "
                    "%.3f -> %.3f; test acc %.3f",
                    kl_start, kl_end, kl_first, retain0, retain1, test0) +
                    Fmt(" -> %.3f", test1)};
}

// Criterion 10.
Outcome SensitivityDirection() {
  TempDir dir;
  const ExperimentConfig config =
      Build(testing::PurchaseFixtureConfig(dir / "purchase.bin"));
  const std::vector<double> rates = {0.0005, 0.005, 0.05};
  const SweepReport sweep = SensitivitySweep(config, rates);
  std::vector<double> terminal;
  for (const SweepEntry& e : sweep.entries) {
    if (!e.report || e.report->trace.entries.empty()) {
      return {false, "rate " + Fmt("%g", e.learning_rate) + " failed: " +
                         e.error};
    }
    terminal.push_back(e.report->trace.entries.back().attack.mia_forget_acc);
  }
  bool pass = terminal.size() == rates.size();
  for (std::size_t i = 1; i < terminal.size(); ++i) {
    pass = pass && terminal[i] <= terminal[i - 1] + 0.02;
  }
  return {pass, Fmt("terminal MIA forget %.3f / %.3f / %.3f", terminal[0],
                    terminal[1], terminal[2])};
}

// Criterion 11.
Outcome Determinism() {
  TempDir dir;
  ConfigMap map = ParseConfigText(R"(
synthetic.n_samples = 1000
target.hidden = 64
target.epochs = 20
shadow.count = 3
attack.epochs = 20
unlearn.epochs = 5
)");
  const auto run = [&](const std::string& name, const std::string& seed) {
    ConfigMap m = map;
    m["seed"] = seed;
    m["output.dir"] = (dir / name).string();
    RunExperiment(Build(m));
    return testing::ReadFile(dir / name / "metrics.csv");
  };
  const std::string first = run("a", "42");
  const std::string second = run("b", "42");
  const std::string other = run("c", "43");
  return {!first.empty() && first == second && first != other,
          first == second ? "identical bytes for equal seeds; different seed "
                            "differs: " +
                                std::string(first != other ? "yes" : "no")
                          : "metrics.csv differs between equal-seed runs"};
}

// Criterion 12.
Outcome DegenerateEquivalence() {
  const Dataset data = GenerateSynthetic({300, 8, 3, 2.0, 4});
  const RowSet retain(data, [] {
    std::vector<std::size_t> rows(240);
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
  }());
  std::vector<std::size_t> tail(60);
  std::iota(tail.begin(), tail.end(), 240);
  const RowSet forget(data, tail);
  const RowSet empty(data, {});
  const std::vector<int> dims = {8, 16, 3};
  const MlpModel start = InitMlp(dims, 5);
  constexpr int kEpochs = 3;

  MlpModel tuned = start;
  Rng tune_rng(11);
  for (int e = 0; e < kEpochs; ++e) FineTuneEpoch(tuned, retain, 0.05, 16, tune_rng);

  MlpModel sftc = start;
  Rng sftc_rng(11);
  for (int e = 0; e < kEpochs; ++e) {
    SftcEpoch(sftc, retain, empty, {0.05, ConfusionResample::kPerEpoch}, 16,
              sftc_rng);
  }

  MlpModel scrub = start;
  Rng scrub_rng(11);
  for (int e = 0; e < kEpochs; ++e) {
    ScrubEpoch(scrub, start, retain, forget, {0.05, 0.0, 0.0}, 16, scrub_rng);
  }
  const bool sftc_eq = BitwiseEqual(tuned, sftc);
  const bool scrub_eq = BitwiseEqual(tuned, scrub);
  return {sftc_eq && scrub_eq && !BitwiseEqual(tuned, start),
          std::string("SFTC(empty forget) ") + (sftc_eq ? "bitwise equal" : "differs") +
              ", SCRUB(alpha=gamma=0) " + (scrub_eq ? "bitwise equal" : "differs")};
}

}  // namespace
}  // namespace unlearn_audit

int main() {
  using unlearn_audit::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>>
      criteria = {
          {"gradient correctness", unlearn_audit::GradientCheck},
          {"split protocol", unlearn_audit::SplitProtocol},
          {"attack null", unlearn_audit::AttackNull},
          {"attack signal", unlearn_audit::AttackSignal},
          {"neggrad forgetting trend", unlearn_audit::NegGradTrend},
          {"neggrad MIA convergence", unlearn_audit::NegGradConvergence},
          {"neggrad MIA decline", unlearn_audit::NegGradDecline},
          {"sftc dissociation", unlearn_audit::SftcDissociation},
          {"scrub balance", unlearn_audit::ScrubBalance},
          {"sensitivity direction", unlearn_audit::SensitivityDirection},
          {"determinism", unlearn_audit::Determinism},
          {"degenerate equivalence", unlearn_audit::DegenerateEquivalence},
      };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (!outcome.pass) ++failures;
    std::printf("criterion %2zu %s: %s (%s) [%.1fs]\n", i + 1,
                outcome.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
