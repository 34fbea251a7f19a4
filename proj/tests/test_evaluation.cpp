#include "doctest.h"

#include <cmath>

#include "edurec/dataset.hpp"
#include "edurec/evaluation.hpp"
#include "oracles.hpp"

using namespace edurec;

namespace {
using Labels = std::vector<std::string>;

void random_pair(std::uint64_t seed, Labels& truths, Labels& preds) {
  SplitMix64 rng(seed);
  const std::size_t k = 2 + rng.uniform_index(4);
  const std::size_t n = 1 + rng.uniform_index(40);
  truths.clear();
  preds.clear();
  for (std::size_t i = 0; i < n; ++i) {
    truths.push_back("k" + std::to_string(rng.uniform_index(k)));
    // bias towards agreement so matrices are not all noise
    preds.push_back(rng.bernoulli(0.5) ? truths.back() : "k" + std::to_string(rng.uniform_index(k)));
  }
}
}  // namespace

TEST_CASE("hand-tallied five-instance matrix") {
  const Labels truths{"A", "A", "B", "B", "B"};
  const Labels preds{"A", "B", "B", "B", "A"};
  const auto cm = build_confusion_matrix(truths, preds);
  CHECK(cm.classes() == Labels{"A", "B"});
  CHECK(cm.at(0, 0) == 1);
  CHECK(cm.at(0, 1) == 1);
  CHECK(cm.at(1, 0) == 1);
  CHECK(cm.at(1, 1) == 2);
  CHECK(std::abs(accuracy(cm) - 0.6) < 1e-12);
  const auto a = precision_recall_f(cm, 0);
  const auto b = precision_recall_f(cm, 1);
  CHECK(std::abs(a.precision - 0.5) < 1e-12);
  CHECK(std::abs(a.recall - 0.5) < 1e-12);
  CHECK(std::abs(a.f - 0.5) < 1e-12);
  CHECK(std::abs(b.precision - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(b.recall - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(b.f - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(macro_f_measure(cm) - 7.0 / 12.0) < 1e-12);
}

TEST_CASE("two-class accuracy equals (TP+TN)/(TP+TN+FP+FN)") {
  const Labels truths{"A", "A", "B", "B", "B"};
  const Labels preds{"A", "B", "B", "B", "A"};
  const auto cm = build_confusion_matrix(truths, preds);
  for (std::size_t i = 0; i < 2; ++i) {
    const double tp = cm.tp(i), tn = cm.tn(i), fp = cm.fp(i), fn = cm.fn(i);
    CHECK(accuracy(cm) == doctest::Approx((tp + tn) / (tp + tn + fp + fn)));
  }
}

TEST_CASE("metrics agree with a brute-force tally on random matrices") {
  Labels truths, preds;
  for (std::uint64_t s = 0; s < 20; ++s) {
    CAPTURE(s);
    random_pair(500 + s, truths, preds);
    const auto cm = build_confusion_matrix(truths, preds);
    const auto t = oracle::tally(truths, preds);
    REQUIRE(cm.classes() == t.classes);
    for (std::size_t i = 0; i < t.classes.size(); ++i) {
      for (std::size_t j = 0; j < t.classes.size(); ++j) CHECK(cm.at(i, j) == t.m[i][j]);
      const auto got = precision_recall_f(cm, i);
      const auto want = oracle::prf(truths, preds, t.classes[i]);
      CHECK(std::abs(got.precision - want.p) < 1e-12);
      CHECK(std::abs(got.recall - want.r) < 1e-12);
      CHECK(std::abs(got.f - want.f) < 1e-12);
      CHECK(cm.tp(i) + cm.fp(i) + cm.fn(i) + cm.tn(i) == truths.size());
    }
    CHECK(std::abs(accuracy(cm) - oracle::accuracy(truths, preds)) < 1e-12);
    CHECK(std::abs(macro_f_measure(cm) - oracle::macro_f(truths, preds)) < 1e-12);
  }
}

TEST_CASE("edge cases") {
  const Labels same{"A", "B", "A"};
  const auto perfect = build_confusion_matrix(same, same);
  CHECK(accuracy(perfect) == 1.0);
  CHECK(macro_f_measure(perfect) == 1.0);
  CHECK(f_measure(1.0, 1.0) == 1.0);
  CHECK(f_measure(0.0, 0.0) == 0.0);
  // C only ever predicted, never true: precision 0, recall 0 (no positives)
  const auto cm = build_confusion_matrix(Labels{"A", "A"}, Labels{"A", "C"});
  const auto c = precision_recall_f(cm, 1);
  CHECK(c.precision == 0.0);
  CHECK(c.recall == 0.0);
  CHECK(c.f == 0.0);
  CHECK(build_confusion_matrix(Labels{"Z"}, Labels{"Z"}).total() == 1);
  CHECK_THROWS_AS(build_confusion_matrix(Labels{"A"}, Labels{}), std::invalid_argument);
  CHECK_THROWS_AS(build_confusion_matrix(Labels{}, Labels{}), std::invalid_argument);
  CHECK_THROWS_AS(precision_recall_f(cm, 2), std::out_of_range);
}

TEST_CASE("holdout report is consistent and reproducible") {
  GeneratorConfig c;
  c.n_records = 600;
  c.seed = 42;
  const auto ds = generate_synthetic(c);
  const auto spec = AlgorithmSpec::defaults(Algorithm::decision_tree);
  const auto r1 = evaluate_holdout(ds, spec, 7, 7);
  const auto r2 = evaluate_holdout(ds, spec, 7, 7);
  CHECK(r1.report.to_json(false) == r2.report.to_json(false));
  CHECK(r1.report.train_rows == 480);
  CHECK(r1.report.test_rows == 120);
  CHECK(r1.report.training_time_ms >= 0.0);

  // recompute test accuracy independently from the returned model
  const auto split = holdout_split(ds, kHoldoutTrainFraction, 7);
  Labels truths, preds;
  for (const auto& r : split.test.rows) {
    truths.push_back(r.label);
    preds.push_back(predict(r1.model, to_row(r)).label);
  }
  CHECK(r1.report.test_accuracy == oracle::accuracy(truths, preds));
  CHECK(std::abs(r1.report.macro_f - oracle::macro_f(truths, preds)) < 1e-12);
  CHECK(r1.report.dataset == fingerprint(ds));
}

TEST_CASE("comparison covers every algorithm with all metrics") {
  GeneratorConfig c;
  c.n_records = 400;
  c.seed = 3;
  const auto ds = generate_synthetic(c);
  auto specs = default_algorithms();
  REQUIRE(specs.size() == 3);
  for (auto& s : specs) s.forest.n_trees = 10;
  const auto cmp = compare_algorithms(ds, specs, 1, 1);
  CHECK(cmp.failures.empty());
  REQUIRE(cmp.reports.size() == 3);
  const auto csv = cmp.to_csv();
  CHECK(csv.rfind("algorithm,test_accuracy,train_accuracy,macro_f,training_time_ms\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(cmp.to_text().find("naive_bayes") != std::string::npos);
  CHECK(cmp.to_json(false) == compare_algorithms(ds, specs, 1, 1).to_json(false));
}

TEST_CASE("a failing algorithm does not sink the comparison") {
  GeneratorConfig c;
  c.n_records = 200;
  const auto ds = generate_synthetic(c);
  auto specs = default_algorithms();
  specs[0].tree.max_depth = 0;
  for (auto& s : specs) s.forest.n_trees = 5;
  const auto cmp = compare_algorithms(ds, specs, 1, 1);
  CHECK(cmp.failures.size() == 1);
  CHECK(cmp.reports.size() == 2);
}
