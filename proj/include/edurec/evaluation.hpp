#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "edurec/dataset.hpp"
#include "edurec/model.hpp"

namespace edurec {

// M[i][j] = instances of true class i predicted as class j.
class ConfusionMatrix {
 public:
  ConfusionMatrix(std::vector<std::string> classes,
                  std::vector<std::size_t> counts);

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::size_t size() const noexcept { return classes_.size(); }
  std::size_t at(std::size_t truth, std::size_t predicted) const;
  std::size_t total() const noexcept { return total_; }
  std::size_t trace() const noexcept;

  // One-vs-rest terms for class i.
  std::size_t tp(std::size_t i) const;
  std::size_t fp(std::size_t i) const;
  std::size_t fn(std::size_t i) const;
  std::size_t tn(std::size_t i) const;

 private:
  std::vector<std::string> classes_;
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
};

// Class list is the sorted union of both sequences.
ConfusionMatrix build_confusion_matrix(std::span<const std::string> truths,
                                       std::span<const std::string> predictions);

// trace / total; equals (TP + TN) / (TP + TN + FP + FN) when there are two classes.
double accuracy(const ConfusionMatrix& cm);

// 2PR / (P + R), 0 when P + R = 0.
double f_measure(double precision, double recall);

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

// Zero denominators give 0 rather than NaN.
ClassMetrics precision_recall_f(const ConfusionMatrix& cm, std::size_t class_index);
double macro_f_measure(const ConfusionMatrix& cm);

struct EvaluationReport {
  std::string algorithm;
  nlohmann::json params;
  double test_accuracy = 0.0;
  double train_accuracy = 0.0;
  double macro_f = 0.0;
  std::vector<ClassMetrics> per_class;
  double training_time_ms = 0.0;
  std::uint64_t split_seed = 0;
  std::uint64_t training_seed = 0;
  DatasetFingerprint dataset;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;

  // include_timing=false drops the wall-clock field for reproducibility checks.
  nlohmann::json to_json(bool include_timing = true) const;
  std::string to_text() const;
};

inline constexpr double kHoldoutTrainFraction = 0.8;
inline constexpr int kTimingRepeats = 3;

struct HoldoutResult {
  EvaluationReport report;
  TrainedModel model;
};

// Split, train (timed as the median of kTimingRepeats runs), score both parts.
HoldoutResult evaluate_holdout(const Dataset& dataset, const AlgorithmSpec& spec,
                               std::uint64_t split_seed, std::uint64_t training_seed);

struct AlgorithmFailure {
  std::string algorithm;
  std::string message;
};

struct ComparisonReport {
  DatasetFingerprint dataset;
  std::uint64_t split_seed = 0;
  std::uint64_t training_seed = 0;
  std::vector<EvaluationReport> reports;
  std::vector<AlgorithmFailure> failures;

  // Aligned table, one row per algorithm.
  std::string to_text() const;
  // algorithm,test_accuracy,train_accuracy,macro_f,training_time_ms
  std::string to_csv() const;
  nlohmann::json to_json(bool include_timing = true) const;
};

std::vector<AlgorithmSpec> default_algorithms();

// Every algorithm sees the same split; one failing does not stop the rest.
ComparisonReport compare_algorithms(const Dataset& dataset,
                                    const std::vector<AlgorithmSpec>& specs,
                                    std::uint64_t split_seed,
                                    std::uint64_t training_seed);

}  // namespace edurec
