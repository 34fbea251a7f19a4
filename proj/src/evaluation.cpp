#include "edurec/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace edurec {

using nlohmann::json;

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> classes,
                                 std::vector<std::size_t> counts)
    : classes_(std::move(classes)), counts_(std::move(counts)) {
  if (counts_.size() != classes_.size() * classes_.size()) {
    throw std::invalid_argument("confusion matrix must be K x K");
  }
  for (auto c : counts_) total_ += c;
}

std::size_t ConfusionMatrix::at(std::size_t truth, std::size_t predicted) const {
  if (truth >= size() || predicted >= size()) {
    throw std::out_of_range("confusion matrix index out of range");
  }
  return counts_[truth * size() + predicted];
}

std::size_t ConfusionMatrix::trace() const noexcept {
  std::size_t t = 0;
  for (std::size_t i = 0; i < size(); ++i) t += counts_[i * size() + i];
  return t;
}

std::size_t ConfusionMatrix::tp(std::size_t i) const { return at(i, i); }

std::size_t ConfusionMatrix::fp(std::size_t i) const {
  std::size_t column = 0;
  for (std::size_t r = 0; r < size(); ++r) column += at(r, i);
  return column - tp(i);
}

std::size_t ConfusionMatrix::fn(std::size_t i) const {
  std::size_t row = 0;
  for (std::size_t c = 0; c < size(); ++c) row += at(i, c);
  return row - tp(i);
}

std::size_t ConfusionMatrix::tn(std::size_t i) const {
  return total_ - tp(i) - fp(i) - fn(i);
}

ConfusionMatrix build_confusion_matrix(std::span<const std::string> truths,
                                       std::span<const std::string> predictions) {
  if (truths.size() != predictions.size()) {
    throw std::invalid_argument("truths and predictions differ in length");
  }
  if (truths.empty()) throw std::invalid_argument("no instances to tally");
  std::set<std::string> labels(truths.begin(), truths.end());
  labels.insert(predictions.begin(), predictions.end());
  std::vector<std::string> classes(labels.begin(), labels.end());
  const auto index = [&](const std::string& label) {
    return static_cast<std::size_t>(
        std::lower_bound(classes.begin(), classes.end(), label) - classes.begin());
  };
  std::vector<std::size_t> counts(classes.size() * classes.size(), 0);
  for (std::size_t n = 0; n < truths.size(); ++n) {
    ++counts[index(truths[n]) * classes.size() + index(predictions[n])];
  }
  return ConfusionMatrix(std::move(classes), std::move(counts));
}

double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw std::invalid_argument("accuracy of an empty matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
}

double f_measure(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

ClassMetrics precision_recall_f(const ConfusionMatrix& cm, std::size_t class_index) {
  if (class_index >= cm.size()) throw std::out_of_range("unknown class index");
  const auto tp = static_cast<double>(cm.tp(class_index));
  const auto predicted = tp + static_cast<double>(cm.fp(class_index));
  const auto actual = tp + static_cast<double>(cm.fn(class_index));
  ClassMetrics m;
  m.label = cm.classes()[class_index];
  m.precision = predicted > 0.0 ? tp / predicted : 0.0;
  m.recall = actual > 0.0 ? tp / actual : 0.0;
  m.f = f_measure(m.precision, m.recall);
  return m;
}

double macro_f_measure(const ConfusionMatrix& cm) {
  if (cm.size() == 0) throw std::invalid_argument("macro F of an empty matrix");
  double sum = 0.0;
  for (std::size_t i = 0; i < cm.size(); ++i) sum += precision_recall_f(cm, i).f;
  return sum / static_cast<double>(cm.size());
}

json EvaluationReport::to_json(bool include_timing) const {
  json per = json::array();
  for (const auto& m : per_class) {
    per.push_back({{"label", m.label},
                   {"precision", m.precision},
                   {"recall", m.recall},
                   {"f", m.f}});
  }
  json j{{"algorithm", algorithm},
         {"params", params},
         {"test_accuracy", test_accuracy},
         {"train_accuracy", train_accuracy},
         {"macro_f", macro_f},
         {"per_class", std::move(per)},
         {"split_seed", split_seed},
         {"training_seed", training_seed},
         {"dataset", {{"rows", dataset.rows}, {"fingerprint", dataset.str()}}},
         {"train_rows", train_rows},
         {"test_rows", test_rows}};
  if (include_timing) j["training_time_ms"] = training_time_ms;
  return j;
}

std::string EvaluationReport::to_text() const {
  std::ostringstream os;
  char buf[160];
  os << "algorithm        " << algorithm << '\n';
  os << "dataset          " << dataset.str() << " (train " << train_rows << ", test "
     << test_rows << ")\n";
  os << "seeds            split " << split_seed << ", training " << training_seed << '\n';
  std::snprintf(buf, sizeof buf,
                "test_accuracy    %.4f\ntrain_accuracy   %.4f\nmacro_f          %.4f\n"
                "training_time_ms %.3f\n",
                test_accuracy, train_accuracy, macro_f, training_time_ms);
  os << buf;
  os << "per-class (precision / recall / F):\n";
  for (const auto& m : per_class) {
    std::snprintf(buf, sizeof buf, "  %-24s %.4f / %.4f / %.4f\n", m.label.c_str(),
                  m.precision, m.recall, m.f);
    os << buf;
  }
  return os.str();
}

namespace {

std::vector<std::string> predict_all(const TrainedModel& model, const Dataset& data) {
  std::vector<std::string> out;
  out.reserve(data.size());
  for (const auto& r : data.rows) out.push_back(predict(model, to_row(r)).label);
  return out;
}

std::vector<std::string> labels_of(const Dataset& data) {
  std::vector<std::string> out;
  out.reserve(data.size());
  for (const auto& r : data.rows) out.push_back(r.label);
  return out;
}

}  // namespace

HoldoutResult evaluate_holdout(const Dataset& dataset, const AlgorithmSpec& spec,
                               std::uint64_t split_seed, std::uint64_t training_seed) {
  const auto split = holdout_split(dataset, kHoldoutTrainFraction, split_seed);
  const auto train_table = to_table(split.train);

  std::vector<double> times;
  std::optional<TrainedModel> model;
  for (int i = 0; i < kTimingRepeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    auto trained = train_model(spec, train_table, training_seed);
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    if (!model) model = std::move(trained);
  }
  std::sort(times.begin(), times.end());

  EvaluationReport report;
  report.algorithm = spec.name();
  report.params = params_to_json(spec);
  report.training_time_ms = times[times.size() / 2];
  report.split_seed = split_seed;
  report.training_seed = training_seed;
  report.dataset = fingerprint(dataset);
  report.train_rows = split.train.size();
  report.test_rows = split.test.size();

  const auto train_truth = labels_of(split.train);
  const auto train_pred = predict_all(*model, split.train);
  report.train_accuracy = accuracy(build_confusion_matrix(train_truth, train_pred));

  const auto test_truth = labels_of(split.test);
  const auto test_pred = predict_all(*model, split.test);
  const auto cm = build_confusion_matrix(test_truth, test_pred);
  report.test_accuracy = accuracy(cm);
  report.macro_f = macro_f_measure(cm);
  for (std::size_t i = 0; i < cm.size(); ++i) {
    report.per_class.push_back(precision_recall_f(cm, i));
  }
  return {std::move(report), std::move(*model)};
}

std::vector<AlgorithmSpec> default_algorithms() {
  return {AlgorithmSpec::defaults(Algorithm::decision_tree),
          AlgorithmSpec::defaults(Algorithm::random_forest),
          AlgorithmSpec::defaults(Algorithm::naive_bayes)};
}

ComparisonReport compare_algorithms(const Dataset& dataset,
                                    const std::vector<AlgorithmSpec>& specs,
                                    std::uint64_t split_seed,
                                    std::uint64_t training_seed) {
  if (specs.empty()) throw std::invalid_argument("no algorithms to compare");
  ComparisonReport out;
  out.dataset = fingerprint(dataset);
  out.split_seed = split_seed;
  out.training_seed = training_seed;
  for (const auto& spec : specs) {
    try {
      out.reports.push_back(
          evaluate_holdout(dataset, spec, split_seed, training_seed).report);
    } catch (const std::exception& e) {
      out.failures.push_back({spec.name(), e.what()});
    }
  }
  return out;
}

std::string ComparisonReport::to_text() const {
  std::ostringstream os;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-14s %13s %14s %9s %16s\n", "algorithm", "test_accuracy",
                "train_accuracy", "macro_f", "training_time_ms");
  os << buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%-14s %13.4f %14.4f %9.4f %16.3f\n", r.algorithm.c_str(),
                  r.test_accuracy, r.train_accuracy, r.macro_f, r.training_time_ms);
    os << buf;
  }
  for (const auto& f : failures) {
    os << f.algorithm << " FAILED: " << f.message << '\n';
  }
  return os.str();
}

std::string ComparisonReport::to_csv() const {
  std::ostringstream os;
  os << "algorithm,test_accuracy,train_accuracy,macro_f,training_time_ms\n";
  char buf[200];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.3f\n", r.algorithm.c_str(),
                  r.test_accuracy, r.train_accuracy, r.macro_f, r.training_time_ms);
    os << buf;
  }
  return os.str();
}

json ComparisonReport::to_json(bool include_timing) const {
  json rows = json::array();
  for (const auto& r : reports) rows.push_back(r.to_json(include_timing));
  json failed = json::array();
  for (const auto& f : failures) {
    failed.push_back({{"algorithm", f.algorithm}, {"message", f.message}});
  }
  return {{"dataset", {{"rows", dataset.rows}, {"fingerprint", dataset.str()}}},
          {"split_seed", split_seed},
          {"training_seed", training_seed},
          {"reports", std::move(rows)},
          {"failures", std::move(failed)}};
}

}  // namespace edurec
