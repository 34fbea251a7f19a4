#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "edurec/decision_tree.hpp"
#include "edurec/table.hpp"

namespace edurec {

struct NbParams {
  double laplace_alpha = 1.0;
  double variance_floor = 1e-9;

  void validate() const;
};

// Smoothed value frequencies for one categorical attribute.
struct CategoricalLikelihood {
  std::vector<std::string> values;  // sorted, as seen in training
  // likelihood[c][v] = P(values[v] | class c)
  std::vector<std::vector<double>> likelihood;
  // P(value never seen in training | class c) = alpha / (n_c + alpha |V|)
  std::vector<double> unseen;
};

struct GaussianLikelihood {
  std::vector<double> mean;      // per class
  std::vector<double> variance;  // per class, >= variance_floor
};

class NaiveBayesModel {
 public:
  NaiveBayesModel() = default;
  NaiveBayesModel(Schema schema, std::vector<std::string> classes,
                  std::vector<double> priors,
                  std::vector<CategoricalLikelihood> categorical,
                  std::vector<GaussianLikelihood> gaussian, NbParams params);

  const Schema& schema() const noexcept { return schema_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<double>& priors() const noexcept { return priors_; }
  const NbParams& params() const noexcept { return params_; }
  // Indexed by attribute; only the entry matching the attribute kind is used.
  const std::vector<CategoricalLikelihood>& categorical() const noexcept {
    return categorical_;
  }
  const std::vector<GaussianLikelihood>& gaussian() const noexcept { return gaussian_; }

  // log P(c) + Σ log P(x_a | c), per class.
  std::vector<double> log_scores(const Row& row) const;
  // Softmax of log_scores.
  std::vector<double> posterior(const Row& row) const;
  Prediction predict(const Row& row) const;
  std::string predict_label(const Row& row) const;

 private:
  Schema schema_;
  std::vector<std::string> classes_;
  std::vector<double> priors_;
  std::vector<CategoricalLikelihood> categorical_;
  std::vector<GaussianLikelihood> gaussian_;
  NbParams params_;
};

NaiveBayesModel train_naive_bayes(const Table& train, const NbParams& params);

// Index of the largest score; ties go to the smallest index.
std::size_t argmax_index(const std::vector<double>& scores);

}  // namespace edurec
