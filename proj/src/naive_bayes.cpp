#include "edurec/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tree_builder.hpp"

namespace edurec {

void NbParams::validate() const {
  if (!(laplace_alpha > 0.0)) throw std::invalid_argument("laplace_alpha must be > 0");
  if (!(variance_floor > 0.0)) throw std::invalid_argument("variance_floor must be > 0");
}

std::size_t argmax_index(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

NaiveBayesModel::NaiveBayesModel(Schema schema, std::vector<std::string> classes,
                                 std::vector<double> priors,
                                 std::vector<CategoricalLikelihood> categorical,
                                 std::vector<GaussianLikelihood> gaussian,
                                 NbParams params)
    : schema_(std::move(schema)),
      classes_(std::move(classes)),
      priors_(std::move(priors)),
      categorical_(std::move(categorical)),
      gaussian_(std::move(gaussian)),
      params_(params) {
  const std::size_t k = classes_.size();
  if (k == 0 || priors_.size() != k) throw std::invalid_argument("prior count mismatch");
  if (categorical_.size() != schema_.size() || gaussian_.size() != schema_.size()) {
    throw std::invalid_argument("likelihood tables do not match schema");
  }
  for (double p : priors_) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("prior outside (0, 1]");
  }
  for (std::size_t a = 0; a < schema_.size(); ++a) {
    if (schema_[a].kind == AttributeKind::numeric) {
      const auto& g = gaussian_[a];
      if (g.mean.size() != k || g.variance.size() != k) {
        throw std::invalid_argument("gaussian table size mismatch");
      }
      for (double v : g.variance) {
        if (!(v >= params_.variance_floor)) {
          throw std::invalid_argument("variance below floor");
        }
      }
    } else {
      const auto& c = categorical_[a];
      if (c.likelihood.size() != k || c.unseen.size() != k) {
        throw std::invalid_argument("categorical table size mismatch");
      }
      for (std::size_t ci = 0; ci < k; ++ci) {
        if (c.likelihood[ci].size() != c.values.size()) {
          throw std::invalid_argument("categorical table size mismatch");
        }
        for (double p : c.likelihood[ci]) {
          if (!(p > 0.0)) throw std::invalid_argument("non-positive likelihood");
        }
        if (!(c.unseen[ci] > 0.0)) throw std::invalid_argument("non-positive likelihood");
      }
    }
  }
}

std::vector<double> NaiveBayesModel::log_scores(const Row& row) const {
  check_row(schema_, row);
  const std::size_t k = classes_.size();
  std::vector<double> scores(k);
  for (std::size_t c = 0; c < k; ++c) scores[c] = std::log(priors_[c]);
  for (std::size_t a = 0; a < schema_.size(); ++a) {
    if (schema_[a].kind == AttributeKind::numeric) {
      const double x = std::get<double>(row[a]);
      const auto& g = gaussian_[a];
      for (std::size_t c = 0; c < k; ++c) {
        const double var = g.variance[c];
        const double d = x - g.mean[c];
        scores[c] += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
      }
      continue;
    }
    const auto& table = categorical_[a];
    const auto& value = std::get<std::string>(row[a]);
    const auto it = std::lower_bound(table.values.begin(), table.values.end(), value);
    const bool seen = it != table.values.end() && *it == value;
    const auto v = static_cast<std::size_t>(it - table.values.begin());
    for (std::size_t c = 0; c < k; ++c) {
      scores[c] += std::log(seen ? table.likelihood[c][v] : table.unseen[c]);
    }
  }
  return scores;
}

std::vector<double> NaiveBayesModel::posterior(const Row& row) const {
  auto scores = log_scores(row);
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (auto& s : scores) {
    s = std::exp(s - top);
    total += s;
  }
  for (auto& s : scores) s /= total;
  return scores;
}

Prediction NaiveBayesModel::predict(const Row& row) const {
  const auto scores = log_scores(row);
  const auto best = argmax_index(scores);
  const auto post = posterior(row);
  return {classes_[best], post[best]};
}

std::string NaiveBayesModel::predict_label(const Row& row) const {
  return classes_[argmax_index(log_scores(row))];
}

NaiveBayesModel train_naive_bayes(const Table& train, const NbParams& params) {
  params.validate();
  if (train.empty()) throw std::invalid_argument("empty training set");
  const auto data = detail::encode(train);
  const std::size_t k = data.classes.size();
  const std::size_t n = data.size();
  const std::size_t d = data.schema.size();

  std::vector<std::size_t> class_n(k, 0);
  for (auto y : data.y) ++class_n[y];
  std::vector<double> priors(k);
  for (std::size_t c = 0; c < k; ++c) {
    priors[c] = static_cast<double>(class_n[c]) / static_cast<double>(n);
  }

  std::vector<CategoricalLikelihood> categorical(d);
  std::vector<GaussianLikelihood> gaussian(d);
  const double alpha = params.laplace_alpha;
  for (std::size_t a = 0; a < d; ++a) {
    if (data.schema[a].kind == AttributeKind::numeric) {
      auto& g = gaussian[a];
      g.mean.assign(k, 0.0);
      g.variance.assign(k, 0.0);
      for (std::size_t i = 0; i < n; ++i) g.mean[data.y[i]] += data.numbers[a][i];
      for (std::size_t c = 0; c < k; ++c) g.mean[c] /= static_cast<double>(class_n[c]);
      for (std::size_t i = 0; i < n; ++i) {
        const double dev = data.numbers[a][i] - g.mean[data.y[i]];
        g.variance[data.y[i]] += dev * dev;
      }
      for (std::size_t c = 0; c < k; ++c) {
        g.variance[c] = std::max(g.variance[c] / static_cast<double>(class_n[c]),
                                 params.variance_floor);
      }
      continue;
    }
    auto& table = categorical[a];
    table.values = data.vocab[a];
    const std::size_t v = table.values.size();
    std::vector<std::vector<std::size_t>> counts(k, std::vector<std::size_t>(v, 0));
    for (std::size_t i = 0; i < n; ++i) ++counts[data.y[i]][data.codes[a][i]];
    table.likelihood.assign(k, std::vector<double>(v));
    table.unseen.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
      const double denom = static_cast<double>(class_n[c]) + alpha * static_cast<double>(v);
      for (std::size_t j = 0; j < v; ++j) {
        table.likelihood[c][j] = (static_cast<double>(counts[c][j]) + alpha) / denom;
      }
      table.unseen[c] = alpha / denom;
    }
  }
  return NaiveBayesModel(data.schema, data.classes, std::move(priors),
                         std::move(categorical), std::move(gaussian), params);
}

}  // namespace edurec
