#include "edurec/random_forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "edurec/rng.hpp"
#include "tree_builder.hpp"

namespace edurec {

std::size_t ForestParams::resolved_features(std::size_t n_attributes) const {
  if (features_per_split) return std::min(*features_per_split, n_attributes);
  return static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(n_attributes))));
}

void ForestParams::validate() const {
  if (n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
  if (features_per_split && *features_per_split < 1) {
    throw std::invalid_argument("features_per_split must be >= 1");
  }
  tree.validate();
}

RandomForestModel::RandomForestModel(Schema schema,
                                     std::vector<std::string> classes,
                                     std::vector<DecisionTreeModel> trees,
                                     std::vector<std::uint64_t> tree_seeds,
                                     ForestParams params)
    : schema_(std::move(schema)),
      classes_(std::move(classes)),
      trees_(std::move(trees)),
      tree_seeds_(std::move(tree_seeds)),
      params_(std::move(params)) {
  if (trees_.empty()) throw std::invalid_argument("forest has no trees");
  if (tree_seeds_.size() != trees_.size()) {
    throw std::invalid_argument("forest seed record does not match tree count");
  }
  for (const auto& t : trees_) {
    if (t.classes() != classes_ || t.schema() != schema_) {
      throw std::invalid_argument("forest tree disagrees with forest schema/classes");
    }
  }
}

std::vector<std::size_t> RandomForestModel::votes(const Row& row) const {
  check_row(schema_, row);
  std::vector<std::size_t> tally(classes_.size(), 0);
  for (const auto& tree : trees_) ++tally[tree.class_index(row)];
  return tally;
}

Prediction RandomForestModel::predict(const Row& row) const {
  const auto tally = votes(row);
  const auto winner = detail::argmax_count(tally);
  return {classes_[winner],
          static_cast<double>(tally[winner]) / static_cast<double>(trees_.size())};
}

std::string RandomForestModel::predict_label(const Row& row) const {
  return predict(row).label;
}

RandomForestModel train_random_forest(const Table& train, const ForestParams& params,
                                      unsigned threads) {
  params.validate();
  if (train.empty()) throw std::invalid_argument("empty training set");
  if (train.attributes.empty()) throw std::invalid_argument("schema has no attributes");
  const auto data = detail::encode(train);
  const std::size_t n = data.size();

  ForestParams resolved = params;
  resolved.features_per_split = params.resolved_features(data.schema.size());
  TreeParams tree_params = params.tree;
  tree_params.features_per_split = *resolved.features_per_split;

  std::vector<std::uint64_t> seeds(params.n_trees);
  for (std::size_t i = 0; i < params.n_trees; ++i) seeds[i] = derive_seed(params.seed, i);

  std::vector<std::vector<TreeNode>> grown(params.n_trees);
  auto grow_one = [&](std::size_t i) {
    std::vector<std::size_t> rows(n);
    if (params.bootstrap) {
      SplitMix64 rng(derive_seed(seeds[i], UINT64_MAX));
      for (auto& r : rows) r = static_cast<std::size_t>(rng.uniform_index(n));
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    grown[i] = detail::grow_tree(data, std::move(rows), tree_params, seeds[i]);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, params.n_trees));
  if (threads <= 1) {
    for (std::size_t i = 0; i < params.n_trees; ++i) grow_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < params.n_trees; i = next++) {
          try {
            grow_one(i);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<DecisionTreeModel> trees;
  trees.reserve(params.n_trees);
  for (auto& nodes : grown) {
    trees.emplace_back(data.schema, data.classes, std::move(nodes), tree_params);
  }
  return RandomForestModel(data.schema, data.classes, std::move(trees),
                           std::move(seeds), std::move(resolved));
}

}  // namespace edurec
