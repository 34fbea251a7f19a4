#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edurec/decision_tree.hpp"
#include "edurec/table.hpp"

namespace edurec {

struct ForestParams {
  std::size_t n_trees = 100;
  // Unset means ceil(sqrt(d)).
  std::optional<std::size_t> features_per_split;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  TreeParams tree;

  std::size_t resolved_features(std::size_t n_attributes) const;
  void validate() const;
};

class RandomForestModel {
 public:
  RandomForestModel() = default;
  RandomForestModel(Schema schema, std::vector<std::string> classes,
                    std::vector<DecisionTreeModel> trees,
                    std::vector<std::uint64_t> tree_seeds, ForestParams params);

  const Schema& schema() const noexcept { return schema_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<DecisionTreeModel>& trees() const noexcept { return trees_; }
  const std::vector<std::uint64_t>& tree_seeds() const noexcept { return tree_seeds_; }
  const ForestParams& params() const noexcept { return params_; }

  // Vote count per class, indexed like classes().
  std::vector<std::size_t> votes(const Row& row) const;
  // Plurality label; confidence is the winning vote fraction.
  Prediction predict(const Row& row) const;
  std::string predict_label(const Row& row) const;

 private:
  Schema schema_;
  std::vector<std::string> classes_;
  std::vector<DecisionTreeModel> trees_;
  std::vector<std::uint64_t> tree_seeds_;
  ForestParams params_;
};

// Tree i is grown from derive_seed(params.seed, i) alone, so the result does
// not depend on how trees are scheduled across threads.
RandomForestModel train_random_forest(const Table& train,
                                      const ForestParams& params,
                                      unsigned threads = 0);

}  // namespace edurec
