#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edurec/table.hpp"

namespace edurec {

// −Σ p log2 p over non-zero proportions. Throws on an all-zero multiset.
double entropy(std::span<const std::size_t> class_counts);

// entropy(parent) − Σ |child|/|parent| · entropy(child). Throws when the
// children's per-class counts do not add up to the parent's.
double information_gain(std::span<const std::size_t> parent_counts,
                        const std::vector<std::vector<std::size_t>>& children);

struct TreeParams {
  int max_depth = 12;
  std::size_t min_samples_split = 2;
  // Attributes considered per node; 0 means all of them.
  std::size_t features_per_split = 0;

  void validate() const;
};

// Label plus a certainty measure in [0, 1] (leaf purity, vote fraction or
// posterior, depending on the model kind).
struct Prediction {
  std::string label;
  double confidence = 0.0;
};

// Flat node array; node 0 is the root.
struct TreeNode {
  static constexpr int kLeaf = -1;

  int attribute = kLeaf;
  // Numeric split: children[0] takes value <= threshold, children[1] the rest.
  double threshold = 0.0;
  // Categorical split: sorted branch values, aligned with children.
  std::vector<std::string> branch_values;
  std::vector<std::size_t> children;
  // Training rows routed into each child.
  std::vector<std::size_t> branch_counts;
  // Majority class index of the training rows at this node.
  std::size_t label = 0;
  // Training class counts at this node, indexed like the model's classes.
  std::vector<std::size_t> distribution;

  bool is_leaf() const noexcept { return attribute == kLeaf; }
};

class DecisionTreeModel {
 public:
  DecisionTreeModel() = default;
  DecisionTreeModel(Schema schema, std::vector<std::string> classes,
                    std::vector<TreeNode> nodes, TreeParams params);

  const Schema& schema() const noexcept { return schema_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeParams& params() const noexcept { return params_; }

  // Index of the leaf `row` is routed to. Unseen categorical values follow
  // the branch that received the most training rows.
  std::size_t leaf_for(const Row& row) const;
  std::size_t class_index(const Row& row) const;
  Prediction predict(const Row& row) const;
  std::string predict_label(const Row& row) const;

  int depth() const;
  std::size_t leaf_count() const;

 private:
  Schema schema_;
  std::vector<std::string> classes_;
  std::vector<TreeNode> nodes_;
  TreeParams params_;
};

// Greedy information-gain induction. The seed only matters when
// params.features_per_split restricts the attributes tried per node.
DecisionTreeModel train_decision_tree(const Table& train,
                                      const TreeParams& params,
                                      std::uint64_t seed = 0);

}  // namespace edurec
