#pragma once

// Shared tree-induction machinery for the decision tree and the forest.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "edurec/decision_tree.hpp"
#include "edurec/table.hpp"

namespace edurec::detail {

// Table with categorical values and labels replaced by indices into sorted
// vocabularies, so the lexicographically smallest label has index 0.
struct EncodedTable {
  Schema schema;
  std::vector<std::string> classes;
  std::vector<std::size_t> y;
  std::vector<std::vector<std::string>> vocab;
  std::vector<std::vector<std::uint32_t>> codes;
  std::vector<std::vector<double>> numbers;

  std::size_t size() const noexcept { return y.size(); }
};

EncodedTable encode(const Table& table);

std::vector<std::string> sorted_classes(const std::vector<std::string>& labels);

// Grows one tree over `rows` (indices into `data`, duplicates allowed).
std::vector<TreeNode> grow_tree(const EncodedTable& data,
                                std::vector<std::size_t> rows,
                                const TreeParams& params, std::uint64_t seed);

// Index of the largest count; ties go to the smallest index.
std::size_t argmax_count(const std::vector<std::size_t>& counts);

}  // namespace edurec::detail
