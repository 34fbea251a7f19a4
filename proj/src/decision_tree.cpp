#include "edurec/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "edurec/rng.hpp"
#include "tree_builder.hpp"

namespace edurec {

namespace {

// Gains at or below this are treated as zero (floating-point residue of a
// split that separates nothing).
constexpr double kMinGain = 1e-12;

double entropy_of(const std::size_t* counts, std::size_t k, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (std::size_t i = 0; i < k; ++i) {
    if (counts[i] == 0) continue;
    const double p = static_cast<double>(counts[i]) / n;
    h -= p * std::log2(p);
  }
  return h;
}

std::size_t sum(std::span<const std::size_t> counts) {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

}  // namespace

double entropy(std::span<const std::size_t> class_counts) {
  const std::size_t total = sum(class_counts);
  if (total == 0) throw std::invalid_argument("entropy of an empty multiset");
  return entropy_of(class_counts.data(), class_counts.size(), total);
}

double information_gain(std::span<const std::size_t> parent_counts,
                        const std::vector<std::vector<std::size_t>>& children) {
  const std::size_t total = sum(parent_counts);
  if (total == 0) throw std::invalid_argument("information gain of an empty parent");
  std::vector<std::size_t> combined(parent_counts.size(), 0);
  for (const auto& child : children) {
    if (child.size() != parent_counts.size()) {
      throw std::invalid_argument("child class count arity differs from parent");
    }
    for (std::size_t i = 0; i < child.size(); ++i) combined[i] += child[i];
  }
  if (!std::equal(combined.begin(), combined.end(), parent_counts.begin())) {
    throw std::invalid_argument("children do not partition the parent");
  }
  double remainder = 0.0;
  for (const auto& child : children) {
    const std::size_t n = sum(child);
    if (n == 0) continue;
    remainder += static_cast<double>(n) / static_cast<double>(total) *
                 entropy_of(child.data(), child.size(), n);
  }
  return entropy_of(parent_counts.data(), parent_counts.size(), total) - remainder;
}

void TreeParams::validate() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (min_samples_split < 1) {
    throw std::invalid_argument("min_samples_split must be >= 1");
  }
}

namespace detail {

std::vector<std::string> sorted_classes(const std::vector<std::string>& labels) {
  std::set<std::string> unique(labels.begin(), labels.end());
  return {unique.begin(), unique.end()};
}

std::size_t argmax_count(const std::vector<std::size_t>& counts) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[best]) best = i;
  }
  return best;
}

EncodedTable encode(const Table& table) {
  check_table(table);
  EncodedTable e;
  e.schema = table.attributes;
  e.classes = sorted_classes(table.labels);
  e.y.reserve(table.size());
  for (const auto& label : table.labels) {
    e.y.push_back(static_cast<std::size_t>(
        std::lower_bound(e.classes.begin(), e.classes.end(), label) -
        e.classes.begin()));
  }
  const std::size_t d = table.attributes.size();
  e.vocab.resize(d);
  e.codes.resize(d);
  e.numbers.resize(d);
  for (std::size_t a = 0; a < d; ++a) {
    if (table.attributes[a].kind == AttributeKind::numeric) {
      e.numbers[a].reserve(table.size());
      for (const auto& row : table.rows) {
        e.numbers[a].push_back(std::get<double>(row[a]));
      }
      continue;
    }
    std::set<std::string> values;
    for (const auto& row : table.rows) values.insert(std::get<std::string>(row[a]));
    e.vocab[a].assign(values.begin(), values.end());
    e.codes[a].reserve(table.size());
    for (const auto& row : table.rows) {
      const auto& v = std::get<std::string>(row[a]);
      e.codes[a].push_back(static_cast<std::uint32_t>(
          std::lower_bound(e.vocab[a].begin(), e.vocab[a].end(), v) -
          e.vocab[a].begin()));
    }
  }
  return e;
}

namespace {

struct SplitChoice {
  double gain = 0.0;
  int attribute = TreeNode::kLeaf;
  double threshold = 0.0;
};

class TreeGrower {
 public:
  TreeGrower(const EncodedTable& data, const TreeParams& params,
             std::uint64_t seed)
      : data_(data), params_(params), seed_(seed), k_(data.classes.size()) {}

  std::vector<TreeNode> run(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  std::vector<std::size_t> class_counts(const std::vector<std::size_t>& rows) const {
    std::vector<std::size_t> counts(k_, 0);
    for (auto r : rows) ++counts[data_.y[r]];
    return counts;
  }

  std::vector<std::size_t> candidate_attributes(std::size_t node_id) const {
    const std::size_t d = data_.schema.size();
    std::vector<std::size_t> all(d);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const std::size_t k = params_.features_per_split;
    if (k == 0 || k >= d) return all;
    SplitMix64 rng(derive_seed(seed_, node_id));
    // Partial Fisher-Yates: the first k slots become the sample.
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform_index(d - i));
      std::swap(all[i], all[j]);
    }
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
  }

  void try_categorical(std::size_t a, const std::vector<std::size_t>& rows,
                       double parent_h, SplitChoice& best) const {
    const auto& codes = data_.codes[a];
    const std::size_t v = data_.vocab[a].size();
    std::vector<std::size_t> table(v * k_, 0);
    std::vector<std::size_t> sizes(v, 0);
    for (auto r : rows) {
      ++table[codes[r] * k_ + data_.y[r]];
      ++sizes[codes[r]];
    }
    std::size_t present = 0;
    double remainder = 0.0;
    const double n = static_cast<double>(rows.size());
    for (std::size_t c = 0; c < v; ++c) {
      if (sizes[c] == 0) continue;
      ++present;
      remainder += static_cast<double>(sizes[c]) / n *
                   entropy_of(&table[c * k_], k_, sizes[c]);
    }
    if (present < 2) return;
    const double gain = parent_h - remainder;
    if (gain > best.gain) best = {gain, static_cast<int>(a), 0.0};
  }

  void try_numeric(std::size_t a, const std::vector<std::size_t>& rows,
                   const std::vector<std::size_t>& parent_counts,
                   double parent_h, SplitChoice& best) const {
    const auto& xs = data_.numbers[a];
    std::vector<std::pair<double, std::size_t>> sorted;
    sorted.reserve(rows.size());
    for (auto r : rows) sorted.emplace_back(xs[r], data_.y[r]);
    std::sort(sorted.begin(), sorted.end());

    std::vector<std::size_t> left(k_, 0);
    std::vector<std::size_t> right = parent_counts;
    const std::size_t n = sorted.size();
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      ++left[sorted[i].second];
      --right[sorted[i].second];
      const double lo = sorted[i].first;
      const double hi = sorted[i + 1].first;
      if (!(lo < hi)) continue;
      const std::size_t nl = i + 1;
      const std::size_t nr = n - nl;
      const double remainder =
          static_cast<double>(nl) / dn * entropy_of(left.data(), k_, nl) +
          static_cast<double>(nr) / dn * entropy_of(right.data(), k_, nr);
      const double gain = parent_h - remainder;
      if (gain > best.gain) {
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;
        best = {gain, static_cast<int>(a), mid};
      }
    }
  }

  std::size_t make_leaf(std::vector<std::size_t> counts) {
    TreeNode leaf;
    leaf.label = argmax_count(counts);
    leaf.distribution = std::move(counts);
    nodes_.push_back(std::move(leaf));
    return nodes_.size() - 1;
  }

  std::size_t grow(std::vector<std::size_t> rows, int depth) {
    auto counts = class_counts(rows);
    const bool pure =
        std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    if (depth >= params_.max_depth || rows.size() < params_.min_samples_split ||
        pure) {
      return make_leaf(std::move(counts));
    }

    const std::size_t node_id = nodes_.size();
    const double parent_h = entropy_of(counts.data(), k_, rows.size());
    SplitChoice best;
    for (auto a : candidate_attributes(node_id)) {
      if (data_.schema[a].kind == AttributeKind::numeric) {
        try_numeric(a, rows, counts, parent_h, best);
      } else {
        try_categorical(a, rows, parent_h, best);
      }
    }
    if (best.attribute == TreeNode::kLeaf || best.gain <= kMinGain) {
      return make_leaf(std::move(counts));
    }

    const auto a = static_cast<std::size_t>(best.attribute);
    TreeNode node;
    node.attribute = best.attribute;
    node.label = argmax_count(counts);
    node.distribution = std::move(counts);

    std::vector<std::vector<std::size_t>> parts;
    if (data_.schema[a].kind == AttributeKind::numeric) {
      node.threshold = best.threshold;
      parts.resize(2);
      for (auto r : rows) {
        parts[data_.numbers[a][r] <= best.threshold ? 0 : 1].push_back(r);
      }
    } else {
      std::map<std::uint32_t, std::vector<std::size_t>> by_code;
      for (auto r : rows) by_code[data_.codes[a][r]].push_back(r);
      for (auto& [code, part] : by_code) {
        node.branch_values.push_back(data_.vocab[a][code]);
        parts.push_back(std::move(part));
      }
    }
    for (const auto& part : parts) node.branch_counts.push_back(part.size());
    rows.clear();
    rows.shrink_to_fit();

    nodes_.push_back(std::move(node));
    std::vector<std::size_t> children;
    children.reserve(parts.size());
    for (auto& part : parts) children.push_back(grow(std::move(part), depth + 1));
    nodes_[node_id].children = std::move(children);
    return node_id;
  }

  const EncodedTable& data_;
  const TreeParams& params_;
  std::uint64_t seed_;
  std::size_t k_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

std::vector<TreeNode> grow_tree(const EncodedTable& data,
                                std::vector<std::size_t> rows,
                                const TreeParams& params, std::uint64_t seed) {
  return TreeGrower(data, params, seed).run(std::move(rows));
}

}  // namespace detail

DecisionTreeModel::DecisionTreeModel(Schema schema,
                                     std::vector<std::string> classes,
                                     std::vector<TreeNode> nodes,
                                     TreeParams params)
    : schema_(std::move(schema)),
      classes_(std::move(classes)),
      nodes_(std::move(nodes)),
      params_(params) {
  if (nodes_.empty()) throw std::invalid_argument("tree has no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& node = nodes_[i];
    if (node.label >= classes_.size() || node.distribution.size() != classes_.size()) {
      throw std::invalid_argument("tree node label or distribution out of range");
    }
    if (node.is_leaf()) continue;
    if (node.attribute < 0 ||
        static_cast<std::size_t>(node.attribute) >= schema_.size()) {
      throw std::invalid_argument("tree node attribute out of range");
    }
    const bool numeric =
        schema_[static_cast<std::size_t>(node.attribute)].kind == AttributeKind::numeric;
    const std::size_t expected = numeric ? 2 : node.branch_values.size();
    if (node.children.size() != expected || node.branch_counts.size() != expected ||
        expected == 0) {
      throw std::invalid_argument("tree node branch layout is inconsistent");
    }
    for (auto child : node.children) {
      if (child <= i || child >= nodes_.size()) {
        throw std::invalid_argument("tree child out of range");
      }
    }
  }
}

std::size_t DecisionTreeModel::leaf_for(const Row& row) const {
  check_row(schema_, row);
  std::size_t at = 0;
  while (!nodes_[at].is_leaf()) {
    const auto& node = nodes_[at];
    const auto a = static_cast<std::size_t>(node.attribute);
    if (schema_[a].kind == AttributeKind::numeric) {
      at = node.children[std::get<double>(row[a]) <= node.threshold ? 0 : 1];
      continue;
    }
    const auto& value = std::get<std::string>(row[a]);
    const auto it = std::lower_bound(node.branch_values.begin(),
                                     node.branch_values.end(), value);
    std::size_t branch = 0;
    if (it != node.branch_values.end() && *it == value) {
      branch = static_cast<std::size_t>(it - node.branch_values.begin());
    } else {
      branch = detail::argmax_count(node.branch_counts);
    }
    at = node.children[branch];
  }
  return at;
}

std::size_t DecisionTreeModel::class_index(const Row& row) const {
  return nodes_[leaf_for(row)].label;
}

Prediction DecisionTreeModel::predict(const Row& row) const {
  const auto& leaf = nodes_[leaf_for(row)];
  const std::size_t total = std::accumulate(leaf.distribution.begin(),
                                            leaf.distribution.end(), std::size_t{0});
  const double purity =
      total == 0 ? 0.0
                 : static_cast<double>(leaf.distribution[leaf.label]) /
                       static_cast<double>(total);
  return {classes_[leaf.label], purity};
}

std::string DecisionTreeModel::predict_label(const Row& row) const {
  return classes_[class_index(row)];
}

int DecisionTreeModel::depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  // Children always follow their parent in the flat array.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, depth[i]);
    for (auto c : nodes_[i].children) depth[c] = depth[i] + 1;
  }
  return deepest;
}

std::size_t DecisionTreeModel::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

DecisionTreeModel train_decision_tree(const Table& train, const TreeParams& params,
                                      std::uint64_t seed) {
  params.validate();
  if (train.empty()) throw std::invalid_argument("empty training set");
  if (train.attributes.empty()) throw std::invalid_argument("schema has no attributes");
  const auto data = detail::encode(train);
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  auto nodes = detail::grow_tree(data, std::move(rows), params, seed);
  return DecisionTreeModel(data.schema, data.classes, std::move(nodes), params);
}

}  // namespace edurec
