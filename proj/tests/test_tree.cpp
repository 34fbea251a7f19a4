#include "doctest.h"

#include <cmath>

#include "edurec/dataset.hpp"
#include "edurec/decision_tree.hpp"
#include "edurec/model.hpp"

using namespace edurec;

namespace {

std::vector<std::size_t> counts(std::initializer_list<std::size_t> c) { return c; }

Table numeric_table(int n, int cut) {
  Table t;
  t.attributes = {{"x", AttributeKind::numeric}};
  for (int i = 0; i < n; ++i) {
    t.rows.push_back({static_cast<double>(i)});
    t.labels.push_back(i < cut ? "lo" : "hi");
  }
  return t;
}

}  // namespace

TEST_CASE("entropy in bits") {
  CHECK(entropy(counts({5, 5})) == doctest::Approx(1.0));
  CHECK(entropy(counts({10, 0})) == 0.0);
  CHECK(entropy(counts({1, 1, 1, 1})) == doctest::Approx(2.0));
  CHECK(entropy(counts({9, 5})) == doctest::Approx(0.940286).epsilon(1e-6));
  CHECK_THROWS_AS(entropy(counts({0, 0})), std::invalid_argument);
}

TEST_CASE("information gain on the textbook weather split") {
  const auto parent = counts({9, 5});
  CHECK(information_gain(parent, {{2, 3}, {4, 0}, {3, 2}}) ==
        doctest::Approx(0.246750).epsilon(1e-5));
  CHECK(information_gain(parent, {{9, 0}, {0, 5}}) == doctest::Approx(entropy(parent)));
  CHECK(information_gain(parent, {{9, 5}}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(information_gain(parent, {{2, 3}, {4, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(information_gain(parent, {{2, 3, 1}}), std::invalid_argument);
}

TEST_CASE("numeric split lands on the midpoint") {
  const auto t = numeric_table(100, 37);
  const auto tree = train_decision_tree(t, TreeParams{});
  REQUIRE(tree.nodes().size() == 3);
  CHECK(tree.nodes()[0].threshold == 36.5);
  CHECK(tree.leaf_count() == 2);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(tree.predict_label(t.rows[i]) == t.labels[i]);
  CHECK(tree.predict_label({36.4}) == "lo");
  CHECK(tree.predict_label({36.6}) == "hi");
  CHECK(tree.predict({0.0}).confidence == 1.0);
}

TEST_CASE("categorical multiway split and unseen values") {
  Table t;
  t.attributes = {{"colour", AttributeKind::categorical}};
  const std::vector<std::pair<std::string, int>> spec{{"red", 5}, {"green", 9}, {"blue", 3}};
  for (const auto& [c, n] : spec) {
    for (int i = 0; i < n; ++i) {
      t.rows.push_back({c});
      t.labels.push_back(c == "red" ? "warm" : "cool");
    }
  }
  const auto tree = train_decision_tree(t, TreeParams{});
  const auto& root = tree.nodes()[0];
  CHECK(root.branch_values == std::vector<std::string>{"blue", "green", "red"});
  CHECK(tree.predict_label({std::string("red")}) == "warm");
  CHECK(tree.predict_label({std::string("blue")}) == "cool");
  // unseen value follows the branch with the most training rows (green)
  const auto leaf = tree.leaf_for({std::string("violet")});
  CHECK(leaf == tree.leaf_for({std::string("green")}));
}

TEST_CASE("ties go to the lexicographically smallest class") {
  Table t;
  t.attributes = {{"x", AttributeKind::numeric}};
  t.rows = {{1.0}, {1.0}, {1.0}, {1.0}};
  t.labels = {"zeta", "alpha", "zeta", "alpha"};
  const auto tree = train_decision_tree(t, TreeParams{});
  CHECK(tree.nodes().size() == 1);
  const auto p = tree.predict({1.0});
  CHECK(p.label == "alpha");
  CHECK(p.confidence == 0.5);
}

TEST_CASE("stopping rules") {
  const auto t = numeric_table(40, 20);
  TreeParams p;
  p.min_samples_split = 41;
  CHECK(train_decision_tree(t, p).nodes().size() == 1);
  Table alternating;
  alternating.attributes = {{"x", AttributeKind::numeric}};
  for (int i = 0; i < 64; ++i) {
    alternating.rows.push_back({static_cast<double>(i)});
    alternating.labels.push_back(i % 2 ? "odd" : "even");
  }
  p = TreeParams{};
  p.max_depth = 3;
  const auto shallow = train_decision_tree(alternating, p);
  CHECK(shallow.depth() <= 3);
  CHECK(train_decision_tree(alternating, TreeParams{}).depth() > 3);
  p.max_depth = 0;
  CHECK_THROWS_AS(train_decision_tree(t, p), std::invalid_argument);
  CHECK_THROWS_AS(train_decision_tree(Table{}, TreeParams{}), std::invalid_argument);
}

TEST_CASE("noise-free generated data is fit exactly and deterministically") {
  GeneratorConfig c;
  c.n_records = 1500;
  c.noise_rate = 0.0;
  c.seed = 21;
  const auto table = to_table(generate_synthetic(c));
  const auto a = train_decision_tree(table, TreeParams{});
  const auto b = train_decision_tree(table, TreeParams{});
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(a.predict_label(table.rows[i]) == table.labels[i]);
  }
  const auto spec = AlgorithmSpec::defaults(Algorithm::decision_tree);
  CHECK(serialize_artifact({spec, 0, a}) == serialize_artifact({spec, 0, b}));
}

TEST_CASE("prediction rejects rows that do not fit the schema") {
  const auto tree = train_decision_tree(numeric_table(10, 5), TreeParams{});
  CHECK_THROWS_AS(tree.predict({std::string("x")}), SchemaMismatch);
  CHECK_THROWS_AS(tree.predict({1.0, 2.0}), SchemaMismatch);
}
