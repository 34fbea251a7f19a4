#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "edurec/dataset.hpp"
#include "edurec/model.hpp"

using namespace edurec;
namespace fs = std::filesystem;

namespace {

Table small_table() {
  GeneratorConfig c;
  c.n_records = 500;
  c.seed = 12;
  return to_table(generate_synthetic(c));
}

AlgorithmSpec quick_spec(Algorithm a) {
  auto s = AlgorithmSpec::defaults(a);
  s.forest.n_trees = 8;
  return s;
}

}  // namespace

TEST_CASE("artifacts round-trip byte for byte and predict the same") {
  const auto table = small_table();
  for (auto algo : {Algorithm::decision_tree, Algorithm::random_forest, Algorithm::naive_bayes}) {
    CAPTURE(to_string(algo));
    const auto spec = quick_spec(algo);
    const ModelArtifact art{spec, 99, train_model(spec, table, 99)};
    const auto text = serialize_artifact(art);
    const auto back = parse_artifact(text);
    CHECK(serialize_artifact(back) == text);
    CHECK(back.training_seed == 99);
    CHECK(back.spec.algorithm == algo);
    for (const auto& row : table.rows) {
      const auto p1 = predict(art.model, row);
      const auto p2 = predict(back.model, row);
      CHECK(p1.label == p2.label);
      CHECK(p1.confidence == p2.confidence);
    }
  }
}

TEST_CASE("training is a pure function of data, spec and seed") {
  const auto table = small_table();
  const auto spec = quick_spec(Algorithm::random_forest);
  const auto a = serialize_artifact({spec, 5, train_model(spec, table, 5)});
  const auto b = serialize_artifact({spec, 5, train_model(spec, table, 5)});
  CHECK(a == b);
}

TEST_CASE("save and load through the filesystem") {
  const auto dir = fs::temp_directory_path() / "edurec_model_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto table = small_table();
  const auto spec = quick_spec(Algorithm::naive_bayes);
  const ModelArtifact art{spec, 1, train_model(spec, table, 1)};
  save_model(art, dir / "m.json");
  CHECK(serialize_artifact(load_model(dir / "m.json")) == serialize_artifact(art));
  CHECK_FALSE(fs::exists(dir / "m.json.tmp"));
  CHECK_THROWS_AS(load_model(dir / "missing.json"), ModelError);
  fs::remove_all(dir);
}

TEST_CASE("corrupt or incompatible artifacts are rejected") {
  const auto table = small_table();
  const auto spec = quick_spec(Algorithm::decision_tree);
  auto doc = artifact_to_json({spec, 0, train_model(spec, table, 0)});
  CHECK_THROWS_AS(parse_artifact("{not json"), ModelError);
  CHECK_THROWS_AS(parse_artifact("{}"), ModelError);
  auto bad_version = doc;
  bad_version["format_version"] = 2;
  CHECK_THROWS_AS(artifact_from_json(bad_version), ModelError);
  auto bad_child = doc;
  bad_child["body"]["nodes"][0]["children"] = nlohmann::json::array({0, 0});
  CHECK_THROWS_AS(artifact_from_json(bad_child), ModelError);
  auto bad_algo = doc;
  bad_algo["algorithm"] = "svm";
  CHECK_THROWS(artifact_from_json(bad_algo));
}

TEST_CASE("parameter json") {
  CHECK(parse_algorithm("dt") == Algorithm::decision_tree);
  CHECK(parse_algorithm("random_forest") == Algorithm::random_forest);
  CHECK(parse_algorithm("nb") == Algorithm::naive_bayes);
  CHECK_THROWS_AS(parse_algorithm("knn"), std::invalid_argument);

  const auto s = spec_from_json(Algorithm::random_forest, {{"n_trees", 7}, {"bootstrap", false}});
  CHECK(s.forest.n_trees == 7);
  CHECK_FALSE(s.forest.bootstrap);
  const auto round = spec_from_json(Algorithm::random_forest, params_to_json(s));
  CHECK(params_to_json(round) == params_to_json(s));
  CHECK_THROWS_AS(spec_from_json(Algorithm::decision_tree, {{"depth", 3}}), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json(Algorithm::decision_tree, {{"max_depth", "deep"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json(Algorithm::decision_tree, {{"criterion", "gini"}}),
                  std::invalid_argument);
}
