#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "edurec/decision_tree.hpp"
#include "edurec/naive_bayes.hpp"
#include "edurec/random_forest.hpp"
#include "edurec/table.hpp"

namespace edurec {

// Unreadable, corrupt or incompatible model artifact.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { decision_tree, random_forest, naive_bayes };

std::string_view to_string(Algorithm algorithm) noexcept;
// Accepts the short CLI tags (dt, rf, nb) and the full names.
Algorithm parse_algorithm(std::string_view name);

struct AlgorithmSpec {
  Algorithm algorithm = Algorithm::decision_tree;
  TreeParams tree;
  ForestParams forest;
  NbParams nb;

  static AlgorithmSpec defaults(Algorithm algorithm);
  std::string name() const { return std::string(to_string(algorithm)); }
};

nlohmann::json params_to_json(const AlgorithmSpec& spec);
// Missing keys keep their defaults; unknown keys are rejected.
AlgorithmSpec spec_from_json(Algorithm algorithm, const nlohmann::json& params);

using TrainedModel = std::variant<DecisionTreeModel, RandomForestModel, NaiveBayesModel>;

// The training seed feeds feature subsampling and bootstrap draws; it
// overrides spec.forest.seed.
TrainedModel train_model(const AlgorithmSpec& spec, const Table& train,
                         std::uint64_t training_seed);

Prediction predict(const TrainedModel& model, const Row& row);
const Schema& model_schema(const TrainedModel& model);
const std::vector<std::string>& model_classes(const TrainedModel& model);

inline constexpr int kModelFormatVersion = 1;

struct ModelArtifact {
  AlgorithmSpec spec;
  std::uint64_t training_seed = 0;
  TrainedModel model;
};

// Layout (format_version 1):
//   {format_version, algorithm, params, training_seed, schema:[{name,kind}],
//    classes:[...], body:{...}}
// body per algorithm:
//   decision_tree  {nodes:[node]}
//   random_forest  {features_per_split, tree_seeds:[u64], trees:[{nodes:[node]}]}
//   naive_bayes    {priors:[...], attributes:[{kind, values, likelihood, unseen}
//                   | {kind, mean, variance}]}
//   node           {attribute, threshold?, branch_values?, children?,
//                   branch_counts?, label, distribution}
nlohmann::json artifact_to_json(const ModelArtifact& artifact);
ModelArtifact artifact_from_json(const nlohmann::json& doc);

std::string serialize_artifact(const ModelArtifact& artifact);
ModelArtifact parse_artifact(std::string_view text);

// Written to a sibling temp file and renamed into place.
void save_model(const ModelArtifact& artifact, const std::filesystem::path& path);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace edurec
