#include "edurec/model.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace edurec {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& params, const std::set<std::string>& allowed) {
  if (!params.is_object()) throw std::invalid_argument("params must be a JSON object");
  for (const auto& [key, _] : params.items()) {
    if (!allowed.contains(key)) {
      throw std::invalid_argument("unknown parameter '" + key + "'");
    }
  }
}

template <typename T>
void read_if(const json& params, const char* key, T& out) {
  if (params.contains(key)) out = params.at(key).get<T>();
}

json schema_to_json(const Schema& schema) {
  json out = json::array();
  for (const auto& a : schema) out.push_back({{"name", a.name}, {"kind", to_string(a.kind)}});
  return out;
}

Schema schema_from_json(const json& doc) {
  Schema schema;
  for (const auto& a : doc) {
    schema.push_back({a.at("name").get<std::string>(),
                      attribute_kind_from_string(a.at("kind").get<std::string>())});
  }
  return schema;
}

json nodes_to_json(const std::vector<TreeNode>& nodes) {
  json out = json::array();
  for (const auto& n : nodes) {
    json j{{"attribute", n.attribute}, {"label", n.label}, {"distribution", n.distribution}};
    if (!n.is_leaf()) {
      if (n.branch_values.empty()) {
        j["threshold"] = n.threshold;
      } else {
        j["branch_values"] = n.branch_values;
      }
      j["children"] = n.children;
      j["branch_counts"] = n.branch_counts;
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<TreeNode> nodes_from_json(const json& doc) {
  std::vector<TreeNode> nodes;
  for (const auto& j : doc) {
    TreeNode n;
    n.attribute = j.at("attribute").get<int>();
    n.label = j.at("label").get<std::size_t>();
    n.distribution = j.at("distribution").get<std::vector<std::size_t>>();
    if (!n.is_leaf()) {
      read_if(j, "threshold", n.threshold);
      read_if(j, "branch_values", n.branch_values);
      n.children = j.at("children").get<std::vector<std::size_t>>();
      n.branch_counts = j.at("branch_counts").get<std::vector<std::size_t>>();
    }
    nodes.push_back(std::move(n));
  }
  return nodes;
}

json body_to_json(const DecisionTreeModel& m) { return {{"nodes", nodes_to_json(m.nodes())}}; }

json body_to_json(const RandomForestModel& m) {
  json trees = json::array();
  for (const auto& t : m.trees()) trees.push_back({{"nodes", nodes_to_json(t.nodes())}});
  return {{"features_per_split", *m.params().features_per_split},
          {"tree_seeds", m.tree_seeds()},
          {"trees", std::move(trees)}};
}

json body_to_json(const NaiveBayesModel& m) {
  json attributes = json::array();
  for (std::size_t a = 0; a < m.schema().size(); ++a) {
    if (m.schema()[a].kind == AttributeKind::numeric) {
      const auto& g = m.gaussian()[a];
      attributes.push_back({{"kind", "numeric"}, {"mean", g.mean}, {"variance", g.variance}});
    } else {
      const auto& c = m.categorical()[a];
      attributes.push_back({{"kind", "categorical"},
                            {"values", c.values},
                            {"likelihood", c.likelihood},
                            {"unseen", c.unseen}});
    }
  }
  return {{"priors", m.priors()}, {"attributes", std::move(attributes)}};
}

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::decision_tree:
      return "decision_tree";
    case Algorithm::random_forest:
      return "random_forest";
    case Algorithm::naive_bayes:
      return "naive_bayes";
  }
  return "decision_tree";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "dt" || name == "decision_tree") return Algorithm::decision_tree;
  if (name == "rf" || name == "random_forest") return Algorithm::random_forest;
  if (name == "nb" || name == "naive_bayes") return Algorithm::naive_bayes;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                              "' (expected dt, rf or nb)");
}

AlgorithmSpec AlgorithmSpec::defaults(Algorithm algorithm) {
  AlgorithmSpec spec;
  spec.algorithm = algorithm;
  return spec;
}

json params_to_json(const AlgorithmSpec& spec) {
  switch (spec.algorithm) {
    case Algorithm::decision_tree:
      return {{"criterion", "information_gain"},
              {"max_depth", spec.tree.max_depth},
              {"min_samples_split", spec.tree.min_samples_split}};
    case Algorithm::random_forest: {
      json j{{"criterion", "information_gain"},
             {"n_trees", spec.forest.n_trees},
             {"bootstrap", spec.forest.bootstrap},
             {"max_depth", spec.forest.tree.max_depth},
             {"min_samples_split", spec.forest.tree.min_samples_split}};
      j["features_per_split"] = spec.forest.features_per_split
                                    ? json(*spec.forest.features_per_split)
                                    : json(nullptr);
      return j;
    }
    case Algorithm::naive_bayes:
      return {{"laplace_alpha", spec.nb.laplace_alpha},
              {"variance_floor", spec.nb.variance_floor}};
  }
  return json::object();
}

AlgorithmSpec spec_from_json(Algorithm algorithm, const json& params) {
  auto spec = AlgorithmSpec::defaults(algorithm);
  if (params.is_null()) return spec;
  try {
    switch (algorithm) {
      case Algorithm::decision_tree:
        reject_unknown_keys(params, {"criterion", "max_depth", "min_samples_split"});
        read_if(params, "max_depth", spec.tree.max_depth);
        read_if(params, "min_samples_split", spec.tree.min_samples_split);
        spec.tree.validate();
        break;
      case Algorithm::random_forest:
        reject_unknown_keys(params, {"criterion", "n_trees", "bootstrap", "max_depth",
                                     "min_samples_split", "features_per_split"});
        read_if(params, "n_trees", spec.forest.n_trees);
        read_if(params, "bootstrap", spec.forest.bootstrap);
        read_if(params, "max_depth", spec.forest.tree.max_depth);
        read_if(params, "min_samples_split", spec.forest.tree.min_samples_split);
        if (params.contains("features_per_split") && !params["features_per_split"].is_null()) {
          spec.forest.features_per_split = params["features_per_split"].get<std::size_t>();
        }
        spec.forest.validate();
        break;
      case Algorithm::naive_bayes:
        reject_unknown_keys(params, {"laplace_alpha", "variance_floor"});
        read_if(params, "laplace_alpha", spec.nb.laplace_alpha);
        read_if(params, "variance_floor", spec.nb.variance_floor);
        spec.nb.validate();
        break;
    }
    if (params.contains("criterion") && params["criterion"] != "information_gain") {
      throw std::invalid_argument("only the information_gain criterion is supported");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad parameter value: ") + e.what());
  }
  return spec;
}

TrainedModel train_model(const AlgorithmSpec& spec, const Table& train,
                         std::uint64_t training_seed) {
  switch (spec.algorithm) {
    case Algorithm::decision_tree:
      return train_decision_tree(train, spec.tree, training_seed);
    case Algorithm::random_forest: {
      auto params = spec.forest;
      params.seed = training_seed;
      return train_random_forest(train, params);
    }
    case Algorithm::naive_bayes:
      return train_naive_bayes(train, spec.nb);
  }
  throw std::logic_error("unhandled algorithm");
}

Prediction predict(const TrainedModel& model, const Row& row) {
  return std::visit([&](const auto& m) { return m.predict(row); }, model);
}

const Schema& model_schema(const TrainedModel& model) {
  return std::visit([](const auto& m) -> const Schema& { return m.schema(); }, model);
}

const std::vector<std::string>& model_classes(const TrainedModel& model) {
  return std::visit(
      [](const auto& m) -> const std::vector<std::string>& { return m.classes(); }, model);
}

json artifact_to_json(const ModelArtifact& artifact) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["algorithm"] = artifact.spec.name();
  doc["params"] = params_to_json(artifact.spec);
  doc["training_seed"] = artifact.training_seed;
  doc["schema"] = schema_to_json(model_schema(artifact.model));
  doc["classes"] = model_classes(artifact.model);
  doc["body"] = std::visit([](const auto& m) { return body_to_json(m); }, artifact.model);
  return doc;
}

ModelArtifact artifact_from_json(const json& doc) {
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw ModelError("unsupported model format_version " + std::to_string(version));
    }
    ModelArtifact artifact;
    const auto algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
    artifact.spec = spec_from_json(algorithm, doc.at("params"));
    artifact.training_seed = doc.at("training_seed").get<std::uint64_t>();
    auto schema = schema_from_json(doc.at("schema"));
    auto classes = doc.at("classes").get<std::vector<std::string>>();
    const auto& body = doc.at("body");

    switch (algorithm) {
      case Algorithm::decision_tree:
        artifact.model = DecisionTreeModel(std::move(schema), std::move(classes),
                                           nodes_from_json(body.at("nodes")),
                                           artifact.spec.tree);
        break;
      case Algorithm::random_forest: {
        auto params = artifact.spec.forest;
        params.seed = artifact.training_seed;
        params.features_per_split = body.at("features_per_split").get<std::size_t>();
        TreeParams tree_params = params.tree;
        tree_params.features_per_split = *params.features_per_split;
        std::vector<DecisionTreeModel> trees;
        for (const auto& t : body.at("trees")) {
          trees.emplace_back(schema, classes, nodes_from_json(t.at("nodes")), tree_params);
        }
        if (trees.size() != params.n_trees) {
          throw ModelError("forest tree count does not match n_trees");
        }
        artifact.model = RandomForestModel(
            std::move(schema), std::move(classes), std::move(trees),
            body.at("tree_seeds").get<std::vector<std::uint64_t>>(), params);
        break;
      }
      case Algorithm::naive_bayes: {
        const auto& attrs = body.at("attributes");
        if (attrs.size() != schema.size()) {
          throw ModelError("naive Bayes attribute tables do not match schema");
        }
        std::vector<CategoricalLikelihood> categorical(schema.size());
        std::vector<GaussianLikelihood> gaussian(schema.size());
        for (std::size_t a = 0; a < schema.size(); ++a) {
          const auto& j = attrs[a];
          if (schema[a].kind == AttributeKind::numeric) {
            gaussian[a].mean = j.at("mean").get<std::vector<double>>();
            gaussian[a].variance = j.at("variance").get<std::vector<double>>();
          } else {
            categorical[a].values = j.at("values").get<std::vector<std::string>>();
            categorical[a].likelihood =
                j.at("likelihood").get<std::vector<std::vector<double>>>();
            categorical[a].unseen = j.at("unseen").get<std::vector<double>>();
          }
        }
        artifact.model = NaiveBayesModel(std::move(schema), std::move(classes),
                                         body.at("priors").get<std::vector<double>>(),
                                         std::move(categorical), std::move(gaussian),
                                         artifact.spec.nb);
        break;
      }
    }
    return artifact;
  } catch (const ModelError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelError(std::string("invalid model artifact: ") + e.what());
  }
}

std::string serialize_artifact(const ModelArtifact& artifact) {
  return artifact_to_json(artifact).dump(1) + "\n";
}

ModelArtifact parse_artifact(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model artifact is not valid JSON: ") + e.what());
  }
  return artifact_from_json(doc);
}

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path) {
  const auto text = serialize_artifact(artifact);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ModelError("cannot write model '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw ModelError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ModelError("cannot move model into place: " + ec.message());
}

ModelArtifact load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_artifact(buf.str());
}

}  // namespace edurec
