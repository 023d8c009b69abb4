#include "soaccept/model_io.hpp"

#include <fstream>
#include <json.hpp>

#include "soaccept/error.hpp"

namespace soaccept::learn {

using nlohmann::json;

namespace {

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump() << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

json read_json(const std::filesystem::path& path, const std::string& kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.filename().string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("v") || j["v"] != kModelSchemaVersion)
    throw DataError(path.filename().string() + ": unsupported schema version");
  if (j.value("kind", "") != kind) throw DataError(path.filename().string() + ": expected a " + kind + " model");
  return j;
}

template <typename Fn>
auto guarded(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw DataError(path.filename().string() + ": " + e.what());
  }
}

}  // namespace

void write_forest(const std::filesystem::path& path, const ForestModel& model,
                  const std::vector<std::string>& feature_names) {
  json j;
  j["v"] = kModelSchemaVersion;
  j["kind"] = "random_forest";
  j["feature_names"] = feature_names;
  const auto& p = model.params;
  j["params"] = {{"n_estimators", p.n_estimators},
                 {"max_features", p.max_features.to_string()},
                 {"max_depth", p.max_depth},
                 {"min_samples_split", p.min_samples_split},
                 {"min_samples_leaf", p.min_samples_leaf},
                 {"bootstrap", p.bootstrap},
                 {"seed", p.seed}};
  j["n_features"] = model.n_features;
  j["oob_error"] = model.oob_error ? json(*model.oob_error) : json(nullptr);
  j["importances"] = model.importances;
  json trees = json::array();
  for (const auto& tree : model.trees) {
    json nodes = json::array();
    for (const auto& n : tree.nodes)
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.p1, n.n_samples, n.impurity_decrease});
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  j["trees"] = std::move(trees);
  write_json(path, j);
}

NamedModel<ForestModel> read_forest(const std::filesystem::path& path) {
  const auto j = read_json(path, "random_forest");
  return guarded(path, [&] {
    NamedModel<ForestModel> out;
    out.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    auto& m = out.model;
    const auto& p = j.at("params");
    m.params.n_estimators = p.at("n_estimators").get<std::size_t>();
    m.params.max_features = MaxFeatures::parse(p.at("max_features").get<std::string>());
    m.params.max_depth = p.at("max_depth").get<std::size_t>();
    m.params.min_samples_split = p.at("min_samples_split").get<std::size_t>();
    m.params.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
    m.params.bootstrap = p.at("bootstrap").get<bool>();
    m.params.seed = p.at("seed").get<std::uint64_t>();
    m.n_features = j.at("n_features").get<std::size_t>();
    if (!j.at("oob_error").is_null()) m.oob_error = j.at("oob_error").get<double>();
    m.importances = j.at("importances").get<std::vector<double>>();
    for (const auto& t : j.at("trees")) {
      DecisionTree tree;
      tree.n_features = m.n_features;
      for (const auto& n : t.at("nodes")) {
        TreeNode node;
        node.feature = n.at(0).get<std::int32_t>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<std::int32_t>();
        node.right = n.at(3).get<std::int32_t>();
        node.p1 = n.at(4).get<double>();
        node.n_samples = n.at(5).get<std::uint32_t>();
        node.impurity_decrease = n.at(6).get<double>();
        tree.nodes.push_back(node);
      }
      const auto count = static_cast<std::int32_t>(tree.nodes.size());
      for (const auto& node : tree.nodes) {
        if (node.is_leaf()) continue;
        if (node.feature >= static_cast<std::int32_t>(m.n_features) || node.left <= 0 || node.right <= 0 ||
            node.left >= count || node.right >= count)
          throw DataError(path.filename().string() + ": malformed tree node");
      }
      if (tree.nodes.empty()) throw DataError(path.filename().string() + ": empty tree");
      m.trees.push_back(std::move(tree));
    }
    if (m.trees.size() != m.params.n_estimators || out.feature_names.size() != m.n_features)
      throw DataError(path.filename().string() + ": tree or feature count mismatch");
    return out;
  });
}

void write_mlp(const std::filesystem::path& path, const MlpModel& model,
               const std::vector<std::string>& feature_names) {
  json j;
  j["v"] = kModelSchemaVersion;
  j["kind"] = "mlp";
  j["feature_names"] = feature_names;
  const auto& c = model.config;
  j["config"] = {{"hidden", c.hidden},
                 {"learning_rate", c.learning_rate},
                 {"batch_size", c.batch_size},
                 {"epochs", c.epochs},
                 {"seed", c.seed}};
  j["scaler"] = {{"mean", model.scaler.mean()}, {"sd", model.scaler.sd()}};
  json layers = json::array();
  for (const auto& l : model.layers)
    layers.push_back({{"inputs", l.inputs}, {"outputs", l.outputs}, {"w", l.w}, {"b", l.b}});
  j["layers"] = std::move(layers);
  j["epoch_loss"] = model.epoch_loss;
  write_json(path, j);
}

NamedModel<MlpModel> read_mlp(const std::filesystem::path& path) {
  const auto j = read_json(path, "mlp");
  return guarded(path, [&] {
    NamedModel<MlpModel> out;
    out.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    auto& m = out.model;
    const auto& c = j.at("config");
    m.config.hidden = c.at("hidden").get<std::vector<std::size_t>>();
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.batch_size = c.at("batch_size").get<std::size_t>();
    m.config.epochs = c.at("epochs").get<std::size_t>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.scaler = resample::Scaler(j.at("scaler").at("mean").get<std::vector<double>>(),
                                j.at("scaler").at("sd").get<std::vector<double>>());
    std::size_t prev = 0;
    for (const auto& l : j.at("layers")) {
      DenseLayer layer;
      layer.inputs = l.at("inputs").get<std::size_t>();
      layer.outputs = l.at("outputs").get<std::size_t>();
      layer.w = l.at("w").get<std::vector<double>>();
      layer.b = l.at("b").get<std::vector<double>>();
      if (layer.w.size() != layer.inputs * layer.outputs || layer.b.size() != layer.outputs ||
          (prev != 0 && layer.inputs != prev))
        throw DataError(path.filename().string() + ": layer shape mismatch");
      prev = layer.outputs;
      m.layers.push_back(std::move(layer));
    }
    if (m.layers.empty() || prev != 1 || m.scaler.dims() != m.n_features() ||
        out.feature_names.size() != m.n_features())
      throw DataError(path.filename().string() + ": network shape mismatch");
    m.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();
    return out;
  });
}

}  // namespace soaccept::learn
