#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "soaccept/forest.hpp"
#include "soaccept/mlp.hpp"

namespace soaccept::learn {

inline constexpr int kModelSchemaVersion = 1;

template <typename Model>
struct NamedModel {
  Model model;
  std::vector<std::string> feature_names;
};

// model.rf.json:
//   {"v":1, "kind":"random_forest", "feature_names":[...], "params":{...},
//    "oob_error":x|null, "importances":[...],
//    "trees":[{"nodes":[[feature, threshold, left, right, p1, n_samples,
//                        impurity_decrease], ...]}, ...]}
// Doubles are written with 17 significant digits, so loading reproduces
// predictions bit for bit.
void write_forest(const std::filesystem::path& path, const ForestModel& model,
                  const std::vector<std::string>& feature_names);
NamedModel<ForestModel> read_forest(const std::filesystem::path& path);

// model.mlp.json:
//   {"v":1, "kind":"mlp", "feature_names":[...], "config":{...},
//    "scaler":{"mean":[...], "sd":[...]},
//    "layers":[{"inputs":n, "outputs":m, "w":[...], "b":[...]}, ...],
//    "epoch_loss":[...]}
void write_mlp(const std::filesystem::path& path, const MlpModel& model, const std::vector<std::string>& feature_names);
NamedModel<MlpModel> read_mlp(const std::filesystem::path& path);

}  // namespace soaccept::learn
