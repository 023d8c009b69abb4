#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "soaccept/dump.hpp"
#include "soaccept/mlp.hpp"
#include "soaccept/resample.hpp"
#include "soaccept/search.hpp"
#include "soaccept/select.hpp"
#include "soaccept/split.hpp"

namespace soaccept::config {

// Every key is optional; omitted keys keep the defaults shown.
//
// {
//   "seed": 42,
//   "paths": {"posts": "Posts.xml", "users": "Users.xml", "workdir": "work",
//             "stopwords": null, "polarity_lexicon": null, "keywords": null},
//   "ingest": {"tags_any_of": ["java", "javascript"], "year_start": 2014,
//              "year_end": 2016, "require_accepted": true},
//   "select": {"r_threshold": 0.7, "ig_threshold": 0.4, "k": 3},
//   "split": {"train_fraction": 0.7},
//   "sampler": {"methods": ["smote", "adasyn"], "search_method": "smote",
//               "k": 5, "target_ratio": 1.0, "beta": 1.0},
//   "search": {"enabled": true, "n_iterations": 100, "cv_folds": 4,
//              "n_estimators": [100, ..., 1200], "max_depth": [10, ..., 110],
//              "min_samples_split": [2, 3, 5, 8, 10], "min_samples_leaf": [1, 2, 3, 4],
//              "max_features": ["sqrt"], "bootstrap": [true]},
//   "forest": {"n_estimators": 200, "max_depth": 60, "min_samples_split": 8,
//              "min_samples_leaf": 3, "max_features": "sqrt", "bootstrap": true},
//   "mlp": {"hidden": [64, 64, 32, 32, 16], "learning_rate": 0.01,
//           "batch_size": 32, "epochs": 50},
//   "importance": {"repeats": 5}
// }
//
// Relative paths resolve against the directory holding the config file.
// "forest" is used as-is when search is disabled.
struct RunConfig {
  std::uint64_t seed = 42;
  std::filesystem::path posts = "Posts.xml";
  std::filesystem::path users = "Users.xml";
  std::filesystem::path workdir = "work";
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::filesystem::path> polarity_lexicon;
  std::optional<std::filesystem::path> keywords;

  ingest::IngestFilter ingest;
  select::SelectionParams select;
  learn::SplitSpec split;
  std::vector<resample::Method> samplers{resample::Method::kSmote, resample::Method::kAdasyn};
  resample::Method search_sampler = resample::Method::kSmote;
  resample::ResamplePlan sampler;  // method and seed are filled per use
  bool search_enabled = true;
  learn::SearchSpace search = learn::SearchSpace::defaults();
  learn::RfParams forest = learn::reference_optimum();
  learn::MlpConfig mlp;
  std::size_t importance_repeats = 5;

  // Seeds of the stochastic units, derived from `seed` and a fixed name.
  std::uint64_t stage_seed(std::string_view name) const;
  void validate() const;
};

// The parsed document after --set overrides, before interpretation. Kept
// so stages can hash exactly the settings they consume.
struct LoadedConfig {
  RunConfig run;
  std::string canonical_json;  // sorted keys, no whitespace
  std::string section_json(std::string_view section) const;
};

// Throws ConfigError for unreadable files, bad JSON, unknown keys or values
// of the wrong type. Each override is "dotted.key=value" where value is
// parsed as JSON and falls back to a plain string.
LoadedConfig load_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides);
LoadedConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir,
                          const std::vector<std::string>& overrides);

}  // namespace soaccept::config
