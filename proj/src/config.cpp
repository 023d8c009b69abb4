#include "soaccept/config.hpp"

#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "soaccept/error.hpp"
#include "soaccept/rng.hpp"

namespace soaccept::config {

using nlohmann::json;

std::uint64_t RunConfig::stage_seed(std::string_view name) const { return derive_seed(seed, name); }

void RunConfig::validate() const {
  ingest.validate();
  select.validate();
  split.validate();
  sampler.validate();
  if (samplers.empty()) throw ConfigError("sampler.methods must list at least one sampler");
  std::set<resample::Method> unique(samplers.begin(), samplers.end());
  if (unique.size() != samplers.size()) throw ConfigError("sampler.methods lists a sampler twice");
  if (search_enabled) search.validate();
  forest.validate();
  mlp.validate();
  if (importance_repeats < 1) throw ConfigError("importance.repeats must be >= 1");
}

std::string LoadedConfig::section_json(std::string_view section) const {
  const auto j = json::parse(canonical_json);
  const auto it = j.find(std::string(section));
  return it == j.end() ? "null" : it->dump();
}

namespace {

// Allowed keys per section; an empty set marks a leaf value.
const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"", {"seed", "paths", "ingest", "select", "split", "sampler", "search", "forest", "mlp", "importance"}},
      {"paths", {"posts", "users", "workdir", "stopwords", "polarity_lexicon", "keywords"}},
      {"ingest", {"tags_any_of", "year_start", "year_end", "require_accepted"}},
      {"select", {"r_threshold", "ig_threshold", "k"}},
      {"split", {"train_fraction"}},
      {"sampler", {"methods", "search_method", "k", "target_ratio", "beta"}},
      {"search",
       {"enabled", "n_iterations", "cv_folds", "n_estimators", "max_depth", "min_samples_split", "min_samples_leaf",
        "max_features", "bootstrap"}},
      {"forest", {"n_estimators", "max_depth", "min_samples_split", "min_samples_leaf", "max_features", "bootstrap"}},
      {"mlp", {"hidden", "learning_rate", "batch_size", "epochs"}},
      {"importance", {"repeats"}},
  };
  return s;
}

void check_keys(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const auto& s = schema();
  for (const auto& [key, value] : j.items()) {
    if (!s.at("").contains(key)) throw ConfigError("unknown config key '" + key + "'");
    const auto section = s.find(key);
    if (section == s.end()) continue;
    if (!value.is_object()) throw ConfigError("config key '" + key + "' must be an object");
    for (const auto& [sub, _] : value.items())
      if (!section->second.contains(sub)) throw ConfigError("unknown config key '" + key + "." + sub + "'");
  }
}

void apply_override(json& j, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + text + "'");
  const std::string path = text.substr(0, eq);
  const std::string raw = text.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;
  }
  json* node = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("--set key '" + path + "' has an empty component");
    if (!node->is_object()) throw ConfigError("--set key '" + path + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

template <typename T>
T get(const json& section, const char* key, T fallback, const char* where) {
  const auto it = section.find(key);
  if (it == section.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + where + "." + key + "' has the wrong type");
  }
}

std::size_t get_count(const json& section, const char* key, std::size_t fallback, const char* where) {
  const auto it = section.find(key);
  if (it == section.end() || it->is_null()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
    throw ConfigError(std::string("config key '") + where + "." + key + "' must be a non-negative integer");
  return it->get<std::size_t>();
}

std::vector<std::size_t> get_counts(const json& section, const char* key, std::vector<std::size_t> fallback,
                                    const char* where) {
  const auto it = section.find(key);
  if (it == section.end() || it->is_null()) return fallback;
  if (!it->is_array()) throw ConfigError(std::string("config key '") + where + "." + key + "' must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : *it) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      throw ConfigError(std::string("config key '") + where + "." + key + "' must hold non-negative integers");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

learn::MaxFeatures get_max_features(const json& v, const char* where) {
  if (v.is_string()) return learn::MaxFeatures::parse(v.get<std::string>());
  if (v.is_number_integer() && v.get<std::int64_t>() > 0)
    return learn::MaxFeatures{learn::MaxFeatures::Kind::kFixed, v.get<std::size_t>()};
  throw ConfigError(std::string("config key '") + where + ".max_features' must be sqrt, auto, all or an integer");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

RunConfig interpret(const json& j, const std::filesystem::path& base) {
  RunConfig c;
  const json empty = json::object();
  auto section = [&](const char* name) -> const json& {
    const auto it = j.find(name);
    return it == j.end() ? empty : *it;
  };
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
      throw ConfigError("config key 'seed' must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }

  const auto& paths = section("paths");
  c.posts = resolve(base, get<std::string>(paths, "posts", "Posts.xml", "paths"));
  c.users = resolve(base, get<std::string>(paths, "users", "Users.xml", "paths"));
  c.workdir = resolve(base, get<std::string>(paths, "workdir", "work", "paths"));
  for (auto [key, target] : {std::pair{"stopwords", &c.stopwords}, std::pair{"polarity_lexicon", &c.polarity_lexicon},
                             std::pair{"keywords", &c.keywords}}) {
    const auto v = get<std::string>(paths, key, "", "paths");
    if (!v.empty()) *target = resolve(base, v);
  }

  const auto& in = section("ingest");
  if (in.contains("tags_any_of")) {
    const auto tags = get<std::vector<std::string>>(in, "tags_any_of", {}, "ingest");
    c.ingest.tags_any_of = std::set<std::string>(tags.begin(), tags.end());
  } else {
    c.ingest.tags_any_of = {"java", "javascript"};
  }
  c.ingest.year_start = get<int>(in, "year_start", c.ingest.year_start, "ingest");
  c.ingest.year_end = get<int>(in, "year_end", c.ingest.year_end, "ingest");
  c.ingest.require_accepted = get<bool>(in, "require_accepted", c.ingest.require_accepted, "ingest");

  const auto& sel = section("select");
  c.select.r_threshold = get<double>(sel, "r_threshold", c.select.r_threshold, "select");
  c.select.ig_threshold = get<double>(sel, "ig_threshold", c.select.ig_threshold, "select");
  c.select.k = get<int>(sel, "k", c.select.k, "select");
  c.select.seed = c.stage_seed("select");

  c.split.train_fraction = get<double>(section("split"), "train_fraction", c.split.train_fraction, "split");
  c.split.seed = c.stage_seed("split");

  const auto& smp = section("sampler");
  if (smp.contains("methods")) {
    c.samplers.clear();
    for (const auto& name : get<std::vector<std::string>>(smp, "methods", {}, "sampler"))
      c.samplers.push_back(resample::parse_method(name));
  }
  c.search_sampler = resample::parse_method(get<std::string>(smp, "search_method", "smote", "sampler"));
  c.sampler.k = get_count(smp, "k", c.sampler.k, "sampler");
  c.sampler.target_ratio = get<double>(smp, "target_ratio", c.sampler.target_ratio, "sampler");
  c.sampler.beta = get<double>(smp, "beta", c.sampler.beta, "sampler");
  c.sampler.seed = c.stage_seed("sampler");

  const auto& s = section("search");
  c.search_enabled = get<bool>(s, "enabled", true, "search");
  c.search.n_iterations = get_count(s, "n_iterations", c.search.n_iterations, "search");
  c.search.cv_folds = get_count(s, "cv_folds", c.search.cv_folds, "search");
  c.search.n_estimators = get_counts(s, "n_estimators", c.search.n_estimators, "search");
  c.search.max_depth = get_counts(s, "max_depth", c.search.max_depth, "search");
  c.search.min_samples_split = get_counts(s, "min_samples_split", c.search.min_samples_split, "search");
  c.search.min_samples_leaf = get_counts(s, "min_samples_leaf", c.search.min_samples_leaf, "search");
  if (s.contains("max_features")) {
    if (!s["max_features"].is_array()) throw ConfigError("config key 'search.max_features' must be an array");
    c.search.max_features.clear();
    for (const auto& v : s["max_features"]) c.search.max_features.push_back(get_max_features(v, "search"));
  }
  if (s.contains("bootstrap")) {
    c.search.bootstrap.clear();
    for (bool b : get<std::vector<bool>>(s, "bootstrap", {}, "search")) c.search.bootstrap.push_back(b);
  }
  c.search.seed = c.stage_seed("search");

  const auto& f = section("forest");
  c.forest.n_estimators = get_count(f, "n_estimators", c.forest.n_estimators, "forest");
  c.forest.max_depth = get_count(f, "max_depth", c.forest.max_depth, "forest");
  c.forest.min_samples_split = get_count(f, "min_samples_split", c.forest.min_samples_split, "forest");
  c.forest.min_samples_leaf = get_count(f, "min_samples_leaf", c.forest.min_samples_leaf, "forest");
  if (f.contains("max_features")) c.forest.max_features = get_max_features(f["max_features"], "forest");
  c.forest.bootstrap = get<bool>(f, "bootstrap", c.forest.bootstrap, "forest");
  c.forest.seed = c.stage_seed("forest");

  const auto& m = section("mlp");
  c.mlp.hidden = get_counts(m, "hidden", c.mlp.hidden, "mlp");
  c.mlp.learning_rate = get<double>(m, "learning_rate", c.mlp.learning_rate, "mlp");
  c.mlp.batch_size = get_count(m, "batch_size", c.mlp.batch_size, "mlp");
  c.mlp.epochs = get_count(m, "epochs", c.mlp.epochs, "mlp");
  c.mlp.seed = c.stage_seed("mlp");

  c.importance_repeats = get_count(section("importance"), "repeats", c.importance_repeats, "importance");
  c.validate();
  return c;
}

}  // namespace

LoadedConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir,
                          const std::vector<std::string>& overrides) {
  json j;
  try {
    j = json_text.empty() ? json::object() : json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& o : overrides) apply_override(j, o);
  check_keys(j);
  LoadedConfig out;
  out.run = interpret(j, base_dir);
  out.canonical_json = j.dump();
  return out;
}

LoadedConfig load_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides) {
  if (!path) return parse_config("", {}, overrides);
  std::ifstream in(*path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path->string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path->parent_path(), overrides);
}

}  // namespace soaccept::config
