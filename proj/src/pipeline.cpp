#include "soaccept/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "soaccept/dataset_io.hpp"
#include "soaccept/dump.hpp"
#include "soaccept/error.hpp"
#include "soaccept/feature_table.hpp"
#include "soaccept/features.hpp"
#include "soaccept/importance.hpp"
#include "soaccept/model_io.hpp"
#include "soaccept/report.hpp"
#include "soaccept/rng.hpp"

namespace soaccept::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDataset = "dataset.jsonl";
constexpr const char* kIngestReport = "ingest_report.json";
constexpr const char* kFeaturesCsv = "features.csv";
constexpr const char* kTfidf = "tfidf.json";
constexpr const char* kFeaturesReport = "features_report.json";
constexpr const char* kSelection = "selection_report.json";
constexpr const char* kSplit = "split.json";
constexpr const char* kSearch = "search.json";
constexpr const char* kMedians = "models/medians.json";
constexpr const char* kReportDir = "report";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string hash_text(std::string_view text) { return hex64(fnv1a64(text)); }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

json read_json_file(const fs::path& path) {
  const auto text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(path.filename().string() + ": " + e.what());
  }
}

void say(const Context& ctx, const std::string& line) {
  if (ctx.log) *ctx.log << line << '\n';
}

const config::RunConfig& cfg(const Context& ctx) { return ctx.config.run; }
const fs::path& workdir(const Context& ctx) { return ctx.config.run.workdir; }

std::string sampler_dir(resample::Method m) { return "models/" + resample::method_name(m); }

json rf_params_json(const learn::RfParams& p) {
  return {{"n_estimators", p.n_estimators},     {"max_depth", p.max_depth},
          {"min_samples_split", p.min_samples_split}, {"min_samples_leaf", p.min_samples_leaf},
          {"max_features", p.max_features.to_string()}, {"bootstrap", p.bootstrap},
          {"seed", p.seed}};
}

// Interpreted settings each stage depends on; their hash goes in the manifest.
json stage_settings(const Context& ctx, const std::string& stage) {
  const auto& c = cfg(ctx);
  if (stage == "ingest") {
    return {{"tags_any_of", c.ingest.tags_any_of},
            {"year_start", c.ingest.year_start},
            {"year_end", c.ingest.year_end},
            {"require_accepted", c.ingest.require_accepted}};
  }
  if (stage == "features") {
    json j = json::object();
    for (auto [key, path] : {std::pair{"stopwords", c.stopwords}, std::pair{"polarity_lexicon", c.polarity_lexicon},
                             std::pair{"keywords", c.keywords}})
      j[key] = path ? hash_file(*path) : "bundled";
    return j;
  }
  if (stage == "select") {
    return {{"r_threshold", c.select.r_threshold},
            {"ig_threshold", c.select.ig_threshold},
            {"k", c.select.k},
            {"seed", c.select.seed}};
  }
  if (stage == "train") {
    json samplers = json::array();
    for (auto m : c.samplers) samplers.push_back(resample::method_name(m));
    json search = nullptr;
    if (c.search_enabled) {
      json mf = json::array();
      for (const auto& m : c.search.max_features) mf.push_back(m.to_string());
      search = {{"n_iterations", c.search.n_iterations},
                {"cv_folds", c.search.cv_folds},
                {"n_estimators", c.search.n_estimators},
                {"max_depth", c.search.max_depth},
                {"min_samples_split", c.search.min_samples_split},
                {"min_samples_leaf", c.search.min_samples_leaf},
                {"max_features", mf},
                {"bootstrap", c.search.bootstrap},
                {"seed", c.search.seed},
                {"sampler", resample::method_name(c.search_sampler)}};
    }
    return {{"split", {{"train_fraction", c.split.train_fraction}, {"seed", c.split.seed}}},
            {"samplers", samplers},
            {"sampler",
             {{"k", c.sampler.k}, {"target_ratio", c.sampler.target_ratio}, {"beta", c.sampler.beta},
              {"seed", c.sampler.seed}}},
            {"search", search},
            {"forest", rf_params_json(c.forest)},
            {"mlp",
             {{"hidden", c.mlp.hidden},
              {"learning_rate", c.mlp.learning_rate},
              {"batch_size", c.mlp.batch_size},
              {"epochs", c.mlp.epochs},
              {"seed", c.mlp.seed}}}};
  }
  if (stage == "evaluate") return {{"importance_repeats", c.importance_repeats}, {"seed", c.stage_seed("importance")}};
  throw ConfigError("unknown stage '" + stage + "'");
}

std::string config_hash(const Context& ctx, const std::string& stage) {
  return hash_text(stage_settings(ctx, stage).dump());
}

fs::path manifest_path(const fs::path& dir, const std::string& stage) { return dir / (stage + ".manifest.json"); }

// Hashes of workdir-relative files.
std::map<std::string, std::string> hash_outputs(const fs::path& dir, const std::vector<std::string>& names) {
  std::map<std::string, std::string> out;
  for (const auto& n : names) out[n] = hash_file(dir / n);
  return out;
}

void write_manifest(const Context& ctx, const std::string& stage, std::map<std::string, std::string> inputs,
                    const std::vector<std::string>& outputs) {
  json j;
  j["v"] = 1;
  j["stage"] = stage;
  j["config_hash"] = config_hash(ctx, stage);
  j["inputs"] = std::move(inputs);
  j["outputs"] = hash_outputs(workdir(ctx), outputs);
  write_text(manifest_path(workdir(ctx), stage), j.dump(2) + "\n");
}

// Checks the predecessor and that it ran with the current settings.
void require_current(const Context& ctx, const std::string& stage) {
  require_stage(workdir(ctx), stage);
  const auto m = read_manifest(workdir(ctx), stage);
  if (m.config_hash != config_hash(ctx, stage))
    throw StageError(stage, "run " + stage + " first: its settings changed since it last ran");
}

void remove_manifest(const Context& ctx, const std::string& stage) {
  std::error_code ec;
  fs::remove(manifest_path(workdir(ctx), stage), ec);
}

features::TextResources load_resources(const Context& ctx) {
  const auto& c = cfg(ctx);
  const auto& bundled = features::TextResources::bundled();
  features::TextResources res{bundled.stop, bundled.lexicon, bundled.keywords};
  if (c.stopwords) res.stop = text::StopList::parse(read_text(*c.stopwords));
  if (c.polarity_lexicon) res.lexicon = features::PolarityLexicon::parse(read_text(*c.polarity_lexicon));
  if (c.keywords) res.keywords = features::KeywordSet::parse(read_text(*c.keywords));
  return res;
}

std::string external_key(const fs::path& p) { return "external:" + p.filename().string(); }

std::vector<std::size_t> read_indices(const json& j, const char* key) {
  return j.at(key).get<std::vector<std::size_t>>();
}

struct TrainInputs {
  features::FeatureTable table;  // retained columns only
  learn::SplitIndices split;
};

TrainInputs load_train_inputs(const Context& ctx) {
  const auto& dir = workdir(ctx);
  TrainInputs in;
  auto full = features::read_features_csv(dir / kFeaturesCsv);
  const auto retained = select::read_retained_features(dir / kSelection);
  if (retained.empty()) throw DataError("selection retained no features");
  in.table = full.select_columns(retained);
  if (fs::exists(dir / kSplit)) {
    const auto j = read_json_file(dir / kSplit);
    try {
      in.split.train = read_indices(j, "train");
      in.split.test = read_indices(j, "test");
    } catch (const json::exception& e) {
      throw DataError(std::string("split.json: ") + e.what());
    }
  }
  return in;
}

template <typename SetT>
SetT take_rows(const features::FeatureTable& t, const std::vector<std::size_t>& rows) {
  SetT out;
  for (auto r : rows) {
    if (r >= t.x.rows()) throw DataError("split index out of range; rerun train");
    out.y.push_back(t.y[r]);
  }
  out.x = t.x.select_rows(rows);
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) break;
    h = fnv1a64(std::string_view(buf.data(), got), h);
  }
  return hex64(h);
}

Manifest read_manifest(const fs::path& dir, const std::string& stage) {
  const auto path = manifest_path(dir, stage);
  if (!fs::exists(path)) throw StageError(stage, "run " + stage + " first: " + path.filename().string() + " not found");
  Manifest m;
  try {
    const auto j = json::parse(read_text(path));
    m.stage = j.at("stage").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
  } catch (const json::exception&) {
    throw StageError(stage, "run " + stage + " first: its manifest is unreadable");
  }
  return m;
}

void require_stage(const fs::path& dir, const std::string& stage) {
  const auto m = read_manifest(dir, stage);
  for (const auto& [name, hash] : m.outputs) {
    if (!fs::exists(dir / name)) throw StageError(stage, "run " + stage + " first: " + name + " is missing");
    if (hash_file(dir / name) != hash)
      throw StageError(stage, "run " + stage + " first: " + name + " changed since it was written");
  }
  for (const auto& [name, hash] : m.inputs) {
    if (name.starts_with("external:")) continue;
    if (!fs::exists(dir / name) || hash_file(dir / name) != hash)
      throw StageError(stage, "run " + stage + " first: its input " + name + " changed since it ran");
  }
}

void cmd_ingest(const Context& ctx) {
  const auto& c = cfg(ctx);
  for (const auto& p : {c.posts, c.users})
    if (!fs::exists(p)) throw ConfigError("input file not found: " + p.string());
  fs::create_directories(workdir(ctx));
  remove_manifest(ctx, "ingest");

  std::ifstream users_in(c.users, std::ios::binary);
  const auto users = ingest::read_users(users_in);
  std::ifstream posts_in(c.posts, std::ios::binary);
  const auto result = ingest::ingest_posts(posts_in, users, c.ingest);

  ingest::write_dataset(workdir(ctx) / kDataset, result.records);
  json report;
  report["v"] = 1;
  report["counts"] = result.report.counts;
  report["users"] = users.size();
  write_text(workdir(ctx) / kIngestReport, report.dump(2) + "\n");
  write_manifest(ctx, "ingest", {{external_key(c.posts), hash_file(c.posts)}, {external_key(c.users), hash_file(c.users)}},
                 {kDataset, kIngestReport});
  say(ctx, "ingest: " + std::to_string(result.records.size()) + " questions, " +
               std::to_string(result.report.get("answers_retained")) + " answers");
}

void cmd_features(const Context& ctx) {
  require_current(ctx, "ingest");
  remove_manifest(ctx, "features");
  const auto& dir = workdir(ctx);
  const auto records = ingest::read_dataset(dir / kDataset);
  const auto resources = load_resources(ctx);
  const auto result = features::extract_matrix(records, resources, ctx.threads);
  if (result.matrix.empty()) throw DataError("no answers survived ingest; nothing to extract");
  features::write_features_csv(dir / kFeaturesCsv, features::to_table(result.matrix));
  features::write_tfidf_json(dir / kTfidf, result.model);
  json report;
  report["v"] = 1;
  report["counts"] = result.report.counts;
  report["vocabulary_size"] = result.model.vocabulary_size();
  report["documents"] = result.model.n_docs();
  write_text(dir / kFeaturesReport, report.dump(2) + "\n");
  write_manifest(ctx, "features", {{kDataset, hash_file(dir / kDataset)}}, {kFeaturesCsv, kTfidf, kFeaturesReport});
  say(ctx, "features: " + std::to_string(result.matrix.size()) + " rows, vocabulary " +
               std::to_string(result.model.vocabulary_size()));
}

void cmd_select(const Context& ctx) {
  require_current(ctx, "features");
  remove_manifest(ctx, "select");
  const auto& dir = workdir(ctx);
  const auto table = features::read_features_csv(dir / kFeaturesCsv);
  const auto report = select::select_features(table.x, table.y, table.names, cfg(ctx).select, ctx.threads);
  select::write_selection_report(dir / kSelection, report);
  if (report.result.retained.empty())
    throw DataError("no feature passed selection (information gain threshold " +
                    std::to_string(cfg(ctx).select.ig_threshold) + " bits); see " + kSelection);
  write_manifest(ctx, "select", {{kFeaturesCsv, hash_file(dir / kFeaturesCsv)}}, {kSelection});
  say(ctx, "select: retained " + std::to_string(report.result.retained.size()) + " of " +
               std::to_string(table.names.size()) + " features");
}

void cmd_train(const Context& ctx) {
  require_current(ctx, "features");
  require_current(ctx, "select");
  remove_manifest(ctx, "train");
  const auto& c = cfg(ctx);
  const auto& dir = workdir(ctx);
  auto in = load_train_inputs(ctx);
  const auto& table = in.table;
  in.split = learn::split_indices(table.x.rows(), c.split);
  const auto train = take_rows<learn::TrainSet>(table, in.split.train);
  std::vector<std::string> outputs{kSplit, kMedians};
  write_text(dir / kSplit, json{{"v", 1}, {"train", in.split.train}, {"test", in.split.test}}.dump() + "\n");

  json medians = json::object();
  for (std::size_t f = 0; f < table.names.size(); ++f) medians[table.names[f]] = median(train.x.column(f));
  write_text(dir / kMedians, json{{"v", 1}, {"medians", medians}}.dump(2) + "\n");

  learn::RfParams params = c.forest;
  if (c.search_enabled) {
    auto plan = c.sampler;
    plan.method = c.search_sampler;
    plan.seed = derive_seed(c.sampler.seed, "search");
    const auto result = learn::random_search(train, c.search, plan, ctx.threads);
    params = result.best;
    params.seed = c.forest.seed;
    json candidates = json::array();
    for (const auto& cand : result.candidates)
      candidates.push_back({{"params", rf_params_json(cand.params)},
                            {"fold_accuracy", cand.fold_accuracy},
                            {"cv_accuracy", cand.cv_accuracy},
                            {"first_draw", cand.first_draw}});
    write_text(dir / kSearch, json{{"v", 1},
                                   {"sampler", resample::method_name(c.search_sampler)},
                                   {"best", rf_params_json(params)},
                                   {"candidates", candidates}}
                                  .dump(2) +
                                  "\n");
    outputs.push_back(kSearch);
    say(ctx, "train: search evaluated " + std::to_string(result.candidates.size()) + " candidates");
  }

  for (auto method : c.samplers) {
    const auto name = resample::method_name(method);
    auto plan = c.sampler;
    plan.method = method;
    plan.seed = derive_seed(c.sampler.seed, name);
    const auto resampled = resample::apply_plan(train, plan, ctx.threads);
    const auto forest = learn::fit_forest(resampled.x, resampled.y, params, ctx.threads);
    auto mlp_config = c.mlp;
    mlp_config.seed = derive_seed(c.mlp.seed, name);
    const auto mlp = learn::fit_mlp(resampled.x, resampled.y, mlp_config);
    const auto sub = sampler_dir(method);
    fs::create_directories(dir / sub);
    learn::write_forest(dir / sub / "model.rf.json", forest, table.names);
    learn::write_mlp(dir / sub / "model.mlp.json", mlp, table.names);
    write_text(dir / sub / "resample.json",
               json{{"v", 1}, {"n_original", resampled.n_original}, {"n_synthetic", resampled.n_synthetic}}.dump(2) +
                   "\n");
    for (const char* f : {"model.rf.json", "model.mlp.json", "resample.json"}) outputs.push_back(sub + "/" + f);
    say(ctx, "train: " + name + " +" + std::to_string(resampled.n_synthetic) + " synthetic rows");
  }
  write_manifest(ctx, "train",
                 {{kFeaturesCsv, hash_file(dir / kFeaturesCsv)}, {kSelection, hash_file(dir / kSelection)}}, outputs);
}

void cmd_evaluate(const Context& ctx) {
  require_current(ctx, "train");
  remove_manifest(ctx, "evaluate");
  const auto& c = cfg(ctx);
  const auto& dir = workdir(ctx);
  const auto in = load_train_inputs(ctx);
  const auto test = take_rows<learn::TestSet>(in.table, in.split.test);

  report::EvalReport rep;
  rep.train_rows = in.split.train.size();
  rep.test_rows = in.split.test.size();

  const auto sel = read_json_file(dir / kSelection);
  try {
    std::map<std::string, std::string> reasons;
    for (const auto& d : sel.at("dropped")) reasons[d.at("feature").get<std::string>()] = d.at("reason").get<std::string>();
    const auto& ig = sel.at("info_gain_bits");
    for (const auto& name : sel.at("correlation").at("names")) {
      const auto n = name.get<std::string>();
      const bool dropped = reasons.contains(n);
      rep.selection.push_back({n, ig.at(n).get<double>(), !dropped, dropped ? reasons[n] : ""});
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("selection_report.json: ") + e.what());
  }

  std::vector<std::string> inputs{kFeaturesCsv, kSelection, kSplit};
  for (auto method : c.samplers) {
    const auto name = resample::method_name(method);
    const auto sub = sampler_dir(method);
    const auto forest = learn::read_forest(dir / sub / "model.rf.json");
    const auto mlp = learn::read_mlp(dir / sub / "model.mlp.json");
    if (forest.feature_names != in.table.names || mlp.feature_names != in.table.names)
      throw StageError("train", "run train first: model features differ from the current selection");
    const auto rf_scores = learn::forest_predict_proba(forest.model, test.x, ctx.threads);
    const auto mlp_scores = learn::mlp_predict_proba(mlp.model, test.x);
    auto rf_eval = report::evaluate("random_forest", name, test.y, rf_scores);
    rf_eval.oob_error = forest.model.oob_error;
    rep.evals.push_back(std::move(rf_eval));
    rep.evals.push_back(report::evaluate("mlp", name, test.y, mlp_scores));
    rep.importance[name] = learn::normalized_importance_report(
        forest.model, mlp.model, test.x, test.y, in.table.names, c.importance_repeats,
        derive_seed(c.stage_seed("importance"), name), ctx.threads);
    const auto rs = read_json_file(dir / sub / "resample.json");
    rep.synthetic_rows[name] = rs.value("n_synthetic", std::size_t{0});
    if (!rep.best_params) rep.best_params = forest.model.params;
    for (const char* f : {"model.rf.json", "model.mlp.json", "resample.json"}) inputs.push_back(sub + "/" + f);
  }
  report::emit_report(rep, dir / kReportDir);
  std::map<std::string, std::string> input_hashes;
  for (const auto& n : inputs) input_hashes[n] = hash_file(dir / n);
  write_manifest(ctx, "evaluate", input_hashes,
                 {std::string(kReportDir) + "/report.md", std::string(kReportDir) + "/roc.csv",
                  std::string(kReportDir) + "/roc.svg", std::string(kReportDir) + "/metrics.json"});
  for (const auto& e : rep.evals)
    say(ctx, "evaluate: " + e.model + "/" + e.sampler + " accuracy " + std::to_string(e.accuracy) + " auc " +
                 std::to_string(e.roc.auc));
}

void cmd_run(const Context& ctx) {
  cmd_ingest(ctx);
  cmd_features(ctx);
  cmd_select(ctx);
  cmd_train(ctx);
  cmd_evaluate(ctx);
}

std::vector<RankedAnswer> rank_answers(const Context& ctx, const std::string& request_json, const std::string& sampler,
                                       const std::string& model) {
  const auto& dir = workdir(ctx);
  require_current(ctx, "train");
  const auto method = resample::parse_method(sampler);
  const auto& samplers = cfg(ctx).samplers;
  if (std::find(samplers.begin(), samplers.end(), method) == samplers.end())
    throw ConfigError("no model was trained with sampler '" + sampler + "'");
  if (model != "rf" && model != "mlp") throw ConfigError("model must be rf or mlp");

  json req;
  try {
    req = json::parse(request_json);
  } catch (const json::exception& e) {
    throw DataError(std::string("rank request is not valid JSON: ") + e.what());
  }

  ingest::QARecord record;
  std::vector<std::string> ids;
  std::vector<std::set<std::string>> missing;
  bool question_ts = false;
  try {
    const auto& q = req.at("question");
    record.question.id = 0;
    record.question.post_type = ingest::PostType::kQuestion;
    record.question.body = q.at("body").get<std::string>();
    if (q.contains("tags")) record.question.tags = q["tags"].get<std::vector<std::string>>();
    if (q.contains("creation_ts")) {
      const auto ts = parse_timestamp(q["creation_ts"].get<std::string>());
      if (!ts) throw DataError("rank request: bad question creation_ts");
      record.question.creation_ts = *ts;
      question_ts = true;
    }
    const auto& answers = req.at("answers");
    if (!answers.is_array() || answers.empty()) throw DataError("rank request has no candidate answers");
    for (std::size_t i = 0; i < answers.size(); ++i) {
      const auto& a = answers[i];
      ingest::AnswerEntry entry;
      entry.post.id = static_cast<std::int64_t>(i + 1);
      entry.post.post_type = ingest::PostType::kAnswer;
      entry.post.parent_id = 0;
      entry.post.body = a.at("body").get<std::string>();
      entry.answerer.id = static_cast<std::int64_t>(i + 1);
      std::set<std::string> miss{"Score", "ViewCount"};
      if (a.contains("creation_ts") && question_ts) {
        const auto ts = parse_timestamp(a["creation_ts"].get<std::string>());
        if (!ts) throw DataError("rank request: bad creation_ts for answer " + std::to_string(i));
        entry.post.creation_ts = *ts;
      } else {
        entry.post.creation_ts = record.question.creation_ts;
        miss.insert("Timelag");
      }
      if (a.contains("user_creation_ts") && a.contains("creation_ts")) {
        const auto ts = parse_timestamp(a["user_creation_ts"].get<std::string>());
        if (!ts) throw DataError("rank request: bad user_creation_ts for answer " + std::to_string(i));
        entry.answerer.creation_ts = *ts;
      } else {
        entry.answerer.creation_ts = entry.post.creation_ts;
        miss.insert("SignUpDateTimeLag");
      }
      if (a.contains("reputation")) {
        entry.answerer.reputation = a["reputation"].get<std::int64_t>();
      } else {
        miss.insert("Reputation");
      }
      if (a.contains("comment_count")) {
        entry.post.comment_count = a["comment_count"].get<std::int64_t>();
      } else {
        miss.insert("CommentCount");
      }
      ids.push_back(a.contains("id") ? (a["id"].is_string() ? a["id"].get<std::string>() : a["id"].dump())
                                     : std::to_string(i));
      missing.push_back(std::move(miss));
      record.answers.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("rank request: ") + e.what());
  }

  const auto tfidf = features::read_tfidf_json(dir / kTfidf);
  const auto resources = load_resources(ctx);
  features::ExtractionReport extraction;
  const std::vector<ingest::QARecord> records{record};
  const auto matrix = features::extract_with_model(records, tfidf, resources, extraction, 1);
  if (matrix.size() != record.answers.size()) throw DataError("rank request: an answer predates the question");

  const auto medians_json = read_json_file(dir / kMedians).at("medians");
  const auto sub = sampler_dir(method);
  std::vector<std::string> names;
  learn::NamedModel<learn::ForestModel> forest;
  learn::NamedModel<learn::MlpModel> mlp;
  if (model == "rf") {
    forest = learn::read_forest(dir / sub / "model.rf.json");
    names = forest.feature_names;
  } else {
    mlp = learn::read_mlp(dir / sub / "model.mlp.json");
    names = mlp.feature_names;
  }

  std::vector<RankedAnswer> out;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    std::vector<double> row;
    RankedAnswer r;
    r.index = i;
    r.id = ids[i];
    for (const auto& name : names) {
      const auto it = std::find(features::kFeatureNames.begin(), features::kFeatureNames.end(), name);
      if (it == features::kFeatureNames.end()) throw DataError("model uses unknown feature '" + name + "'");
      const auto f = static_cast<std::size_t>(it - features::kFeatureNames.begin());
      if (missing[i].contains(name)) {
        row.push_back(medians_json.at(name).get<double>());
        r.imputed.push_back(name);
      } else {
        row.push_back(matrix.rows[i].values[f]);
      }
    }
    r.probability = model == "rf" ? learn::forest_predict_proba(forest.model, row)
                                  : learn::mlp_predict_proba(mlp.model, row);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedAnswer& a, const RankedAnswer& b) { return a.probability > b.probability; });
  return out;
}

std::string ranking_json(const std::vector<RankedAnswer>& ranking, const std::string& sampler,
                         const std::string& model) {
  json list = json::array();
  for (std::size_t i = 0; i < ranking.size(); ++i)
    list.push_back({{"rank", i + 1},
                    {"index", ranking[i].index},
                    {"id", ranking[i].id},
                    {"probability", ranking[i].probability},
                    {"imputed", ranking[i].imputed}});
  return json{{"sampler", sampler}, {"model", model}, {"ranking", list}}.dump(2) + "\n";
}

}  // namespace soaccept::pipeline
