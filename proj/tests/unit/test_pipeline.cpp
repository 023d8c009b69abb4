#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sys/wait.h>

#include "criteria.hpp"
#include "soaccept/config.hpp"
#include "soaccept/error.hpp"
#include "soaccept/pipeline.hpp"
#include "test_paths.hpp"

using namespace soaccept;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("soaccept_pipeline_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// The fixture configuration, trimmed to one sampler and a short search.
pipeline::Context fixture_context(const fs::path& workdir, std::vector<std::string> extra = {}) {
  std::vector<std::string> overrides{"paths.workdir=" + json(workdir.string()).dump(),
                                     "sampler.methods=[\"smote\"]", "search.n_iterations=2",
                                     "forest.n_estimators=20", "mlp.epochs=10"};
  overrides.insert(overrides.end(), extra.begin(), extra.end());
  pipeline::Context ctx;
  ctx.config = config::load_config(test::fixture_dir() / "run.json", overrides);
  return ctx;
}

// One fully trained workdir shared by the tests that only read it.
const fs::path& trained_workdir() {
  static const fs::path dir = [] {
    const auto d = scratch("trained");
    pipeline::cmd_run(fixture_context(d));
    return d;
  }();
  return dir;
}

std::string stage_error_text(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const StageError& e) {
    return e.what();
  }
  return "";
}

int exit_code(const std::string& args) {
  const std::string cmd = "\"" + test::cli_binary().string() + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json answer(const std::string& id, const std::string& body, std::int64_t reputation, const std::string& ts) {
  return {{"id", id},
          {"body", body},
          {"reputation", reputation},
          {"creation_ts", ts},
          {"user_creation_ts", "2012-01-01T00:00:00.000"},
          {"comment_count", 2}};
}

json question() {
  return {{"body", "<p>How do I sort a java list of strings by length in a stream?</p>"},
          {"tags", {"java"}},
          {"creation_ts", "2015-06-01T10:00:00.000"}};
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = config::parse_config(R"({"seed": 7, "select": {"ig_threshold": 0.1}})", "/data/cfg", {});
  CHECK(c.run.seed == 7);
  CHECK(c.run.select.ig_threshold == 0.1);
  CHECK(c.run.select.r_threshold == 0.7);
  CHECK(c.run.posts == fs::path("/data/cfg/Posts.xml"));
  CHECK(c.run.workdir == fs::path("/data/cfg/work"));

  CHECK_THROWS_AS(config::parse_config(R"({"sede": 7})", "/", {}), ConfigError);
  CHECK_THROWS_AS(config::parse_config(R"({"select": {"ig": 1}})", "/", {}), ConfigError);
  CHECK_THROWS_AS(config::parse_config(R"({"seed": "seven"})", "/", {}), ConfigError);
  CHECK_THROWS_AS(config::parse_config("{", "/", {}), ConfigError);
  CHECK_THROWS_AS(config::parse_config(R"({"sampler": {"methods": ["smoke"]}})", "/", {}), ConfigError);
}

TEST_CASE("config overrides") {
  const auto c = config::parse_config("{}", "/base",
                                      {"seed=9", "mlp.hidden=[4,2]", "paths.posts=/abs/P.xml", "search.enabled=false"});
  CHECK(c.run.seed == 9);
  CHECK(c.run.mlp.hidden == std::vector<std::size_t>{4, 2});
  CHECK(c.run.posts == fs::path("/abs/P.xml"));
  CHECK_FALSE(c.run.search_enabled);
  CHECK_THROWS_AS(config::parse_config("{}", "/", {"nokey=1"}), ConfigError);
  CHECK_THROWS_AS(config::parse_config("{}", "/", {"seed"}), ConfigError);
  CHECK(config::parse_config("{}", "/", {"seed=3"}).canonical_json ==
        config::parse_config(R"({"seed":3})", "/", {}).canonical_json);
}

TEST_CASE("stage seeds depend on the master seed and the stage name") {
  config::RunConfig a, b;
  b.seed = 43;
  CHECK(a.stage_seed("split") != a.stage_seed("select"));
  CHECK(a.stage_seed("split") != b.stage_seed("split"));
  CHECK(a.stage_seed("split") == config::RunConfig{}.stage_seed("split"));
}

TEST_CASE("stages refuse to run before their predecessors") {
  const auto dir = scratch("order");
  const auto ctx = fixture_context(dir);
  const auto msg = stage_error_text([&] { pipeline::cmd_train(ctx); });
  CHECK(msg.find("run features first") != std::string::npos);
  CHECK(stage_error_text([&] { pipeline::cmd_evaluate(ctx); }).find("run train first") != std::string::npos);
  pipeline::cmd_ingest(ctx);
  CHECK(stage_error_text([&] { pipeline::cmd_select(ctx); }).find("run features first") != std::string::npos);
  CHECK_THROWS_AS(pipeline::rank_answers(ctx, "{}", "smote", "rf"), StageError);
}

TEST_CASE("edited artifacts and changed settings make a stage stale") {
  const auto dir = scratch("stale");
  const auto ctx = fixture_context(dir);
  pipeline::cmd_ingest(ctx);
  pipeline::cmd_features(ctx);
  pipeline::cmd_select(ctx);

  {
    std::ofstream out(dir / "features.csv", std::ios::app);
    out << "\n";
  }
  CHECK(stage_error_text([&] { pipeline::cmd_train(ctx); }).find("run features first") != std::string::npos);

  // Regenerating the same bytes makes the downstream stage current again.
  pipeline::cmd_features(ctx);
  CHECK_NOTHROW(pipeline::require_stage(dir, "select"));

  const auto changed = fixture_context(dir, {"select.ig_threshold=0.03"});
  CHECK(stage_error_text([&] { pipeline::cmd_train(changed); }).find("run select first") != std::string::npos);
  // Features are still current under the new select settings.
  CHECK_NOTHROW(pipeline::cmd_select(changed));
}

TEST_CASE("rerunning one stage reproduces its outputs byte for byte") {
  const auto& dir = trained_workdir();
  const auto before = test::read_tree(dir);
  const auto ctx = fixture_context(dir);

  fs::remove_all(dir / "report");
  pipeline::cmd_evaluate(ctx);
  CHECK(test::read_tree(dir) == before);

  fs::remove_all(dir / "models");
  pipeline::cmd_train(ctx);
  pipeline::cmd_evaluate(ctx);
  CHECK(test::read_tree(dir) == before);

  auto threaded = fixture_context(dir);
  threaded.threads = 4;
  pipeline::cmd_select(threaded);
  pipeline::cmd_train(threaded);
  pipeline::cmd_evaluate(threaded);
  CHECK(test::read_tree(dir) == before);
}

TEST_CASE("manifests record hashes of every output") {
  const auto& dir = trained_workdir();
  for (const char* stage : pipeline::kStages) {
    const auto m = pipeline::read_manifest(dir, stage);
    CHECK(m.stage == stage);
    CHECK_FALSE(m.outputs.empty());
    for (const auto& [name, hash] : m.outputs) CHECK(pipeline::hash_file(dir / name) == hash);
  }
}

TEST_CASE("rank orders candidates and reports imputed features") {
  const auto ctx = fixture_context(trained_workdir());
  const std::string strong =
      "<p>Use a comparator on the java list: sort the strings by length with a stream. This works and is simple.</p>"
      "<pre><code>list.stream()\n  .sorted(Comparator.comparingInt(String::length))\n"
      "  .collect(Collectors.toList());\nreturn list;\n</code></pre>"
      "<p>See <a href=\"https://docs.oracle.com/javase/8/docs/api/\">the docs</a>.</p>";
  const std::string weak = "<p>no idea, maybe try something else</p>";

  json req{{"question", question()},
           {"answers",
            {answer("weak", weak, 3, "2015-06-09T10:00:00.000"), answer("strong", strong, 25000, "2015-06-01T10:20:00.000")}}};
  for (const char* model : {"rf", "mlp"}) {
    const auto ranking = pipeline::rank_answers(ctx, req.dump(), "smote", model);
    REQUIRE(ranking.size() == 2);
    CHECK(ranking[0].probability >= ranking[1].probability);
    for (const auto& r : ranking) CHECK((r.probability >= 0.0 && r.probability <= 1.0));
    if (std::string(model) == "rf") CHECK(ranking[0].id == "strong");
  }

  json single{{"question", {{"body", "<p>java question</p>"}}}, {"answers", {{{"body", "<p>answer</p>"}}}}};
  const auto one = pipeline::rank_answers(ctx, single.dump(), "smote", "rf");
  REQUIRE(one.size() == 1);
  CHECK(one[0].index == 0);
  const auto& imputed = one[0].imputed;
  for (const auto& name : imputed) CHECK(name != "NumberOfCodeLine");
  const auto out = json::parse(pipeline::ranking_json(one, "smote", "rf"));
  CHECK(out.dump().find("imputed") != std::string::npos);
}

TEST_CASE("rank keeps input order for identical candidates") {
  const auto ctx = fixture_context(trained_workdir());
  const auto a = answer("first", "<p>same answer text for java</p>", 100, "2015-06-01T12:00:00.000");
  auto b = a;
  b["id"] = "second";
  auto c = a;
  c["id"] = "third";
  json req{{"question", question()}, {"answers", {a, b, c}}};
  const auto ranking = pipeline::rank_answers(ctx, req.dump(), "smote", "mlp");
  REQUIRE(ranking.size() == 3);
  CHECK(ranking[0].id == "first");
  CHECK(ranking[1].id == "second");
  CHECK(ranking[2].id == "third");
  CHECK(ranking[0].probability == ranking[2].probability);
}

TEST_CASE("rank rejects bad requests") {
  const auto ctx = fixture_context(trained_workdir());
  json empty{{"question", question()}, {"answers", json::array()}};
  CHECK_THROWS_AS(pipeline::rank_answers(ctx, empty.dump(), "smote", "rf"), DataError);
  CHECK_THROWS_AS(pipeline::rank_answers(ctx, "not json", "smote", "rf"), DataError);
  json early{{"question", question()}, {"answers", {answer("x", "<p>a</p>", 5, "2015-05-01T00:00:00.000")}}};
  CHECK_THROWS_AS(pipeline::rank_answers(ctx, early.dump(), "smote", "rf"), DataError);
  json ok{{"question", question()}, {"answers", {answer("x", "<p>a</p>", 5, "2015-07-01T00:00:00.000")}}};
  CHECK_THROWS_AS(pipeline::rank_answers(ctx, ok.dump(), "adasyn", "rf"), ConfigError);
  CHECK_THROWS_AS(pipeline::rank_answers(ctx, ok.dump(), "smote", "svm"), ConfigError);
}

TEST_CASE("cli exit codes") {
  const auto dir = scratch("cli");
  const auto cfg = (test::fixture_dir() / "run.json").string();
  const std::string base = "--config \"" + cfg + "\" --out \"" + (dir / "work").string() + "\" --quiet";
  CHECK(exit_code("--help") == 0);
  CHECK(exit_code("frobnicate") == 2);
  CHECK(exit_code("ingest --config /nonexistent/run.json") == 2);
  CHECK(exit_code("ingest " + base + " --set nokey=1") == 2);
  CHECK(exit_code("features " + base + " --stopwords /nonexistent/stop.txt") == 2);
  CHECK(exit_code("train " + base) == 4);
  CHECK(exit_code("ingest " + base) == 0);

  {
    std::ofstream bad(dir / "Posts.xml");
    bad << "<posts>\n  <row Id=\"1\" PostTypeId=\"1\"\n";
  }
  std::ofstream(dir / "Users.xml") << "<users>\n</users>\n";
  const std::string broken = "ingest " + base + " --set paths.posts=" + json((dir / "Posts.xml").string()).dump() +
                             " --set paths.users=" + json((dir / "Users.xml").string()).dump();
  CHECK(exit_code(broken) == 3);
}
