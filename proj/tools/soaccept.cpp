#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "soaccept/config.hpp"
#include "soaccept/error.hpp"
#include "soaccept/pipeline.hpp"

namespace fs = std::filesystem;
using namespace soaccept;

namespace {

struct Options {
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::optional<fs::path> out;
  std::optional<fs::path> stopwords;
  std::vector<std::string> set;
  std::optional<std::string> sampler;
  std::optional<std::size_t> k;
  std::optional<double> ratio;
  std::optional<double> beta;
  bool quiet = false;

  fs::path request;
  std::string model = "rf";
};

void add_common(CLI::App* cmd, Options& o, bool sampler_selects_model) {
  cmd->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed (overrides the config)");
  cmd->add_option("--threads", o.threads, "worker cap; results do not depend on it")->check(CLI::Range(1u, 1024u));
  cmd->add_option("--out", o.out, "working directory for stage artifacts");
  cmd->add_option("--stopwords", o.stopwords, "stop-word list, one word per line")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.set, "override a config key, e.g. --set search.n_iterations=20");
  cmd->add_flag("--quiet", o.quiet, "suppress progress lines");
  if (sampler_selects_model) {
    cmd->add_option("--sampler", o.sampler, "which trained sampler's model to use")->default_str("smote");
  } else {
    cmd->add_option("--sampler", o.sampler, "train a single sampler: smote, adasyn or none");
    cmd->add_option("--k", o.k, "sampler neighbour count");
    cmd->add_option("--ratio", o.ratio, "minority/majority target ratio");
    cmd->add_option("--beta", o.beta, "ADASYN balance level");
  }
}

std::vector<std::string> overrides(const Options& o, bool sampler_selects_model) {
  auto out = o.set;
  if (o.seed) out.push_back("seed=" + std::to_string(*o.seed));
  if (o.stopwords) out.push_back("paths.stopwords=" + nlohmann::json(fs::absolute(*o.stopwords).string()).dump());
  if (o.out) out.push_back("paths.workdir=" + nlohmann::json(fs::absolute(*o.out).string()).dump());
  if (!sampler_selects_model) {
    if (o.sampler) {
      out.push_back("sampler.methods=" + nlohmann::json::array({*o.sampler}).dump());
      if (*o.sampler != "none") out.push_back("sampler.search_method=" + nlohmann::json(*o.sampler).dump());
    }
    if (o.k) out.push_back("sampler.k=" + std::to_string(*o.k));
    if (o.ratio) out.push_back("sampler.target_ratio=" + nlohmann::json(*o.ratio).dump());
    if (o.beta) out.push_back("sampler.beta=" + nlohmann::json(*o.beta).dump());
  }
  return out;
}

std::string read_request(const fs::path& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read request file " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predict acceptance of Stack Overflow answers from a data dump"};
  app.require_subcommand(1);
  Options o;

  const std::vector<std::pair<std::string, void (*)(const pipeline::Context&)>> stages{
      {"ingest", pipeline::cmd_ingest},     {"features", pipeline::cmd_features}, {"select", pipeline::cmd_select},
      {"train", pipeline::cmd_train},       {"evaluate", pipeline::cmd_evaluate}, {"run", pipeline::cmd_run}};
  const std::map<std::string, std::string> help{
      {"ingest", "parse Posts.xml and Users.xml into the question/answer dataset"},
      {"features", "extract the 16 answer features"},
      {"select", "drop correlated and low-information features"},
      {"train", "split, resample, search and fit the classifiers"},
      {"evaluate", "score the test split and write the report"},
      {"run", "run every stage in order"}};
  std::map<std::string, CLI::App*> commands;
  for (const auto& [name, fn] : stages) {
    auto* cmd = app.add_subcommand(name, help.at(name));
    add_common(cmd, o, false);
    commands[name] = cmd;
  }
  auto* rank = app.add_subcommand("rank", "order candidate answers by predicted acceptance");
  add_common(rank, o, true);
  rank->add_option("--request", o.request, "request JSON file, or - for stdin")->required();
  rank->add_option("--model", o.model, "rf or mlp")->check(CLI::IsMember({"rf", "mlp"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const bool ranking = rank->parsed();
    pipeline::Context ctx{config::load_config(o.config, overrides(o, ranking)), o.threads,
                          o.quiet ? nullptr : &std::cerr};
    if (ranking) {
      const auto sampler = o.sampler.value_or("smote");
      const auto result = pipeline::rank_answers(ctx, read_request(o.request), sampler, o.model);
      std::cout << pipeline::ranking_json(result, sampler, o.model);
      return 0;
    }
    for (const auto& [name, fn] : stages)
      if (commands[name]->parsed()) fn(ctx);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const StageError& e) {
    std::cerr << "stage error: " << e.what() << '\n';
    return 4;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
