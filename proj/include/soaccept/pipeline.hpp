#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "soaccept/config.hpp"

namespace soaccept::pipeline {

// Stage order; each stage reads its predecessors' files from the workdir.
inline constexpr const char* kStages[] = {"ingest", "features", "select", "train", "evaluate"};

struct Context {
  config::LoadedConfig config;
  unsigned threads = 1;  // caps workers; never changes results
  std::ostream* log = nullptr;
};

// Written as <stage>.manifest.json next to the outputs. Paths are relative
// to the workdir (inputs outside it are recorded by file name), and every
// file is identified by the FNV-1a hash of its bytes.
struct Manifest {
  std::string stage;
  std::string config_hash;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;
};

std::string hash_file(const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& workdir, const std::string& stage);

// Throws StageError naming `stage` when its manifest is missing, an output
// no longer matches its hash, or a workdir input changed since it ran.
void require_stage(const std::filesystem::path& workdir, const std::string& stage);

void cmd_ingest(const Context& ctx);
void cmd_features(const Context& ctx);
void cmd_select(const Context& ctx);
void cmd_train(const Context& ctx);
void cmd_evaluate(const Context& ctx);
void cmd_run(const Context& ctx);

// Request: {"question": {"body": ..., "tags": [...], "creation_ts": ...},
//           "answers": [{"id": ..., "body": ..., "creation_ts": ...,
//                        "reputation": ..., "user_creation_ts": ...,
//                        "comment_count": ...}, ...]}
// Only the bodies are required. Features the request cannot supply, and
// always Score and ViewCount, take the training medians and are listed
// under "imputed" for each answer.
struct RankedAnswer {
  std::size_t index = 0;  // position in the request
  std::string id;
  double probability = 0.0;
  std::vector<std::string> imputed;
};

std::vector<RankedAnswer> rank_answers(const Context& ctx, const std::string& request_json,
                                       const std::string& sampler, const std::string& model);
std::string ranking_json(const std::vector<RankedAnswer>& ranking, const std::string& sampler,
                         const std::string& model);

}  // namespace soaccept::pipeline
