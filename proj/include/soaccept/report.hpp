#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "soaccept/forest.hpp"
#include "soaccept/importance.hpp"
#include "soaccept/metrics.hpp"

namespace soaccept::report {

struct ModelEval {
  std::string model;    // "random_forest" or "mlp"
  std::string sampler;  // "smote", "adasyn" or "none"
  metrics::ConfusionMatrix cm;
  double accuracy = 0.0;
  metrics::Rate precision;
  metrics::Rate recall;
  double mcc = 0.0;
  metrics::RocCurve roc;
  std::optional<double> oob_error;
};

ModelEval evaluate(std::string model, std::string sampler, const Labels& truth, const std::vector<double>& scores);

struct FeatureStat {
  std::string feature;
  double info_gain_bits = 0.0;
  bool retained = false;
  std::string reason;  // empty when retained
};

struct EvalReport {
  std::vector<FeatureStat> selection;
  std::vector<ModelEval> evals;
  std::map<std::string, std::vector<learn::ImportanceRow>> importance;  // by sampler
  std::optional<learn::RfParams> best_params;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::map<std::string, std::size_t> synthetic_rows;  // by sampler
};

// Writes report.md, roc.csv, roc.svg and metrics.json. Output bytes depend
// only on the report contents. Throws DataError when evals is empty.
void emit_report(const EvalReport& report, const std::filesystem::path& out_dir);

std::string render_markdown(const EvalReport& report);
std::string render_roc_csv(const EvalReport& report);
std::string render_roc_svg(const EvalReport& report);
std::string render_metrics_json(const EvalReport& report);

}  // namespace soaccept::report
