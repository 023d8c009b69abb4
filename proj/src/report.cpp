#include "soaccept/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "soaccept/error.hpp"
#include "soaccept/search.hpp"

namespace soaccept::report {

using nlohmann::json;

namespace {

// Values reported for the full 2014-2016 Java/JavaScript corpus. They are
// shown next to the run's own numbers and never compared against them.
struct ReferenceEval {
  const char* model;
  const char* sampler;
  double accuracy;
  double precision;
  double recall;
  double mcc;  // NaN when not reported
};

constexpr ReferenceEval kReferenceEvals[] = {
    {"random_forest", "smote", 0.717, 0.8825, 0.7329, 0.39},
    {"random_forest", "adasyn", 0.706, 0.8504, 0.7107, NAN},
    {"mlp", "smote", 0.709, 0.8729, 0.7215, 0.34},
    {"mlp", "adasyn", 0.698, 0.8313, 0.6945, NAN},
};

struct ReferenceFeature {
  const char* feature;
  double info_gain;
  double forest;  // NaN for features dropped before modelling
  double mlp;
};

constexpr ReferenceFeature kReferenceFeatures[] = {
    {"Timelag", 0.873, 0.162, 0.152},          {"URLCount", 0.432, 0.044, 0.021},
    {"CommentCount", 0.563, 0.043, 0.008},     {"Reputation", 0.893, 0.143, 0.149},
    {"TextPolarity", 0.567, 0.065, 0.007},     {"AnswerCount", 0.445, 0.023, 0.015},
    {"ViewCount", 0.563, 0.025, 0.057},        {"Score", 0.456, 0.052, 0.047},
    {"NumberOfCodeLine", 0.612, 0.087, 0.023}, {"NumberOfSentence", 0.654, 0.054, 0.076},
    {"TextualSimilarity", 0.534, 0.005, 0.024}, {"Codelength", 0.456, 0.234, 0.153},
    {"TFAnswerCode", 0.579, 0.064, 0.043},     {"TFAnswerText", 0.467, 0.124, 0.133},
    {"SignUpDateTimeLag", 0.234, NAN, NAN},    {"NumberOfWords", 0.345, NAN, NAN},
};

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "-";
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string percent(double v) { return fixed(100.0 * v, 2); }

std::string rate_cell(const metrics::Rate& r) { return r.undefined ? "0.00 (undefined)" : percent(r.value); }

std::string display_model(const std::string& model) {
  if (model == "random_forest") return "Random forest";
  if (model == "mlp") return "Neural network";
  return model;
}

const char* curve_color(const std::string& sampler) {
  if (sampler == "smote") return "#1f77b4";
  if (sampler == "adasyn") return "#2ca02c";
  return "#ff7f0e";
}

json params_json(const learn::RfParams& p) {
  return {{"n_estimators", p.n_estimators},   {"max_depth", p.max_depth},
          {"min_samples_split", p.min_samples_split}, {"min_samples_leaf", p.min_samples_leaf},
          {"max_features", p.max_features.to_string()}, {"bootstrap", p.bootstrap}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace

ModelEval evaluate(std::string model, std::string sampler, const Labels& truth, const std::vector<double>& scores) {
  ModelEval e;
  e.model = std::move(model);
  e.sampler = std::move(sampler);
  e.cm = metrics::confusion(truth, metrics::threshold_labels(scores));
  e.accuracy = metrics::accuracy(e.cm);
  e.precision = metrics::precision(e.cm);
  e.recall = metrics::recall(e.cm);
  e.mcc = metrics::mcc(e.cm);
  e.roc = metrics::roc(truth, scores);
  return e;
}

std::string render_markdown(const EvalReport& r) {
  std::ostringstream md;
  md << "# Accepted-answer prediction report\n\n";
  md << "Metrics are computed on the held-out test split (" << r.test_rows << " rows; " << r.train_rows
     << " training rows before resampling). Rates are shown as percentages.\n\n";
  for (const auto& [sampler, n] : r.synthetic_rows)
    md << "- " << sampler << ": " << n << " synthetic training rows\n";
  if (!r.synthetic_rows.empty()) md << '\n';

  md << "## Information gain and selection\n\n";
  md << "| Feature | Information gain (bits) | Decision |\n|---|---:|---|\n";
  for (const auto& f : r.selection)
    md << "| " << f.feature << " | " << fixed(f.info_gain_bits, 3) << " | " << (f.retained ? "retained" : f.reason)
       << " |\n";

  md << "\n## Test-split evaluation\n\n";
  md << "| Model | Sampler | Accuracy | Precision | Recall | MCC | AUC | OOB error | TP | FP | TN | FN |\n";
  md << "|---|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& e : r.evals)
    md << "| " << display_model(e.model) << " | " << e.sampler << " | " << percent(e.accuracy) << " | "
       << rate_cell(e.precision) << " | " << rate_cell(e.recall) << " | " << fixed(e.mcc, 3) << " | "
       << fixed(e.roc.auc, 3) << " | " << (e.oob_error ? percent(*e.oob_error) : "-") << " | " << e.cm.tp << " | "
       << e.cm.fp << " | " << e.cm.tn << " | " << e.cm.fn << " |\n";

  for (const auto& [sampler, rows] : r.importance) {
    md << "\n## Feature weights (" << sampler << ")\n\n";
    md << "| Feature | Random forest | Neural network |\n|---|---:|---:|\n";
    for (const auto& row : rows)
      md << "| " << row.feature << " | " << fixed(row.forest, 3) << " | " << fixed(row.mlp, 3) << " |\n";
  }

  if (r.best_params) {
    const auto& p = *r.best_params;
    md << "\n## Random-forest search\n\n";
    md << "Selected: n_estimators " << p.n_estimators << ", max_depth " << p.max_depth << ", min_samples_split "
       << p.min_samples_split << ", min_samples_leaf " << p.min_samples_leaf << ", max_features "
       << p.max_features.to_string() << ", bootstrap " << (p.bootstrap ? "true" : "false") << ".\n";
  }

  md << "\n## Full-corpus reference\n\n";
  md << "Reference figures for the full 2014-2016 corpus (249,588 answers). They are not expected to match a "
        "run on other data.\n\n";
  md << "| Model | Sampler | Accuracy | Precision | Recall | MCC |\n|---|---|---:|---:|---:|---:|\n";
  for (const auto& e : kReferenceEvals)
    md << "| " << display_model(e.model) << " | " << e.sampler << " | " << percent(e.accuracy) << " | "
       << percent(e.precision) << " | " << percent(e.recall) << " | " << fixed(e.mcc, 2) << " |\n";
  md << "\n| Feature | Information gain | Random forest | Neural network |\n|---|---:|---:|---:|\n";
  for (const auto& f : kReferenceFeatures)
    md << "| " << f.feature << " | " << fixed(f.info_gain, 3) << " | " << fixed(f.forest, 3) << " | "
       << fixed(f.mlp, 3) << " |\n";
  const auto ref = learn::reference_optimum();
  md << "\nReference search optimum: n_estimators " << ref.n_estimators << ", max_depth " << ref.max_depth
     << ", min_samples_split " << ref.min_samples_split << ", min_samples_leaf " << ref.min_samples_leaf
     << ", max_features " << ref.max_features.to_string() << ".\n";
  return md.str();
}

std::string render_roc_csv(const EvalReport& r) {
  std::ostringstream csv;
  csv << "model,sampler,fpr,tpr,threshold\n";
  char buf[128];
  for (const auto& e : r.evals) {
    for (const auto& p : e.roc.points) {
      std::string threshold = "inf";
      if (std::isfinite(p.threshold)) {
        std::snprintf(buf, sizeof buf, "%.17g", p.threshold);
        threshold = buf;
      }
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", p.fpr, p.tpr);
      csv << e.model << ',' << e.sampler << ',' << buf << ',' << threshold << '\n';
    }
  }
  return csv.str();
}

std::string render_roc_svg(const EvalReport& r) {
  constexpr double kLeft = 60.0;
  constexpr double kTop = 20.0;
  constexpr double kSize = 400.0;
  auto px = [&](double fpr) { return fixed(kLeft + fpr * kSize, 2); };
  auto py = [&](double tpr) { return fixed(kTop + (1.0 - tpr) * kSize, 2); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
  svg << "<rect x=\"" << px(0) << "\" y=\"" << py(1) << "\" width=\"" << fixed(kSize, 2) << "\" height=\""
      << fixed(kSize, 2) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = t / 5.0;
    svg << "<text x=\"" << px(v) << "\" y=\"" << fixed(kTop + kSize + 16, 2) << "\" text-anchor=\"middle\">"
        << fixed(v, 1) << "</text>\n";
    svg << "<text x=\"" << fixed(kLeft - 6, 2) << "\" y=\"" << py(v) << "\" text-anchor=\"end\" "
        << "dominant-baseline=\"middle\">" << fixed(v, 1) << "</text>\n";
  }
  svg << "<text x=\"" << px(0.5) << "\" y=\"" << fixed(kTop + kSize + 34, 2)
      << "\" text-anchor=\"middle\">False positive rate</text>\n";
  svg << "<text x=\"16\" y=\"" << py(0.5) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << py(0.5)
      << ")\">True positive rate</text>\n";
  svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\"" << py(1)
      << "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";

  double legend_y = kTop + 10;
  for (const auto& e : r.evals) {
    if (e.model != "random_forest") continue;
    svg << "<polyline fill=\"none\" stroke=\"" << curve_color(e.sampler) << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < e.roc.points.size(); ++i) {
      if (i > 0) svg << ' ';
      svg << px(e.roc.points[i].fpr) << ',' << py(e.roc.points[i].tpr);
    }
    svg << "\"/>\n";
    svg << "<line x1=\"476\" y1=\"" << fixed(legend_y, 2) << "\" x2=\"500\" y2=\"" << fixed(legend_y, 2)
        << "\" stroke=\"" << curve_color(e.sampler) << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"506\" y=\"" << fixed(legend_y, 2) << "\" dominant-baseline=\"middle\">" << e.sampler
        << " (AUC " << fixed(e.roc.auc, 3) << ")</text>\n";
    legend_y += 18;
  }
  svg << "<line x1=\"476\" y1=\"" << fixed(legend_y, 2) << "\" x2=\"500\" y2=\"" << fixed(legend_y, 2)
      << "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";
  svg << "<text x=\"506\" y=\"" << fixed(legend_y, 2) << "\" dominant-baseline=\"middle\">chance</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string render_metrics_json(const EvalReport& r) {
  json j;
  j["v"] = 1;
  j["split"] = "test";
  j["train_rows"] = r.train_rows;
  j["test_rows"] = r.test_rows;
  j["synthetic_rows"] = r.synthetic_rows;
  json evals = json::array();
  for (const auto& e : r.evals) {
    evals.push_back({{"model", e.model},
                     {"sampler", e.sampler},
                     {"confusion", {{"tp", e.cm.tp}, {"fp", e.cm.fp}, {"tn", e.cm.tn}, {"fn", e.cm.fn}}},
                     {"accuracy", e.accuracy},
                     {"precision", e.precision.value},
                     {"precision_undefined", e.precision.undefined},
                     {"recall", e.recall.value},
                     {"recall_undefined", e.recall.undefined},
                     {"mcc", e.mcc},
                     {"auc", e.roc.auc},
                     {"oob_error", e.oob_error ? json(*e.oob_error) : json(nullptr)}});
  }
  j["evaluations"] = std::move(evals);
  json selection = json::array();
  for (const auto& f : r.selection)
    selection.push_back(
        {{"feature", f.feature}, {"info_gain_bits", f.info_gain_bits}, {"retained", f.retained}, {"reason", f.reason}});
  j["selection"] = std::move(selection);
  json importance = json::object();
  for (const auto& [sampler, rows] : r.importance) {
    json list = json::array();
    for (const auto& row : rows) list.push_back({{"feature", row.feature}, {"forest", row.forest}, {"mlp", row.mlp}});
    importance[sampler] = std::move(list);
  }
  j["importance"] = std::move(importance);
  j["best_params"] = r.best_params ? params_json(*r.best_params) : json(nullptr);

  json reference;
  json ref_evals = json::array();
  for (const auto& e : kReferenceEvals)
    ref_evals.push_back({{"model", e.model},
                         {"sampler", e.sampler},
                         {"accuracy", e.accuracy},
                         {"precision", e.precision},
                         {"recall", e.recall},
                         {"mcc", finite_or_null(e.mcc)}});
  reference["evaluations"] = std::move(ref_evals);
  json ref_features = json::array();
  for (const auto& f : kReferenceFeatures)
    ref_features.push_back({{"feature", f.feature},
                            {"info_gain", f.info_gain},
                            {"forest", finite_or_null(f.forest)},
                            {"mlp", finite_or_null(f.mlp)}});
  reference["features"] = std::move(ref_features);
  reference["search_optimum"] = params_json(learn::reference_optimum());
  j["full_corpus_reference"] = std::move(reference);
  return j.dump(2) + "\n";
}

void emit_report(const EvalReport& report, const std::filesystem::path& out_dir) {
  if (report.evals.empty()) throw DataError("report is incomplete: no model evaluations");
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "report.md", render_markdown(report));
  write_file(out_dir / "roc.csv", render_roc_csv(report));
  write_file(out_dir / "roc.svg", render_roc_svg(report));
  write_file(out_dir / "metrics.json", render_metrics_json(report));
}

}  // namespace soaccept::report
