#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "porter_vocabulary.hpp"
#include "soaccept/features.hpp"
#include "soaccept/forest.hpp"
#include "soaccept/metrics.hpp"
#include "soaccept/mlp.hpp"
#include "soaccept/porter.hpp"
#include "soaccept/resample.hpp"
#include "soaccept/rng.hpp"
#include "soaccept/select.hpp"
#include "soaccept/split.hpp"
#include "soaccept/tfidf.hpp"

namespace soaccept::test {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double shift = 0.0) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.normal() + shift;
  return m;
}

// Brute-force weights keyed by term, straight from the definitions.
std::map<std::string, double> oracle_weights(const std::vector<std::vector<std::string>>& corpus,
                                             const std::vector<std::string>& doc) {
  std::map<std::string, int> df;
  for (const auto& d : corpus) {
    std::set<std::string> seen(d.begin(), d.end());
    for (const auto& t : seen) ++df[t];
  }
  std::map<std::string, int> tf;
  for (const auto& t : doc) ++tf[t];
  int max_tf = 0;
  for (const auto& [t, n] : tf) max_tf = std::max(max_tf, n);
  std::map<std::string, double> w;
  for (const auto& [t, n] : tf) {
    if (!df.contains(t)) continue;
    const double idf = std::log(static_cast<double>(corpus.size()) / df[t]);
    w[t] = (0.5 + 0.5 * n / max_tf) * idf;
  }
  return w;
}

double oracle_cosine(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (const auto& [t, v] : a) {
    na += v * v;
    if (auto it = b.find(t); it != b.end()) dot += v * it->second;
  }
  for (const auto& [t, v] : b) nb += v * v;
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// k nearest rows of `pool` to `query` excluding index `self`, brute force.
std::vector<std::size_t> knn(const Matrix& pool, std::span<const double> query, std::size_t self, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t j = 0; j < pool.rows(); ++j) {
    if (j == self) continue;
    double s = 0;
    for (std::size_t c = 0; c < pool.cols(); ++c) s += (pool(j, c) - query[c]) * (pool(j, c) - query[c]);
    d.emplace_back(s, j);
  }
  std::sort(d.begin(), d.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k && i < d.size(); ++i) out.push_back(d[i].second);
  return out;
}

Matrix zscore(const Matrix& x, const Matrix& reference) {
  Matrix z(x.rows(), x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double mean = 0;
    for (std::size_t r = 0; r < reference.rows(); ++r) mean += reference(r, c);
    mean /= static_cast<double>(reference.rows());
    double var = 0;
    for (std::size_t r = 0; r < reference.rows(); ++r) var += (reference(r, c) - mean) * (reference(r, c) - mean);
    const double sd = std::sqrt(var / static_cast<double>(reference.rows()));
    for (std::size_t r = 0; r < x.rows(); ++r) z(r, c) = sd > 0 ? (x(r, c) - mean) / sd : 0.0;
  }
  return z;
}

// Smallest distance from s to a segment x_i -> x_j with j among i's k
// nearest minority neighbours, and whether its parameter lies in [0, 1].
double segment_residual(std::span<const double> s, const Matrix& zmin,
                        const std::vector<std::vector<std::size_t>>& neighbours) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < zmin.rows(); ++i) {
    for (auto j : neighbours[i]) {
      double dot = 0, len2 = 0;
      for (std::size_t c = 0; c < zmin.cols(); ++c) {
        const double e = zmin(j, c) - zmin(i, c);
        dot += (s[c] - zmin(i, c)) * e;
        len2 += e * e;
      }
      const double u = len2 > 0 ? dot / len2 : 0.0;
      if (u < -1e-12 || u > 1 + 1e-12) continue;
      double res = 0;
      for (std::size_t c = 0; c < zmin.cols(); ++c) {
        const double p = zmin(i, c) + u * (zmin(j, c) - zmin(i, c));
        res += (s[c] - p) * (s[c] - p);
      }
      best = std::min(best, std::sqrt(res));
    }
  }
  return best;
}

// Loss of the network in extended precision, written from the definition.
long double oracle_loss(const learn::MlpModel& m, const Matrix& z, const Labels& y) {
  long double total = 0;
  for (std::size_t r = 0; r < z.rows(); ++r) {
    std::vector<long double> a(z.row(r).begin(), z.row(r).end());
    long double logit = 0;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
      const auto& L = m.layers[l];
      std::vector<long double> next(L.outputs);
      for (std::size_t o = 0; o < L.outputs; ++o) {
        long double s = L.b[o];
        for (std::size_t i = 0; i < L.inputs; ++i) s += static_cast<long double>(L.w[o * L.inputs + i]) * a[i];
        next[o] = s;
      }
      if (l + 1 == m.layers.size()) {
        logit = next[0];
      } else {
        for (auto& v : next) v = 1.0L / (1.0L + std::exp(-v));
      }
      a = std::move(next);
    }
    const long double p = 1.0L / (1.0L + std::exp(-logit));
    total -= y[r] == 1 ? std::log(p) : std::log1p(-p);
  }
  return total / static_cast<long double>(z.rows());
}

double oracle_auc(const Labels& y, const std::vector<double>& s) {
  double concordant = 0;
  std::int64_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 1) ++pos; else ++neg;
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0) continue;
      if (s[i] > s[j]) concordant += 1.0;
      else if (s[i] == s[j]) concordant += 0.5;
    }
  }
  return concordant / (static_cast<double>(pos) * static_cast<double>(neg));
}

}  // namespace

Planted planted_dataset(std::size_t n, std::size_t noise, std::uint64_t seed) {
  Rng rng(seed);
  Planted p;
  p.x = Matrix(n, 2 + noise);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < 2 + noise; ++c) p.x(r, c) = rng.normal();
    p.y.push_back(p.x(r, 0) + p.x(r, 1) + 0.5 * rng.normal() > 0 ? 1 : 0);
  }
  return p;
}

Outcome tfidf_oracle() {
  const auto start = Clock::now();
  const std::vector<std::string> vocab{"java", "list", "map", "stream", "loop", "null", "array", "thread"};
  Rng rng(1);
  double worst = 0;
  std::size_t corpora = 0;
  for (; corpora < 300; ++corpora) {
    const std::size_t n_docs = 1 + rng.uniform_index(5);
    std::vector<std::vector<std::string>> corpus(n_docs);
    std::vector<text::TokenStream> streams(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) {
      const std::size_t len = rng.uniform_index(13);
      for (std::size_t t = 0; t < len; ++t) corpus[d].push_back(vocab[rng.uniform_index(vocab.size())]);
      streams[d].tokens = corpus[d];
    }
    const auto model = features::fit_tfidf(streams);
    std::vector<std::vector<std::string>> docs = corpus;
    docs.push_back({"java", "unseen", "unseen", "map", "other"});  // out-of-vocabulary terms
    std::vector<features::SparseVector> vecs;
    std::vector<std::map<std::string, double>> oracle;
    for (const auto& d : docs) {
      vecs.push_back(features::tfidf_vector(model, text::TokenStream{d}));
      oracle.push_back(oracle_weights(corpus, d));
      std::map<std::string, double> got;
      for (auto [idx, w] : vecs.back()) got[model.terms()[idx]] = w;
      for (const auto& t : vocab) {
        const double a = got.contains(t) ? got[t] : 0.0;
        const double b = oracle.back().contains(t) ? oracle.back()[t] : 0.0;
        worst = std::max(worst, std::abs(a - b));
      }
    }
    for (std::size_t i = 0; i < docs.size(); ++i)
      for (std::size_t j = 0; j < docs.size(); ++j)
        worst = std::max(worst, std::abs(features::cosine_similarity(vecs[i], vecs[j]) -
                                         oracle_cosine(oracle[i], oracle[j])));
  }
  const double secs = seconds_since(start);
  return {worst < 1e-9 && secs < 1.0,
          std::to_string(corpora) + " corpora, max |delta| " + fmt("%.3g, %.3f s", worst, secs)};
}

Outcome porter_vocabulary() {
  const auto start = Clock::now();
  std::size_t agree = 0;
  std::string first_miss;
  for (const auto& [word, stem] : kPorterVocabulary) {
    if (text::porter_stem(word) == stem) {
      ++agree;
    } else if (first_miss.empty()) {
      first_miss = std::string(word) + "->" + text::porter_stem(word) + " (want " + std::string(stem) + ")";
    }
  }
  const bool coming = text::porter_stem("coming") == "come";
  const double secs = seconds_since(start);
  std::string detail = std::to_string(agree) + "/" + std::to_string(kPorterVocabulary.size()) + " words agree, coming->" +
                       text::porter_stem("coming") + fmt(", %.3f s", secs);
  if (!first_miss.empty()) detail += ", first miss " + first_miss;
  return {agree == kPorterVocabulary.size() && kPorterVocabulary.size() >= 100 && coming && secs < 1.0, detail};
}

Outcome smote_geometry() {
  Rng rng(3);
  double worst = 0;
  bool ratio_ok = true, layout_ok = true;
  for (int cloud = 0; cloud < 10; ++cloud) {
    const std::size_t d = 1 + rng.uniform_index(5);
    const std::size_t n_min = 8 + rng.uniform_index(43);  // 8..50
    const std::size_t n_maj = n_min + 1 + rng.uniform_index(60);
    const double ratio = cloud % 3 == 2 ? 0.8 : 1.0;
    learn::TrainSet train;
    train.x = random_matrix(rng, n_maj, d, 1.0);
    train.y.assign(n_maj, 0);
    const auto mins = random_matrix(rng, n_min, d, -1.0);
    for (std::size_t r = 0; r < n_min; ++r) {
      train.x.append_row(mins.row(r));
      train.y.push_back(1);
    }
    resample::ResamplePlan plan;
    plan.method = resample::Method::kSmote;
    plan.k = 5;
    plan.target_ratio = ratio;
    plan.seed = 100 + static_cast<std::uint64_t>(cloud);
    const auto out = resample::apply_plan(train, plan);

    const auto target = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n_maj)));
    const auto minority_after = static_cast<std::size_t>(std::count(out.y.begin(), out.y.end(), 1));
    ratio_ok &= minority_after == std::max(target, n_min);
    for (std::size_t r = 0; r < train.x.rows(); ++r)
      layout_ok &= std::equal(train.x.row(r).begin(), train.x.row(r).end(), out.x.row(r).begin()) &&
                   out.y[r] == train.y[r];

    const auto zmin = zscore(mins, train.x);
    std::vector<std::vector<std::size_t>> neighbours(n_min);
    for (std::size_t i = 0; i < n_min; ++i) neighbours[i] = knn(zmin, zmin.row(i), i, plan.k);
    std::vector<std::size_t> synth_rows;
    for (std::size_t r = train.x.rows(); r < out.x.rows(); ++r) {
      layout_ok &= out.y[r] == 1;
      synth_rows.push_back(r);
    }
    const auto zs = zscore(out.x.select_rows(synth_rows), train.x);
    for (std::size_t s = 0; s < zs.rows(); ++s) worst = std::max(worst, segment_residual(zs.row(s), zmin, neighbours));
  }
  return {worst < 1e-9 && ratio_ok && layout_ok,
          fmt("10 clouds, max colinearity residual %.3g", worst) + (ratio_ok ? ", ratios exact" : ", ratio mismatch") +
              (layout_ok ? "" : ", originals or labels altered")};
}

Outcome adasyn_allocation_bounds() {
  Rng rng(4);
  double worst_share = 0, worst_density = 0;
  bool sum_ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 1 + rng.uniform_index(5);
    const std::size_t n_min = 6 + rng.uniform_index(30);
    const std::size_t n_maj = n_min + 5 + rng.uniform_index(80);
    const auto zmin = random_matrix(rng, n_min, d, -0.7);
    const auto zmaj = random_matrix(rng, n_maj, d, 0.7);
    const std::size_t k = 5;
    const double budget = static_cast<double>(n_maj - n_min);
    const auto alloc = resample::adasyn_allocation(zmin, zmaj, k, budget);

    Matrix pool = zmin;
    for (std::size_t r = 0; r < n_maj; ++r) pool.append_row(zmaj.row(r));
    std::vector<double> share(n_min);
    double total = 0;
    for (std::size_t i = 0; i < n_min; ++i) {
      const auto nn = knn(pool, pool.row(i), i, k);
      share[i] = static_cast<double>(std::count_if(nn.begin(), nn.end(), [&](auto j) { return j >= n_min; })) /
                 static_cast<double>(k);
      total += share[i];
    }
    std::size_t sum = 0;
    for (std::size_t i = 0; i < n_min; ++i) {
      const double r_hat = total > 0 ? share[i] / total : 1.0 / static_cast<double>(n_min);
      worst_density = std::max(worst_density, std::abs(alloc.density[i] - r_hat));
      worst_share = std::max(worst_share, std::abs(static_cast<double>(alloc.counts[i]) - r_hat * budget));
      sum += alloc.counts[i];
    }
    sum_ok &= std::abs(static_cast<double>(sum) - budget) <= static_cast<double>(n_min);
  }
  Rng rng0(5);
  const auto zmin = random_matrix(rng0, 12, 3, -0.5);
  const auto zmaj = random_matrix(rng0, 40, 3, 0.5);
  const auto none = resample::adasyn(zmin, zmaj, 5, 0.0, 9);
  const bool beta_zero = none.rows() == 0;
  return {worst_share <= 1.0 && worst_density < 1e-12 && sum_ok && beta_zero,
          fmt("10 trials, max |g_i - r_i G| %.3g, max density delta %.3g", worst_share, worst_density) +
              (sum_ok ? ", sums within bound" : ", sum out of bound") +
              (beta_zero ? ", beta=0 -> 0 rows" : ", beta=0 produced rows")};
}

Outcome mutual_information_cases() {
  const auto start = Clock::now();
  Rng rng(6);
  const std::size_t n = 2000;
  std::vector<double> x(n), noise(n);
  std::vector<int> dep(n), indep(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.normal();
    noise[i] = rng.normal();
    dep[i] = x[i] > 0 ? 1 : 0;
    indep[i] = rng.uniform() < 0.5 ? 1 : 0;
  }
  const double mi_dep = select::mutual_information(x, dep, 3, 11);
  const double mi_indep = select::mutual_information(noise, indep, 3, 12);
  const double secs = seconds_since(start);
  return {std::abs(mi_dep - 1.0) <= 0.1 && mi_indep < 0.05 && secs < 5.0,
          fmt("dependent %.4f bits, independent %.4f bits, %.2f s", mi_dep, mi_indep, secs)};
}

Outcome selection_replay() {
  std::vector<std::string> names(features::kFeatureNames.begin(), features::kFeatureNames.end());
  const std::map<std::string, double> table1{
      {"Timelag", 0.873},          {"URLCount", 0.432},          {"CommentCount", 0.563},  {"Reputation", 0.893},
      {"TextPolarity", 0.567},     {"AnswerCount", 0.445},       {"ViewCount", 0.563},     {"Score", 0.456},
      {"NumberOfCodeLine", 0.612}, {"NumberOfSentence", 0.654},  {"TextualSimilarity", 0.534},
      {"Codelength", 0.456},       {"TFAnswerCode", 0.579},      {"TFAnswerText", 0.467},
      {"SignUpDateTimeLag", 0.234}, {"NumberOfWords", 0.345}};
  std::vector<double> ig;
  for (const auto& n : names) ig.push_back(table1.at(n));
  Matrix r(names.size(), names.size());
  for (std::size_t i = 0; i < names.size(); ++i) r(i, i) = 1.0;
  auto set = [&](const std::string& a, const std::string& b, double v) {
    const auto i = static_cast<std::size_t>(std::find(names.begin(), names.end(), a) - names.begin());
    const auto j = static_cast<std::size_t>(std::find(names.begin(), names.end(), b) - names.begin());
    r(i, j) = r(j, i) = v;
  };
  set("NumberOfWords", "NumberOfSentence", 0.82);
  set("SignUpDateTimeLag", "Reputation", 0.76);
  const auto result = select::select_from_statistics(names, r, ig, 0.7, 0.4);

  const std::vector<std::string> table2{"Timelag",          "URLCount",         "CommentCount",      "Reputation",
                                        "TextPolarity",     "AnswerCount",      "ViewCount",         "Score",
                                        "NumberOfCodeLine", "NumberOfSentence", "TextualSimilarity", "Codelength",
                                        "TFAnswerCode",     "TFAnswerText"};
  const std::vector<select::Dropped> expected_drops{{"NumberOfWords", "correlated-with:NumberOfSentence"},
                                                    {"SignUpDateTimeLag", "correlated-with:Reputation"}};
  std::string detail = "retained " + std::to_string(result.retained.size()) + ", dropped";
  for (const auto& d : result.dropped) detail += " " + d.feature + "(" + d.reason + ")";
  return {result.retained == table2 && result.dropped == expected_drops, detail};
}

Outcome mlp_gradient_check() {
  learn::MlpConfig config;
  config.hidden = {8, 8, 8, 8, 8};
  config.seed = 7;
  auto model = learn::init_mlp(4, config);
  Rng rng(8);
  for (auto& layer : model.layers)
    for (auto& b : layer.b) b = 0.3 * rng.normal();
  const auto z = random_matrix(rng, 16, 4);
  Labels y;
  for (int i = 0; i < 16; ++i) y.push_back(rng.uniform() < 0.5 ? 1 : 0);

  const auto grads = learn::mlp_gradients(model, z, y);
  const long double h = 1e-6L;
  double worst = 0;
  std::size_t params = 0;
  auto check = [&](double& param, double analytic) {
    const double saved = param;
    // Perturb in extended precision, then evaluate the extended-precision oracle.
    param = static_cast<double>(saved + h);
    const long double up_step = static_cast<long double>(param) - saved;
    const long double up = oracle_loss(model, z, y);
    param = static_cast<double>(saved - h);
    const long double down_step = saved - static_cast<long double>(param);
    const long double down = oracle_loss(model, z, y);
    param = saved;
    const auto numeric = static_cast<double>((up - down) / (up_step + down_step));
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-12});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
    ++params;
  };
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    for (std::size_t i = 0; i < model.layers[l].w.size(); ++i) check(model.layers[l].w[i], grads.dw[l][i]);
    for (std::size_t i = 0; i < model.layers[l].b.size(); ++i) check(model.layers[l].b[i], grads.db[l][i]);
  }
  const double loss_delta = std::abs(learn::mlp_loss(model, z, y) - static_cast<double>(oracle_loss(model, z, y)));
  return {worst < 1e-4 && loss_delta < 1e-12,
          std::to_string(params) + " parameters, max relative error " + fmt("%.3g, loss delta %.3g", worst, loss_delta)};
}

Outcome forest_sanity() {
  const auto start = Clock::now();
  learn::SplitSpec spec;
  spec.seed = 21;
  const auto data = planted_dataset(2000, 8, 20);
  const auto split = learn::split_train_test(data.x, data.y, spec);
  learn::RfParams params;
  params.n_estimators = 100;
  params.seed = 22;
  const auto model = learn::fit_forest(split.train.x, split.train.y, params);
  const auto scores = learn::forest_predict_proba(model, split.test.x);
  const double auc = metrics::roc(split.test.y, scores).auc;
  const double held_out_error = 1.0 - metrics::accuracy(metrics::confusion(split.test.y, metrics::threshold_labels(scores)));
  const double oob = model.oob_error.value_or(-1.0);
  const bool oob_ok = model.oob_error && std::abs(oob - held_out_error) <= 0.05;

  int top_two = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto d = planted_dataset(2000, 8, 1000 + s);
    learn::RfParams p;
    p.n_estimators = 50;
    p.seed = 2000 + s;
    const auto m = learn::fit_forest(d.x, d.y, p);
    std::vector<std::size_t> order(m.importances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return m.importances[a] > m.importances[b]; });
    const std::set<std::size_t> top{order[0], order[1]};
    if (top == std::set<std::size_t>{0, 1}) ++top_two;
  }
  const double secs = seconds_since(start);
  return {auc >= 0.90 && oob_ok && top_two >= 19 && secs < 60.0,
          fmt("held-out AUC %.4f, OOB error %.4f vs held-out %.4f", auc, oob, held_out_error) + ", planted top-2 in " +
              std::to_string(top_two) + "/20 seeds" + fmt(", %.1f s", secs)};
}

Outcome metrics_oracles() {
  Rng rng(9);
  double worst = 0;
  int curves = 0;
  while (curves < 300) {
    const std::size_t n = 2 + rng.uniform_index(199);
    Labels y;
    std::vector<double> s;
    for (std::size_t i = 0; i < n; ++i) {
      y.push_back(rng.uniform() < 0.4 ? 1 : 0);
      s.push_back(std::round(rng.uniform() * 20.0) / 20.0);  // coarse grid forces ties
    }
    const auto pos = std::count(y.begin(), y.end(), 1);
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(n)) continue;
    worst = std::max(worst, std::abs(metrics::roc(y, s).auc - oracle_auc(y, s)));
    ++curves;
  }

  struct Case {
    Labels truth, pred;
    double acc, prec, rec, mcc;
  };
  // tp 3, fp 1, tn 3, fn 1; tp 2, tn 2; tp 1, fp 1, tn 1, fn 1; tp 3, fp 1, tn 4, fn 2.
  const std::vector<Case> cases{
      {{1, 1, 1, 0, 0, 0, 0, 1}, {1, 1, 1, 1, 0, 0, 0, 0}, 6.0 / 8.0, 3.0 / 4.0, 3.0 / 4.0, 0.5},
      {{1, 1, 0, 0}, {1, 1, 0, 0}, 1.0, 1.0, 1.0, 1.0},
      {{1, 1, 0, 0}, {1, 0, 1, 0}, 0.5, 0.5, 0.5, 0.0},
      {{1, 1, 1, 1, 1, 0, 0, 0, 0, 0}, {1, 1, 1, 0, 0, 1, 0, 0, 0, 0}, 7.0 / 10.0, 3.0 / 4.0, 3.0 / 5.0,
       10.0 / std::sqrt(600.0)},
  };
  bool exact = true;
  for (const auto& c : cases) {
    const auto cm = metrics::confusion(c.truth, c.pred);
    exact &= metrics::accuracy(cm) == c.acc && metrics::precision(cm).value == c.prec &&
             metrics::recall(cm).value == c.rec && metrics::mcc(cm) == c.mcc;
  }
  const auto degenerate = metrics::confusion({1, 1, 0}, {1, 1, 1});
  exact &= metrics::mcc(degenerate) == 0.0 && metrics::precision(metrics::confusion({0, 1}, {0, 0})).undefined;
  return {worst < 1e-12 && exact,
          fmt("%.0f ROC curves, max |AUC - concordance| %.3g", curves, worst) +
              (exact ? ", confusion-matrix cases exact" : ", confusion-matrix mismatch")};
}

std::vector<std::pair<std::string, std::string>> read_tree(const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out.emplace_back(fs::relative(entry.path(), root).generic_string(), s.str());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome end_to_end(const fs::path& binary, const fs::path& fixture_dir, const fs::path& scratch) {
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  const unsigned threads[] = {1, 1, 8};
  std::vector<std::vector<std::pair<std::string, std::string>>> trees;
  double slowest = 0;
  for (int i = 0; i < 3; ++i) {
    const auto out = scratch / ("run" + std::to_string(i));
    const std::string cmd = "\"" + binary.string() + "\" run --quiet --config \"" + (fixture_dir / "run.json").string() +
                            "\" --out \"" + out.string() + "\" --threads " + std::to_string(threads[i]);
    const auto start = Clock::now();
    const int rc = std::system(cmd.c_str());
    const double secs = seconds_since(start);
    slowest = std::max(slowest, secs);
    if (rc != 0) return {false, "run " + std::to_string(i) + " exited with status " + std::to_string(rc)};
    if (!fs::exists(out / "report" / "report.md")) return {false, "run " + std::to_string(i) + " wrote no report"};
    trees.push_back(read_tree(out));
  }
  const bool same_serial = trees[0] == trees[1];
  const bool same_threads = trees[0] == trees[2];
  std::string detail = std::to_string(trees[0].size()) + " files; repeat " +
                       (same_serial ? "identical" : "differs") + "; threads 1 vs 8 " +
                       (same_threads ? "identical" : "differs") + fmt("; slowest run %.2f s", slowest);
  return {same_serial && same_threads && slowest < 120.0, detail};
}

}  // namespace soaccept::test
