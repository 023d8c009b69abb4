#include "soaccept/importance.hpp"

#include <algorithm>
#include <numeric>

#include "soaccept/error.hpp"
#include "soaccept/parallel.hpp"
#include "soaccept/rng.hpp"

namespace soaccept::learn {

std::vector<double> normalize_weights(std::vector<double> w) {
  if (w.empty()) return w;
  for (auto& v : w) v = std::max(0.0, v);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (total > 0.0) {
    for (auto& v : w) v /= total;
  } else {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
  }
  return w;
}

namespace {

double accuracy_of(const ProbaFn& predict, const Matrix& x, const Labels& y) {
  std::size_t correct = 0;
  for (std::size_t r = 0; r < x.rows(); ++r)
    if (predict_label(predict(x.row(r))) == y[r]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(x.rows());
}

}  // namespace

std::vector<double> permutation_importance(const ProbaFn& predict, const Matrix& x, const Labels& y,
                                           std::size_t repeats, std::uint64_t seed, unsigned threads) {
  if (x.rows() != y.size()) throw DataError("permutation importance: label count differs from row count");
  if (x.rows() == 0) throw DataError("permutation importance: no rows");
  if (repeats == 0) throw ConfigError("permutation importance: repeats must be >= 1");
  const double base = accuracy_of(predict, x, y);
  std::vector<double> drop(x.cols(), 0.0);
  parallel_for(x.cols(), threads, [&](std::size_t c) {
    Matrix shuffled = x;
    auto column = x.column(c);
    double sum = 0.0;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      Rng rng(derive_seed(derive_seed(seed, static_cast<std::uint64_t>(c)), static_cast<std::uint64_t>(rep)));
      rng.shuffle(std::span(column));
      for (std::size_t r = 0; r < x.rows(); ++r) shuffled(r, c) = column[r];
      sum += base - accuracy_of(predict, shuffled, y);
    }
    drop[c] = sum / static_cast<double>(repeats);
  });
  return normalize_weights(std::move(drop));
}

std::vector<ImportanceRow> normalized_importance_report(const ForestModel& forest, const MlpModel& mlp,
                                                        const Matrix& x_test, const Labels& y_test,
                                                        const std::vector<std::string>& names,
                                                        std::size_t repeats, std::uint64_t seed,
                                                        unsigned threads) {
  if (names.size() != forest.n_features || names.size() != mlp.n_features() || names.size() != x_test.cols())
    throw DataError("importance report: feature counts disagree");
  const auto forest_w = normalize_weights(forest.importances);
  const ProbaFn predict = [&mlp](std::span<const double> row) { return mlp_predict_proba(mlp, row); };
  const auto mlp_w = permutation_importance(predict, x_test, y_test, repeats, seed, threads);
  std::vector<ImportanceRow> rows;
  for (std::size_t i = 0; i < names.size(); ++i) rows.push_back({names[i], forest_w[i], mlp_w[i]});
  return rows;
}

}  // namespace soaccept::learn
