#include "soaccept/forest.hpp"

#include <algorithm>
#include <numeric>

#include "soaccept/error.hpp"
#include "soaccept/parallel.hpp"
#include "soaccept/rng.hpp"

namespace soaccept::learn {

void RfParams::validate() const {
  if (n_estimators < 1) throw ConfigError("n_estimators must be >= 1");
  if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
  if (min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
}

std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t tree_seed) {
  Rng rng(derive_seed(tree_seed, "bootstrap"));
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = static_cast<std::size_t>(rng.uniform_index(n));
  return rows;
}

ForestModel fit_forest(const Matrix& x, const Labels& y, const RfParams& params, unsigned threads) {
  params.validate();
  if (x.rows() != y.size()) throw DataError("fit_forest: label count differs from row count");
  const std::size_t n = x.rows();
  const auto positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  if (n == 0 || positives == 0 || positives == n) throw DataError("fit_forest: labels contain a single class");

  ForestModel model;
  model.params = params;
  model.n_features = x.cols();
  model.trees.resize(params.n_estimators);
  const auto tree_params = params.tree_params();
  parallel_for(params.n_estimators, threads, [&](std::size_t t) {
    const auto seed = derive_seed(params.seed, static_cast<std::uint64_t>(t));
    std::vector<std::size_t> rows;
    if (params.bootstrap) {
      rows = bootstrap_rows(n, seed);
    } else {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    Rng rng(derive_seed(seed, "features"));
    model.trees[t] = fit_tree(x, y, rows, tree_params, rng);
  });

  if (params.bootstrap) {
    std::vector<double> sum(n, 0.0);
    std::vector<std::uint32_t> votes(n, 0);
    std::vector<char> in_bag(n);
    for (std::size_t t = 0; t < params.n_estimators; ++t) {
      std::fill(in_bag.begin(), in_bag.end(), 0);
      for (auto r : bootstrap_rows(n, derive_seed(params.seed, static_cast<std::uint64_t>(t)))) in_bag[r] = 1;
      for (std::size_t r = 0; r < n; ++r) {
        if (in_bag[r]) continue;
        sum[r] += model.trees[t].predict_proba(x.row(r));
        ++votes[r];
      }
    }
    std::size_t counted = 0;
    std::size_t wrong = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (votes[r] == 0) continue;
      ++counted;
      if (predict_label(sum[r] / votes[r]) != y[r]) ++wrong;
    }
    if (counted > 0) model.oob_error = static_cast<double>(wrong) / static_cast<double>(counted);
  }

  model.importances.assign(x.cols(), 0.0);
  for (const auto& tree : model.trees) {
    std::vector<double> imp(x.cols(), 0.0);
    double total = 0.0;
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      imp[static_cast<std::size_t>(node.feature)] += node.impurity_decrease;
      total += node.impurity_decrease;
    }
    if (total <= 0.0) continue;
    for (std::size_t f = 0; f < imp.size(); ++f) model.importances[f] += imp[f] / total;
  }
  const double total = std::accumulate(model.importances.begin(), model.importances.end(), 0.0);
  if (total > 0.0) {
    for (auto& v : model.importances) v /= total;
  } else {
    std::fill(model.importances.begin(), model.importances.end(), 1.0 / static_cast<double>(x.cols()));
  }
  return model;
}

double forest_predict_proba(const ForestModel& model, std::span<const double> x) {
  if (x.size() != model.n_features) throw DataError("forest: feature count mismatch");
  if (model.trees.empty()) throw DataError("forest: model has no trees");
  double s = 0.0;
  for (const auto& tree : model.trees) s += tree.predict_proba(x);
  return s / static_cast<double>(model.trees.size());
}

std::vector<double> forest_predict_proba(const ForestModel& model, const Matrix& x, unsigned threads) {
  std::vector<double> out(x.rows());
  parallel_for(x.rows(), threads, [&](std::size_t r) { out[r] = forest_predict_proba(model, x.row(r)); });
  return out;
}

}  // namespace soaccept::learn
