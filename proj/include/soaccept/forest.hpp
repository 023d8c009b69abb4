#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "soaccept/matrix.hpp"
#include "soaccept/tree.hpp"

namespace soaccept::learn {

struct RfParams {
  std::size_t n_estimators = 100;
  MaxFeatures max_features;
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  bool bootstrap = true;
  std::uint64_t seed = 0;

  void validate() const;
  TreeParams tree_params() const { return {max_depth, min_samples_split, min_samples_leaf, max_features}; }
  friend bool operator==(const RfParams&, const RfParams&) = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::size_t n_features = 0;
  // Misclassification rate over rows that were out of bag for at least one
  // tree; empty without bootstrap or when no row was ever out of bag.
  std::optional<double> oob_error;
  std::vector<double> importances;  // sums to 1
  RfParams params;
};

// Rows drawn with replacement for tree `index`, reproducible from the seed.
std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t tree_seed);

// Tree i uses seed derive_seed(params.seed, i), so results do not depend on
// the thread count. Throws DataError when y has a single class.
ForestModel fit_forest(const Matrix& x, const Labels& y, const RfParams& params, unsigned threads = 1);

// Mean leaf probability of the accepted class.
double forest_predict_proba(const ForestModel& model, std::span<const double> x);
std::vector<double> forest_predict_proba(const ForestModel& model, const Matrix& x, unsigned threads = 1);

// Accepted when p >= 0.5.
inline int predict_label(double p) { return p >= 0.5 ? 1 : 0; }

}  // namespace soaccept::learn
