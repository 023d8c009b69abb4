#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "soaccept/forest.hpp"
#include "soaccept/matrix.hpp"
#include "soaccept/mlp.hpp"

namespace soaccept::learn {

using ProbaFn = std::function<double(std::span<const double>)>;

// Mean accuracy drop when one column is shuffled, over `repeats` seeded
// shuffles; negative drops clamp to 0 and the result is normalized to sum
// to 1 (uniform when every drop is 0).
std::vector<double> permutation_importance(const ProbaFn& predict, const Matrix& x, const Labels& y,
                                           std::size_t repeats, std::uint64_t seed, unsigned threads = 1);

// Rescales non-negative weights to sum to 1; uniform when all are 0.
std::vector<double> normalize_weights(std::vector<double> w);

struct ImportanceRow {
  std::string feature;
  double forest = 0.0;
  double mlp = 0.0;
};

// Forest column: impurity importances. MLP column: permutation importance
// on the given (test) rows.
std::vector<ImportanceRow> normalized_importance_report(const ForestModel& forest, const MlpModel& mlp,
                                                        const Matrix& x_test, const Labels& y_test,
                                                        const std::vector<std::string>& names,
                                                        std::size_t repeats, std::uint64_t seed,
                                                        unsigned threads = 1);

}  // namespace soaccept::learn
