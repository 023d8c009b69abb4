#include "soaccept/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "soaccept/error.hpp"
#include "soaccept/rng.hpp"

namespace soaccept::learn {

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train_fraction must be in (0, 1)");
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  spec.validate();
  if (n < 2) throw DataError("split needs at least 2 rows");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  rng.shuffle(std::span(order));
  auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.train_fraction));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

Split split_train_test(const Matrix& x, const Labels& y, const SplitSpec& spec) {
  if (x.rows() != y.size()) throw DataError("split: label count differs from row count");
  Split out;
  out.indices = split_indices(x.rows(), spec);
  out.train.x = x.select_rows(out.indices.train);
  out.test.x = x.select_rows(out.indices.test);
  for (auto i : out.indices.train) out.train.y.push_back(y[i]);
  for (auto i : out.indices.test) out.test.y.push_back(y[i]);
  return out;
}

std::vector<std::size_t> stratified_folds(const Labels& y, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  std::vector<std::size_t> fold(y.size(), 0);
  Rng rng(seed);
  std::size_t offset = 0;
  for (int cls : {0, 1}) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] == cls) rows.push_back(i);
    rng.shuffle(std::span(rows));
    // Continue dealing where the previous class stopped so fold sizes stay
    // within one of each other.
    for (std::size_t j = 0; j < rows.size(); ++j) fold[rows[j]] = (offset + j) % folds;
    offset = (offset + rows.size()) % folds;
  }
  return fold;
}

}  // namespace soaccept::learn
