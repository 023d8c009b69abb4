#pragma once

#include <cstdint>
#include <vector>

#include "soaccept/matrix.hpp"

namespace soaccept::learn {

// Distinct types for the two partitions so that training-only operations
// (resampling, search) cannot be handed test rows.
struct TrainSet {
  Matrix x;
  Labels y;
};

struct TestSet {
  Matrix x;
  Labels y;
};

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// floor(n * fraction) rows go to training, chosen by a seeded shuffle.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);

struct Split {
  TrainSet train;
  TestSet test;
  SplitIndices indices;
};

Split split_train_test(const Matrix& x, const Labels& y, const SplitSpec& spec);

// Stratified k-fold assignment: each class is shuffled with the seed and
// dealt round-robin across folds. Returns the fold of every row.
std::vector<std::size_t> stratified_folds(const Labels& y, std::size_t folds, std::uint64_t seed);

}  // namespace soaccept::learn
