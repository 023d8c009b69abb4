#pragma once

#include <cstdint>
#include <vector>

#include "soaccept/forest.hpp"
#include "soaccept/resample.hpp"
#include "soaccept/split.hpp"

namespace soaccept::learn {

struct SearchSpace {
  std::vector<std::size_t> n_estimators;
  std::vector<std::size_t> max_depth;
  std::vector<std::size_t> min_samples_split;
  std::vector<std::size_t> min_samples_leaf;
  std::vector<MaxFeatures> max_features;
  std::vector<bool> bootstrap;
  std::size_t n_iterations = 100;
  std::size_t cv_folds = 4;
  std::uint64_t seed = 0;

  // n_estimators 100..1200 step 100, max_depth 10 values from 10 to 110,
  // min_samples_split {2,3,5,8,10}, min_samples_leaf {1,2,3,4}, sqrt, bootstrap.
  static SearchSpace defaults();
  void validate() const;
  std::size_t size() const;
};

// Best parameters reported for the full corpus, kept for the report.
RfParams reference_optimum();

struct Candidate {
  RfParams params;
  std::vector<double> fold_accuracy;
  double cv_accuracy = 0.0;
  std::size_t first_draw = 0;  // iteration that first sampled it
};

struct SearchResult {
  RfParams best;
  std::vector<Candidate> candidates;  // distinct, in order of first draw
};

// Draws n_iterations combinations uniformly; each distinct combination is
// scored once by stratified k-fold mean accuracy, with `plan` applied to
// each training fold only. Ties prefer fewer trees, then shallower trees,
// then the earlier draw.
SearchResult random_search(const TrainSet& train, const SearchSpace& space, const resample::ResamplePlan& plan,
                           unsigned threads = 1);

}  // namespace soaccept::learn
