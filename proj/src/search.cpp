#include "soaccept/search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "soaccept/error.hpp"
#include "soaccept/parallel.hpp"
#include "soaccept/rng.hpp"

namespace soaccept::learn {

SearchSpace SearchSpace::defaults() {
  SearchSpace s;
  for (std::size_t n = 100; n <= 1200; n += 100) s.n_estimators.push_back(n);
  // 10 evenly spaced depths from 10 to 110, rounded.
  for (int i = 0; i < 10; ++i) s.max_depth.push_back(static_cast<std::size_t>(std::lround(10.0 + i * 100.0 / 9.0)));
  s.min_samples_split = {2, 3, 5, 8, 10};
  s.min_samples_leaf = {1, 2, 3, 4};
  s.max_features = {MaxFeatures{}};
  s.bootstrap = {true};
  return s;
}

void SearchSpace::validate() const {
  if (n_estimators.empty() || max_depth.empty() || min_samples_split.empty() || min_samples_leaf.empty() ||
      max_features.empty() || bootstrap.empty())
    throw ConfigError("search space: every candidate set must be non-empty");
  if (n_iterations < 1) throw ConfigError("search n_iterations must be >= 1");
  if (cv_folds < 2) throw ConfigError("search cv_folds must be >= 2");
  for (auto v : n_estimators)
    if (v < 1) throw ConfigError("search n_estimators candidates must be >= 1");
  for (auto v : max_depth)
    if (v < 1) throw ConfigError("search max_depth candidates must be >= 1");
  for (auto v : min_samples_split)
    if (v < 2) throw ConfigError("search min_samples_split candidates must be >= 2");
  for (auto v : min_samples_leaf)
    if (v < 1) throw ConfigError("search min_samples_leaf candidates must be >= 1");
}

std::size_t SearchSpace::size() const {
  return n_estimators.size() * max_depth.size() * min_samples_split.size() * min_samples_leaf.size() *
         max_features.size() * bootstrap.size();
}

RfParams reference_optimum() {
  RfParams p;
  p.n_estimators = 200;
  p.max_depth = 60;
  p.min_samples_leaf = 3;
  p.min_samples_split = 8;
  p.max_features = MaxFeatures{MaxFeatures::Kind::kAuto, 0};
  p.bootstrap = true;
  return p;
}

SearchResult random_search(const TrainSet& train, const SearchSpace& space, const resample::ResamplePlan& plan,
                           unsigned threads) {
  space.validate();
  plan.validate();
  if (train.x.rows() != train.y.size()) throw DataError("search: label count differs from row count");

  // Draw combinations; keep the first occurrence of each.
  Rng rng(derive_seed(space.seed, "draws"));
  const auto forest_seed = derive_seed(space.seed, "forest");
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>;
  std::map<Key, std::size_t> seen;
  SearchResult result;
  for (std::size_t it = 0; it < space.n_iterations; ++it) {
    const Key key{rng.uniform_index(space.n_estimators.size()),      rng.uniform_index(space.max_depth.size()),
                  rng.uniform_index(space.min_samples_split.size()), rng.uniform_index(space.min_samples_leaf.size()),
                  rng.uniform_index(space.max_features.size()),      rng.uniform_index(space.bootstrap.size())};
    if (!seen.emplace(key, result.candidates.size()).second) continue;
    Candidate c;
    c.params.n_estimators = space.n_estimators[std::get<0>(key)];
    c.params.max_depth = space.max_depth[std::get<1>(key)];
    c.params.min_samples_split = space.min_samples_split[std::get<2>(key)];
    c.params.min_samples_leaf = space.min_samples_leaf[std::get<3>(key)];
    c.params.max_features = space.max_features[std::get<4>(key)];
    c.params.bootstrap = space.bootstrap[std::get<5>(key)];
    c.params.seed = forest_seed;
    c.first_draw = it;
    result.candidates.push_back(std::move(c));
  }

  // Folds and their resampled training sets are shared by all candidates.
  const std::size_t k = space.cv_folds;
  const auto fold_of = stratified_folds(train.y, k, derive_seed(space.seed, "folds"));
  std::vector<TrainSet> fold_train(k);
  std::vector<TestSet> fold_valid(k);
  for (std::size_t f = 0; f < k; ++f) {
    TrainSet tr;
    for (std::size_t r = 0; r < train.y.size(); ++r) {
      if (fold_of[r] == f) {
        fold_valid[f].x.append_row(train.x.row(r));
        fold_valid[f].y.push_back(train.y[r]);
      } else {
        tr.x.append_row(train.x.row(r));
        tr.y.push_back(train.y[r]);
      }
    }
    if (fold_valid[f].y.empty()) throw DataError("search: too few rows for " + std::to_string(k) + " folds");
    auto fold_plan = plan;
    fold_plan.seed = derive_seed(plan.seed, static_cast<std::uint64_t>(f));
    auto resampled = resample::apply_plan(tr, fold_plan, threads);
    fold_train[f] = TrainSet{std::move(resampled.x), std::move(resampled.y)};
  }

  const std::size_t units = result.candidates.size() * k;
  std::vector<double> accuracy(units, 0.0);
  parallel_for(units, threads, [&](std::size_t u) {
    const auto& cand = result.candidates[u / k];
    const std::size_t f = u % k;
    const auto model = fit_forest(fold_train[f].x, fold_train[f].y, cand.params, 1);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < fold_valid[f].y.size(); ++r)
      if (predict_label(forest_predict_proba(model, fold_valid[f].x.row(r))) == fold_valid[f].y[r]) ++correct;
    accuracy[u] = static_cast<double>(correct) / static_cast<double>(fold_valid[f].y.size());
  });

  for (std::size_t c = 0; c < result.candidates.size(); ++c) {
    auto& cand = result.candidates[c];
    cand.fold_accuracy.assign(accuracy.begin() + static_cast<std::ptrdiff_t>(c * k),
                              accuracy.begin() + static_cast<std::ptrdiff_t>((c + 1) * k));
    double s = 0.0;
    for (double a : cand.fold_accuracy) s += a;
    cand.cv_accuracy = s / static_cast<double>(k);
  }

  const auto best = std::min_element(result.candidates.begin(), result.candidates.end(), [](const auto& a, const auto& b) {
    if (a.cv_accuracy != b.cv_accuracy) return a.cv_accuracy > b.cv_accuracy;
    if (a.params.n_estimators != b.params.n_estimators) return a.params.n_estimators < b.params.n_estimators;
    if (a.params.max_depth != b.params.max_depth) return a.params.max_depth < b.params.max_depth;
    return a.first_draw < b.first_draw;
  });
  result.best = best->params;
  return result;
}

}  // namespace soaccept::learn
