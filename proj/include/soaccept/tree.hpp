#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "soaccept/matrix.hpp"
#include "soaccept/rng.hpp"

namespace soaccept::learn {

// Features tried per node. kAuto is the same as kSqrt: ceil(sqrt(d)).
struct MaxFeatures {
  enum class Kind { kSqrt, kAuto, kAll, kFixed };
  Kind kind = Kind::kSqrt;
  std::size_t fixed = 0;

  std::size_t resolve(std::size_t d) const;
  std::string to_string() const;
  // "sqrt", "auto", "all" or a positive integer.
  static MaxFeatures parse(const std::string& text);
  friend bool operator==(const MaxFeatures&, const MaxFeatures&) = default;
};

struct TreeParams {
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  MaxFeatures max_features;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double p1 = 0.0;            // share of accepted samples at the node
  std::uint32_t n_samples = 0;
  double impurity_decrease = 0.0;  // (n_node / n_root) * Gini decrease

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::size_t n_features = 0;

  const TreeNode& leaf_for(std::span<const double> x) const;
  double predict_proba(std::span<const double> x) const { return leaf_for(x).p1; }
  std::size_t depth() const;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

// 1 - sum p_c^2. Throws DataError when all counts are zero.
double gini(std::span<const double> counts);
double gini(double n0, double n1);

// Fits on the given sample rows (duplicates allowed, as in a bootstrap
// sample). Best split by Gini decrease over a random feature subset per
// node; candidate thresholds are midpoints between consecutive distinct
// values; ties go to the lowest feature index, then the lowest threshold.
DecisionTree fit_tree(const Matrix& x, const Labels& y, std::span<const std::size_t> rows, const TreeParams& params,
                      Rng& rng);
DecisionTree fit_tree(const Matrix& x, const Labels& y, const TreeParams& params, std::uint64_t seed);

}  // namespace soaccept::learn
