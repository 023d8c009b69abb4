#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "soaccept/matrix.hpp"
#include "soaccept/split.hpp"

namespace soaccept::resample {

// Per-column z-score with population standard deviation. Zero-variance
// columns map to 0 and back to their mean.
class Scaler {
 public:
  Scaler() = default;
  Scaler(std::vector<double> mean, std::vector<double> sd);
  static Scaler fit(const Matrix& x);

  Matrix transform(const Matrix& x) const;
  Matrix inverse_transform(const Matrix& z) const;
  void transform_row(std::span<const double> in, std::span<double> out) const;

  const std::vector<double>& mean() const noexcept { return mean_; }
  const std::vector<double>& sd() const noexcept { return sd_; }
  std::size_t dims() const noexcept { return mean_.size(); }

 private:
  std::vector<double> mean_;
  std::vector<double> sd_;
};

struct Standardized {
  Matrix z;
  Scaler scaler;
};

// Throws DataError with fewer than 2 rows.
Standardized standardize(const Matrix& x_train);

// k nearest rows of `pool` to pool row i (self excluded), by Euclidean
// distance then index.
std::vector<std::vector<std::size_t>> nearest_neighbors(const Matrix& pool, std::size_t k, unsigned threads = 1);

// Synthetic rows s = x + u (x_nn - x). Base samples are visited round-robin;
// the remainder of n_synthetic / |minority| uses distinct random bases.
// Throws DataError when |minority| <= k.
Matrix smote(const Matrix& z_minority, std::size_t k, std::size_t n_synthetic, std::uint64_t seed,
             unsigned threads = 1);

struct AdasynAllocation {
  std::vector<double> density;       // normalized majority share per minority row
  std::vector<std::size_t> counts;   // synthetics per minority row
  bool uniform_fallback = false;     // no minority row had a majority neighbour
};

// g_i = round(density_i * budget).
AdasynAllocation adasyn_allocation(const Matrix& z_minority, const Matrix& z_majority, std::size_t k,
                                   double budget, unsigned threads = 1);

// Budget G = (|majority| - |minority|) * beta.
Matrix adasyn(const Matrix& z_minority, const Matrix& z_majority, std::size_t k, double beta, std::uint64_t seed,
              unsigned threads = 1);
Matrix adasyn_with_budget(const Matrix& z_minority, const Matrix& z_majority, std::size_t k, double budget,
                          std::uint64_t seed, unsigned threads = 1);

enum class Method { kNone, kSmote, kAdasyn };

std::string method_name(Method m);
// Throws ConfigError for anything but none, smote or adasyn.
Method parse_method(const std::string& name);

struct ResamplePlan {
  Method method = Method::kNone;
  std::size_t k = 5;
  double target_ratio = 1.0;
  double beta = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Resampled {
  Matrix x;
  Labels y;
  std::size_t n_original = 0;
  std::size_t n_synthetic = 0;
};

// Rebalances a training partition. Original rows come first and unchanged;
// synthetics are built on standardized features, mapped back to raw units
// and appended with the minority label. SMOTE brings the minority count to
// round(target_ratio * |majority|); ADASYN spends
// (round(target_ratio * |majority|) - |minority|) * beta.
Resampled apply_plan(const learn::TrainSet& train, const ResamplePlan& plan, unsigned threads = 1);

}  // namespace soaccept::resample
