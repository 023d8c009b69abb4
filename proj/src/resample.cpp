#include "soaccept/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "soaccept/error.hpp"
#include "soaccept/parallel.hpp"
#include "soaccept/rng.hpp"

namespace soaccept::resample {

Scaler::Scaler(std::vector<double> mean, std::vector<double> sd) : mean_(std::move(mean)), sd_(std::move(sd)) {
  if (mean_.size() != sd_.size()) throw DataError("scaler: mean and sd sizes differ");
}

Scaler Scaler::fit(const Matrix& x) {
  if (x.rows() < 2) throw DataError("standardize: need at least 2 rows");
  const std::size_t d = x.cols();
  std::vector<double> mean(d, 0.0);
  std::vector<double> sd(d, 0.0);
  const auto n = static_cast<double>(x.rows());
  for (std::size_t c = 0; c < d; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) s += x(r, c);
    mean[c] = s / n;
    double ss = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) ss += (x(r, c) - mean[c]) * (x(r, c) - mean[c]);
    sd[c] = std::sqrt(ss / n);
  }
  return Scaler(std::move(mean), std::move(sd));
}

void Scaler::transform_row(std::span<const double> in, std::span<double> out) const {
  if (in.size() != mean_.size() || out.size() != mean_.size()) throw DataError("scaler: dimension mismatch");
  for (std::size_t c = 0; c < in.size(); ++c) out[c] = sd_[c] > 0.0 ? (in[c] - mean_[c]) / sd_[c] : 0.0;
}

Matrix Scaler::transform(const Matrix& x) const {
  if (x.cols() != mean_.size() && x.rows() > 0) throw DataError("scaler: dimension mismatch");
  Matrix out(x.rows(), mean_.size());
  for (std::size_t r = 0; r < x.rows(); ++r) transform_row(x.row(r), out.row(r));
  return out;
}

Matrix Scaler::inverse_transform(const Matrix& z) const {
  if (z.cols() != mean_.size() && z.rows() > 0) throw DataError("scaler: dimension mismatch");
  Matrix out(z.rows(), mean_.size());
  for (std::size_t r = 0; r < z.rows(); ++r)
    for (std::size_t c = 0; c < mean_.size(); ++c) out(r, c) = mean_[c] + z(r, c) * sd_[c];
  return out;
}

Standardized standardize(const Matrix& x_train) {
  Standardized out;
  out.scaler = Scaler::fit(x_train);
  out.z = out.scaler.transform(x_train);
  return out;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Neighbours within `pool` of each row listed in `queries`.
std::vector<std::vector<std::size_t>> knn(const Matrix& pool, std::span<const std::size_t> queries, std::size_t k,
                                          unsigned threads) {
  std::vector<std::vector<std::size_t>> out(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t qi) {
    const std::size_t self = queries[qi];
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(pool.rows());
    for (std::size_t j = 0; j < pool.rows(); ++j)
      if (j != self) dist.emplace_back(squared_distance(pool.row(self), pool.row(j)), j);
    const std::size_t kk = std::min(k, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
    out[qi].reserve(kk);
    for (std::size_t t = 0; t < kk; ++t) out[qi].push_back(dist[t].second);
  });
  return out;
}

void require_neighbors(std::size_t minority, std::size_t k) {
  if (k == 0) throw ConfigError("resampling k must be >= 1");
  if (minority <= k)
    throw DataError("minority class has " + std::to_string(minority) + " rows; choose k < " +
                    std::to_string(minority));
}

// Generates counts[i] synthetics from minority row i, in row order.
Matrix interpolate(const Matrix& z_minority, const std::vector<std::vector<std::size_t>>& neighbors,
                   const std::vector<std::size_t>& counts, std::uint64_t seed) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  Matrix out(total, z_minority.cols());
  Rng rng(seed);
  std::size_t next = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto x = z_minority.row(i);
    for (std::size_t s = 0; s < counts[i]; ++s) {
      const auto nn = z_minority.row(neighbors[i][rng.uniform_index(neighbors[i].size())]);
      const double u = rng.uniform();
      auto dst = out.row(next++);
      for (std::size_t c = 0; c < x.size(); ++c) dst[c] = x[c] + u * (nn[c] - x[c]);
    }
  }
  return out;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace

std::vector<std::vector<std::size_t>> nearest_neighbors(const Matrix& pool, std::size_t k, unsigned threads) {
  const auto rows = all_rows(pool.rows());
  return knn(pool, rows, k, threads);
}

Matrix smote(const Matrix& z_minority, std::size_t k, std::size_t n_synthetic, std::uint64_t seed,
             unsigned threads) {
  require_neighbors(z_minority.rows(), k);
  const std::size_t m = z_minority.rows();
  std::vector<std::size_t> counts(m, n_synthetic / m);
  const std::size_t remainder = n_synthetic % m;
  Rng pick(derive_seed(seed, "smote-remainder"));
  auto order = all_rows(m);
  pick.shuffle(std::span(order));
  for (std::size_t t = 0; t < remainder; ++t) ++counts[order[t]];
  const auto neighbors = nearest_neighbors(z_minority, k, threads);
  return interpolate(z_minority, neighbors, counts, derive_seed(seed, "smote-interpolate"));
}

AdasynAllocation adasyn_allocation(const Matrix& z_minority, const Matrix& z_majority, std::size_t k,
                                   double budget, unsigned threads) {
  require_neighbors(z_minority.rows(), k);
  if (z_majority.rows() == 0) throw DataError("adasyn: majority class is empty");
  if (z_majority.cols() != z_minority.cols()) throw DataError("adasyn: dimension mismatch");
  const std::size_t m = z_minority.rows();
  Matrix pool = z_minority;
  for (std::size_t r = 0; r < z_majority.rows(); ++r) pool.append_row(z_majority.row(r));
  const auto queries = all_rows(m);
  const auto neighbors = knn(pool, queries, k, threads);

  AdasynAllocation out;
  out.density.assign(m, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto majority = std::count_if(neighbors[i].begin(), neighbors[i].end(), [&](std::size_t j) { return j >= m; });
    out.density[i] = static_cast<double>(majority) / static_cast<double>(k);
    total += out.density[i];
  }
  if (total == 0.0) {
    out.uniform_fallback = true;
    out.density.assign(m, 1.0 / static_cast<double>(m));
  } else {
    for (auto& r : out.density) r /= total;
  }
  out.counts.resize(m);
  const double g = std::max(0.0, budget);
  for (std::size_t i = 0; i < m; ++i) out.counts[i] = static_cast<std::size_t>(std::llround(out.density[i] * g));
  return out;
}

Matrix adasyn_with_budget(const Matrix& z_minority, const Matrix& z_majority, std::size_t k, double budget,
                          std::uint64_t seed, unsigned threads) {
  const auto allocation = adasyn_allocation(z_minority, z_majority, k, budget, threads);
  const auto neighbors = nearest_neighbors(z_minority, k, threads);
  return interpolate(z_minority, neighbors, allocation.counts, derive_seed(seed, "adasyn-interpolate"));
}

Matrix adasyn(const Matrix& z_minority, const Matrix& z_majority, std::size_t k, double beta, std::uint64_t seed,
              unsigned threads) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("adasyn beta must be in [0, 1]");
  const double gap = static_cast<double>(z_majority.rows()) - static_cast<double>(z_minority.rows());
  return adasyn_with_budget(z_minority, z_majority, k, std::max(0.0, gap) * beta, seed, threads);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kNone:
      return "none";
    case Method::kSmote:
      return "smote";
    case Method::kAdasyn:
      return "adasyn";
  }
  return "none";
}

Method parse_method(const std::string& name) {
  if (name == "none") return Method::kNone;
  if (name == "smote") return Method::kSmote;
  if (name == "adasyn") return Method::kAdasyn;
  throw ConfigError("unknown sampler '" + name + "' (expected none, smote or adasyn)");
}

void ResamplePlan::validate() const {
  if (k < 1) throw ConfigError("sampler k must be >= 1");
  if (!(target_ratio > 0.0 && target_ratio <= 1.0)) throw ConfigError("sampler target_ratio must be in (0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("sampler beta must be in [0, 1]");
}

Resampled apply_plan(const learn::TrainSet& train, const ResamplePlan& plan, unsigned threads) {
  plan.validate();
  if (train.x.rows() != train.y.size()) throw DataError("resample: label count differs from row count");
  Resampled out{train.x, train.y, train.x.rows(), 0};
  if (plan.method == Method::kNone) return out;

  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < train.y.size(); ++i) (train.y[i] == 1 ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw DataError("resample: training partition has a single class");
  if (pos.size() == neg.size()) return out;
  const int minority_label = pos.size() < neg.size() ? 1 : 0;
  const auto& minority_rows = minority_label == 1 ? pos : neg;
  const auto& majority_rows = minority_label == 1 ? neg : pos;

  const auto target = static_cast<std::size_t>(
      std::llround(plan.target_ratio * static_cast<double>(majority_rows.size())));
  if (target <= minority_rows.size()) return out;

  const auto standardized = standardize(train.x);
  const Matrix z_min = standardized.z.select_rows(minority_rows);
  Matrix synthetic;
  if (plan.method == Method::kSmote) {
    synthetic = smote(z_min, plan.k, target - minority_rows.size(), plan.seed, threads);
  } else {
    const Matrix z_maj = standardized.z.select_rows(majority_rows);
    const double budget = static_cast<double>(target - minority_rows.size()) * plan.beta;
    synthetic = adasyn_with_budget(z_min, z_maj, plan.k, budget, plan.seed, threads);
  }
  const Matrix raw = standardized.scaler.inverse_transform(synthetic);
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    out.x.append_row(raw.row(r));
    out.y.push_back(minority_label);
  }
  out.n_synthetic = raw.rows();
  return out;
}

}  // namespace soaccept::resample
