#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "soaccept/matrix.hpp"

namespace soaccept::select {

struct CorrelationMatrix {
  std::vector<std::string> names;
  Matrix r;                                // symmetric, unit diagonal
  std::vector<std::string> zero_variance;  // columns whose r is set to 0

  double at(std::size_t i, std::size_t j) const { return r(i, j); }
};

// Sample Pearson r for every column pair. Throws DataError with < 2 rows.
CorrelationMatrix pearson_matrix(const Matrix& x, const std::vector<std::string>& names);
double pearson(std::span<const double> a, std::span<const double> b);

// Nearest-neighbour estimate of I(x; y) for continuous x and binary y, in
// bits, clamped at 0. Ties in x are broken by a seeded jitter far below the
// column's scale. Throws DataError when y has one class or n < 3k.
double mutual_information(std::span<const double> x, std::span<const int> y, int k = 3, std::uint64_t seed = 0);

// digamma at a positive integer.
double digamma_int(std::int64_t n);

struct InfoGainTable {
  std::vector<std::string> names;
  std::vector<double> bits;

  double at(const std::string& name) const;
};

struct Dropped {
  std::string feature;
  std::string reason;  // "correlated-with:<name>" or "low-ig"

  friend bool operator==(const Dropped&, const Dropped&) = default;
};

struct SelectionResult {
  std::vector<std::string> retained;  // input column order
  std::vector<Dropped> dropped;       // order of decision
};

struct SelectionParams {
  double r_threshold = 0.7;
  double ig_threshold = 0.4;
  int k = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

// Pairs with |r| >= r_threshold are visited by decreasing |r| (then by name);
// while both members are retained, the one with lower IG is dropped (equal
// IG: the lexicographically later name). Remaining features with
// IG <= ig_threshold are then dropped.
SelectionResult select_from_statistics(const std::vector<std::string>& names, const Matrix& abs_or_signed_r,
                                       const std::vector<double>& ig, double r_threshold, double ig_threshold);

struct SelectionReport {
  SelectionParams params;
  CorrelationMatrix correlation;
  InfoGainTable info_gain;
  SelectionResult result;
};

// Per-column MI seeds derive from params.seed and the column name, so the
// result does not depend on column order.
SelectionReport select_features(const Matrix& x, const Labels& y, const std::vector<std::string>& names,
                                const SelectionParams& params = {}, unsigned threads = 1);

void write_selection_report(const std::filesystem::path& path, const SelectionReport& report);
// Reads back the retained list only.
std::vector<std::string> read_retained_features(const std::filesystem::path& path);

}  // namespace soaccept::select
