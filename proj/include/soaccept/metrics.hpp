#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "soaccept/matrix.hpp"

namespace soaccept::metrics {

// Accepted (label 1) is the positive class.
struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// A ratio whose denominator may be zero; then value is 0 and undefined is set.
struct Rate {
  double value = 0.0;
  bool undefined = false;
};

// Throws DataError on length mismatch or labels other than 0/1.
ConfusionMatrix confusion(const Labels& truth, const Labels& predicted);

double accuracy(const ConfusionMatrix& cm);
Rate precision(const ConfusionMatrix& cm);
Rate recall(const ConfusionMatrix& cm);
// 0 when any marginal total is 0.
double mcc(const ConfusionMatrix& cm);

// Labels from probabilities with the 0.5 cut (p >= 0.5 is accepted).
Labels threshold_labels(std::span<const double> scores);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // +inf for the (0, 0) point
};

struct RocCurve {
  std::vector<RocPoint> points;  // one per distinct score, plus (0, 0)
  double auc = 0.0;              // trapezoid rule
};

// Sweeps the distinct scores from high to low. Throws DataError when the
// labels hold a single class.
RocCurve roc(const Labels& truth, std::span<const double> scores);

}  // namespace soaccept::metrics
