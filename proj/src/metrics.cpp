#include "soaccept/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "soaccept/error.hpp"

namespace soaccept::metrics {

ConfusionMatrix confusion(const Labels& truth, const Labels& predicted) {
  if (truth.size() != predicted.size()) throw DataError("confusion: length mismatch");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i];
    const int p = predicted[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) throw DataError("confusion: labels must be 0 or 1");
    if (t == 1) {
      (p == 1 ? cm.tp : cm.fn) += 1;
    } else {
      (p == 1 ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) return 0.0;
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

Rate precision(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fp == 0) return {0.0, true};
  return {static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp), false};
}

Rate recall(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0) return {0.0, true};
  return {static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn), false};
}

double mcc(const ConfusionMatrix& cm) {
  const auto d = [](std::int64_t v) { return static_cast<double>(v); };
  const double a = d(cm.tp + cm.fp);
  const double b = d(cm.tp + cm.fn);
  const double c = d(cm.tn + cm.fp);
  const double e = d(cm.tn + cm.fn);
  if (a == 0.0 || b == 0.0 || c == 0.0 || e == 0.0) return 0.0;
  const double num = d(cm.tp) * d(cm.tn) - d(cm.fp) * d(cm.fn);
  return std::clamp(num / std::sqrt((a * b) * (c * e)), -1.0, 1.0);
}

Labels threshold_labels(std::span<const double> scores) {
  Labels out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= 0.5 ? 1 : 0;
  return out;
}

RocCurve roc(const Labels& truth, std::span<const double> scores) {
  if (truth.size() != scores.size()) throw DataError("roc: length mismatch");
  std::int64_t pos = 0;
  for (int t : truth) {
    if (t != 0 && t != 1) throw DataError("roc: labels must be 0 or 1");
    pos += t;
  }
  const auto neg = static_cast<std::int64_t>(truth.size()) - pos;
  if (pos == 0 || neg == 0) throw DataError("roc: labels contain a single class");
  for (double s : scores)
    if (std::isnan(s)) throw DataError("roc: NaN score");

  std::vector<std::size_t> order(truth.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (truth[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                            static_cast<double>(tp) / static_cast<double>(pos), s});
  }
  // Integrate in counts and divide once to avoid accumulating rounding.
  double area = 0.0;
  std::int64_t prev_tp = 0;
  std::int64_t prev_fp = 0;
  tp = fp = 0;
  i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (truth[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    area += static_cast<double>(fp - prev_fp) * static_cast<double>(tp + prev_tp);
    prev_tp = tp;
    prev_fp = fp;
  }
  curve.auc = area / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
  return curve;
}

}  // namespace soaccept::metrics
