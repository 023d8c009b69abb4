#include "soaccept/tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "soaccept/error.hpp"

namespace soaccept::learn {

std::size_t MaxFeatures::resolve(std::size_t d) const {
  if (d == 0) return 0;
  switch (kind) {
    case Kind::kSqrt:
    case Kind::kAuto: {
      auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
      return std::clamp<std::size_t>(m, 1, d);
    }
    case Kind::kAll:
      return d;
    case Kind::kFixed:
      return std::clamp<std::size_t>(fixed, 1, d);
  }
  return d;
}

std::string MaxFeatures::to_string() const {
  switch (kind) {
    case Kind::kSqrt:
      return "sqrt";
    case Kind::kAuto:
      return "auto";
    case Kind::kAll:
      return "all";
    case Kind::kFixed:
      return std::to_string(fixed);
  }
  return "sqrt";
}

MaxFeatures MaxFeatures::parse(const std::string& text) {
  if (text == "sqrt") return {Kind::kSqrt, 0};
  if (text == "auto") return {Kind::kAuto, 0};
  if (text == "all") return {Kind::kAll, 0};
  std::size_t m = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), m);
  if (ec != std::errc{} || ptr != text.data() + text.size() || m == 0)
    throw ConfigError("max_features must be sqrt, auto, all or a positive integer, got '" + text + "'");
  return {Kind::kFixed, m};
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  if (x.size() != n_features) throw DataError("tree: feature count mismatch");
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& node = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                            : node.right);
  }
  return nodes[i];
}

std::size_t DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return best;
}

double gini(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) {
    if (c < 0.0) throw DataError("gini: negative count");
    total += c;
  }
  if (total == 0.0) throw DataError("gini: all counts are zero");
  double s = 0.0;
  for (double c : counts) s += (c / total) * (c / total);
  return 1.0 - s;
}

double gini(double n0, double n1) {
  const double counts[2] = {n0, n1};
  return gini(counts);
}

namespace {

struct Builder {
  const Matrix& x;
  const Labels& y;
  const TreeParams& params;
  Rng& rng;
  std::vector<std::size_t> rows;
  std::vector<std::pair<double, int>> scratch;
  std::vector<std::size_t> features;
  std::size_t mtry = 0;
  double root_n = 0.0;
  DecisionTree tree;

  struct Best {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double score = -1.0;
    double nl0 = 0, nl1 = 0, nr0 = 0, nr1 = 0;
  };

  std::int32_t build(std::size_t begin, std::size_t end, std::size_t depth) {
    const std::size_t n = end - begin;
    double n1 = 0.0;
    for (std::size_t i = begin; i < end; ++i) n1 += y[rows[i]];
    const double n0 = static_cast<double>(n) - n1;

    const auto id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.back().p1 = n1 / static_cast<double>(n);
    tree.nodes.back().n_samples = static_cast<std::uint32_t>(n);

    if (depth >= params.max_depth || n < params.min_samples_split || n < 2 * params.min_samples_leaf || n1 == 0.0 ||
        n0 == 0.0)
      return id;

    const Best best = find_split(begin, end);
    if (!best.found) return id;

    const std::size_t f = best.feature;
    const double thr = best.threshold;
    const auto mid = std::partition(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                    rows.begin() + static_cast<std::ptrdiff_t>(end),
                                    [&](std::size_t r) { return x(r, f) <= thr; });
    const auto split = static_cast<std::size_t>(mid - rows.begin());

    const double nd = static_cast<double>(n);
    const double nl = best.nl0 + best.nl1;
    const double nr = best.nr0 + best.nr1;
    const double decrease =
        gini(n0, n1) - (nl / nd) * gini(best.nl0, best.nl1) - (nr / nd) * gini(best.nr0, best.nr1);

    const auto left = build(begin, split, depth + 1);
    const auto right = build(split, end, depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = static_cast<std::int32_t>(f);
    node.threshold = thr;
    node.left = left;
    node.right = right;
    node.impurity_decrease = (nd / root_n) * std::max(0.0, decrease);
    return id;
  }

  Best find_split(std::size_t begin, std::size_t end) {
    const std::size_t n = end - begin;
    const std::size_t d = features.size();
    const std::size_t leaf = params.min_samples_leaf;
    Best best;
    std::size_t tried = 0;
    for (std::size_t j = 0; j < d && tried < mtry; ++j) {
      const std::size_t pick = j + static_cast<std::size_t>(rng.uniform_index(d - j));
      std::swap(features[j], features[pick]);
      const std::size_t f = features[j];

      scratch.clear();
      for (std::size_t i = begin; i < end; ++i) scratch.emplace_back(x(rows[i], f), y[rows[i]]);
      std::sort(scratch.begin(), scratch.end());
      if (scratch.front().first == scratch.back().first) continue;
      ++tried;

      double total1 = 0.0;
      for (const auto& s : scratch) total1 += s.second;
      const double total0 = static_cast<double>(n) - total1;
      double l1 = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        l1 += scratch[i - 1].second;
        if (scratch[i - 1].first == scratch[i].first) continue;
        if (i < leaf || n - i < leaf) continue;
        const double nl = static_cast<double>(i);
        const double nr = static_cast<double>(n - i);
        const double l0 = nl - l1;
        const double r1 = total1 - l1;
        const double r0 = total0 - l0;
        // Maximizing this minimizes the weighted child Gini.
        const double score = (l0 * l0 + l1 * l1) / nl + (r0 * r0 + r1 * r1) / nr;
        const double a = scratch[i - 1].first;
        const double b = scratch[i].first;
        double thr = a + (b - a) / 2.0;
        if (!(thr >= a && thr < b) || !std::isfinite(thr)) thr = a;
        const bool better = !best.found || score > best.score ||
                            (score == best.score && (f < best.feature || (f == best.feature && thr < best.threshold)));
        if (better) best = Best{true, f, thr, score, l0, l1, r0, r1};
      }
    }
    return best;
  }
};

}  // namespace

DecisionTree fit_tree(const Matrix& x, const Labels& y, std::span<const std::size_t> rows, const TreeParams& params,
                      Rng& rng) {
  if (x.rows() != y.size()) throw DataError("fit_tree: label count differs from row count");
  if (rows.empty()) throw DataError("fit_tree: no training rows");
  if (params.max_depth < 1 || params.min_samples_split < 2 || params.min_samples_leaf < 1)
    throw ConfigError("fit_tree: invalid depth or sample limits");
  Builder b{x, y, params, rng, {rows.begin(), rows.end()}, {}, {}, 0, static_cast<double>(rows.size()), {}};
  b.features.resize(x.cols());
  std::iota(b.features.begin(), b.features.end(), std::size_t{0});
  b.mtry = params.max_features.resolve(x.cols());
  b.tree.n_features = x.cols();
  b.scratch.reserve(rows.size());
  b.build(0, rows.size(), 0);
  return std::move(b.tree);
}

DecisionTree fit_tree(const Matrix& x, const Labels& y, const TreeParams& params, std::uint64_t seed) {
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Rng rng(seed);
  return fit_tree(x, y, rows, params, rng);
}

}  // namespace soaccept::learn
