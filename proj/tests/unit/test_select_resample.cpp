#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>

#include "criteria.hpp"
#include "soaccept/error.hpp"
#include "soaccept/resample.hpp"
#include "soaccept/rng.hpp"
#include "soaccept/select.hpp"

using namespace soaccept;
using namespace soaccept::select;
using namespace soaccept::resample;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m;
  for (const auto& r : rows) {
    std::vector<double> v(r);
    m.append_row(v);
  }
  return m;
}

std::vector<std::string> column_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("f" + std::to_string(i));
  return names;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("pearson examples") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> neg(x.size());
  std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
  CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-12));

  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{2, 4, 6.5};
  // cov 4.5 over sqrt(2 * 61/6)
  CHECK(pearson(a, b) == doctest::Approx(4.5 / std::sqrt(2.0 * 61.0 / 6.0)).epsilon(1e-12));
  CHECK(pearson(a, b) == doctest::Approx(0.99795).epsilon(1e-5));
}

TEST_CASE("pearson matrix flags zero-variance columns and needs two rows") {
  const Matrix x = from_rows({{1, 5, 2}, {2, 5, 4}, {3, 5, 7}});
  const auto cm = pearson_matrix(x, {"a", "b", "c"});
  REQUIRE(cm.zero_variance == std::vector<std::string>{"b"});
  CHECK(cm.at(0, 1) == 0.0);
  CHECK(cm.at(1, 2) == 0.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(cm.at(i, i) == 1.0);
  CHECK(cm.at(0, 2) == cm.at(2, 0));

  CHECK_THROWS_AS(pearson_matrix(from_rows({{1, 2}}), {"a", "b"}), DataError);
}

TEST_CASE("pearson matrix is symmetric and bounded on random data") {
  const auto data = test::planted_dataset(300, 4, 11);
  const auto cm = pearson_matrix(data.x, column_names(data.x.cols()));
  for (std::size_t i = 0; i < cm.r.rows(); ++i)
    for (std::size_t j = 0; j < cm.r.cols(); ++j) {
      CHECK(cm.at(i, j) == cm.at(j, i));
      CHECK(std::abs(cm.at(i, j)) <= 1.0);
    }
}

TEST_CASE("mutual information errors") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK_THROWS_AS(mutual_information(x, std::vector<int>(10, 1), 3), DataError);
  const std::vector<int> y{0, 1, 0, 1, 0, 1, 0, 1};
  CHECK_THROWS_AS(mutual_information(std::vector<double>(8, 1.0), y, 3), DataError);
}

TEST_CASE("mutual information is non-negative and invariant under monotone maps") {
  const auto data = test::planted_dataset(600, 1, 5);
  const auto x0 = data.x.column(0);
  std::vector<double> ex(x0.size());
  std::transform(x0.begin(), x0.end(), ex.begin(), [](double v) { return std::exp(v); });
  const double base = mutual_information(x0, data.y, 3, 1);
  const double mapped = mutual_information(ex, data.y, 3, 1);
  CHECK(base > 0.05);
  CHECK(std::abs(base - mapped) < 0.05);
  CHECK(mutual_information(data.x.column(2), data.y, 3, 1) >= 0.0);
}

TEST_CASE("digamma at integers") {
  CHECK(digamma_int(1) == doctest::Approx(-0.5772156649015329));
  CHECK(digamma_int(2) == doctest::Approx(1.0 - 0.5772156649015329));
  CHECK(digamma_int(1000) == doctest::Approx(std::log(1000.0) - 1.0 / 2000.0 - 1.0 / 12e6).epsilon(1e-9));
}

TEST_CASE("selection keeps the higher-IG member of a correlated pair") {
  Matrix r(3, 3, 0.0);
  for (std::size_t i = 0; i < 3; ++i) r(i, i) = 1.0;
  r(0, 1) = r(1, 0) = 0.9;
  const auto res = select_from_statistics({"a", "b", "c"}, r, {0.5, 0.8, 0.6}, 0.7, 0.4);
  CHECK(res.retained == std::vector<std::string>{"b", "c"});
  REQUIRE(res.dropped.size() == 1);
  CHECK(res.dropped[0] == Dropped{"a", "correlated-with:b"});
}

TEST_CASE("selection tie rule drops the lexicographically later name") {
  Matrix r(2, 2, 1.0);
  r(0, 1) = r(1, 0) = -0.95;
  const auto res = select_from_statistics({"zeta", "alpha"}, r, {0.6, 0.6}, 0.7, 0.4);
  CHECK(res.retained == std::vector<std::string>{"alpha"});
  REQUIRE(res.dropped.size() == 1);
  CHECK(res.dropped[0].feature == "zeta");
}

TEST_CASE("selection threshold is inclusive for IG and |r|") {
  Matrix r(2, 2, 1.0);
  r(0, 1) = r(1, 0) = 0.7;
  const auto res = select_from_statistics({"a", "b"}, r, {0.4, 0.9}, 0.7, 0.4);
  CHECK(res.retained == std::vector<std::string>{"b"});
  CHECK(res.dropped[0] == Dropped{"a", "correlated-with:b"});

  Matrix id(2, 2, 0.0);
  id(0, 0) = id(1, 1) = 1.0;
  const auto low = select_from_statistics({"a", "b"}, id, {0.4, 0.41}, 0.7, 0.4);
  CHECK(low.retained == std::vector<std::string>{"b"});
  CHECK(low.dropped[0] == Dropped{"a", "low-ig"});
}

TEST_CASE("permissive thresholds select every informative feature") {
  const auto data = test::planted_dataset(200, 0, 9);
  SelectionParams p;
  p.r_threshold = 1.0;
  p.ig_threshold = 0.0;
  const auto names = column_names(data.x.cols());
  const auto rep = select_features(data.x, data.y, names, p);
  CHECK(rep.result.retained == names);
  CHECK(rep.result.dropped.empty());
}

TEST_CASE("selection does not depend on column order") {
  const auto data = test::planted_dataset(400, 3, 21);
  Matrix x = data.x;
  // Duplicate an informative column with noise so the correlation rule fires.
  Matrix wide(x.rows(), x.cols() + 1);
  Rng rng(3);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) wide(i, j) = x(i, j);
    wide(i, x.cols()) = x(i, 0) + 0.1 * rng.normal();
  }
  auto names = column_names(wide.cols());
  SelectionParams p;
  p.ig_threshold = 0.05;
  p.seed = 8;
  const auto forward = select_features(wide, data.y, names, p);

  std::vector<std::size_t> order(wide.cols());
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());
  std::vector<std::string> rnames;
  for (auto j : order) rnames.push_back(names[j]);
  const auto backward = select_features(wide.select_cols(order), data.y, rnames, p, 4);

  auto a = forward.result.retained;
  auto b = backward.result.retained;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  auto by_feature = [](std::vector<Dropped> d) {
    std::sort(d.begin(), d.end(), [](const Dropped& l, const Dropped& r) { return l.feature < r.feature; });
    return d;
  };
  CHECK(by_feature(forward.result.dropped) == by_feature(backward.result.dropped));
  for (const auto& n : names) CHECK(forward.info_gain.at(n) == backward.info_gain.at(n));
}

TEST_CASE("selection report round trip") {
  const auto data = test::planted_dataset(200, 2, 4);
  SelectionParams p;
  p.ig_threshold = 0.05;
  const auto rep = select_features(data.x, data.y, column_names(data.x.cols()), p);
  const auto path = std::filesystem::temp_directory_path() / "soaccept_selection_report.json";
  write_selection_report(path, rep);
  CHECK(read_retained_features(path) == rep.result.retained);
  std::filesystem::remove(path);
}

TEST_CASE("selection params validation") {
  SelectionParams p;
  p.k = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("scaler examples") {
  const Matrix x = from_rows({{0, 7}, {2, 7}});
  const auto s = standardize(x);
  CHECK(s.z(0, 0) == -1.0);
  CHECK(s.z(1, 0) == 1.0);
  CHECK(s.z(0, 1) == 0.0);
  CHECK(s.z(1, 1) == 0.0);
  CHECK(s.scaler.inverse_transform(s.z) == x);
  CHECK_THROWS_AS(standardize(from_rows({{1, 2}})), DataError);
}

TEST_CASE("standardized columns have zero mean and unit variance") {
  const auto data = test::planted_dataset(250, 3, 13);
  const auto s = standardize(data.x);
  for (std::size_t j = 0; j < s.z.cols(); ++j) {
    const auto c = s.z.column(j);
    const double mean = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
    double var = 0.0;
    for (double v : c) var += (v - mean) * (v - mean);
    var /= static_cast<double>(c.size());
    CHECK(std::abs(mean) < 1e-12);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("smote on a triangle stays on its edges") {
  const Matrix tri = from_rows({{0, 0}, {1, 0}, {0, 1}});
  const Matrix syn = smote(tri, 2, 30, 77);
  REQUIRE(syn.rows() == 30);
  for (std::size_t i = 0; i < syn.rows(); ++i) {
    const double x = syn(i, 0);
    const double y = syn(i, 1);
    const bool on_x = std::abs(y) < 1e-15 && x >= 0.0 && x <= 1.0;
    const bool on_y = std::abs(x) < 1e-15 && y >= 0.0 && y <= 1.0;
    const bool on_hyp = std::abs(x + y - 1.0) < 1e-12 && x >= 0.0 && y >= 0.0;
    CHECK((on_x || on_y || on_hyp));
  }
}

TEST_CASE("smote synthetics lie between a base row and one of its neighbours") {
  const auto data = test::planted_dataset(60, 1, 2);
  const auto z = standardize(data.x).z;
  const std::size_t k = 4;
  const auto syn = smote(z, k, 45, 5);
  const auto nn = nearest_neighbors(z, k);
  for (std::size_t s = 0; s < syn.rows(); ++s) {
    bool found = false;
    for (std::size_t i = 0; i < z.rows() && !found; ++i)
      for (auto j : nn[i]) {
        const double d = distance(z.row(i), z.row(j));
        if (std::abs(distance(z.row(i), syn.row(s)) + distance(syn.row(s), z.row(j)) - d) < 1e-9) {
          found = true;
          break;
        }
      }
    CHECK(found);
  }
}

TEST_CASE("smote errors and determinism") {
  const Matrix two = from_rows({{0, 0}, {1, 1}});
  CHECK_THROWS_AS(smote(two, 2, 5, 1), DataError);
  const auto data = test::planted_dataset(80, 2, 3);
  CHECK(smote(data.x, 5, 100, 9, 1) == smote(data.x, 5, 100, 9, 4));
  CHECK(smote(data.x, 5, 0, 9).rows() == 0);
}

TEST_CASE("nearest neighbours exclude self and order by distance then index") {
  const Matrix line = from_rows({{0}, {1}, {2}, {4}});
  const auto nn = nearest_neighbors(line, 2);
  CHECK(nn[0] == std::vector<std::size_t>{1, 2});
  CHECK(nn[1] == std::vector<std::size_t>{0, 2});
  CHECK(nn[3] == std::vector<std::size_t>{2, 1});
}

TEST_CASE("adasyn falls back to uniform weights without majority neighbours") {
  const Matrix minority = from_rows({{0, 0}, {0.1, 0}, {0, 0.1}, {0.1, 0.1}});
  const Matrix majority = from_rows({{100, 100}, {101, 100}});
  const auto alloc = adasyn_allocation(minority, majority, 2, 8.0);
  CHECK(alloc.uniform_fallback);
  for (double d : alloc.density) CHECK(d == doctest::Approx(0.25));
  CHECK(std::accumulate(alloc.counts.begin(), alloc.counts.end(), std::size_t{0}) == 8);
}

TEST_CASE("adasyn sends the budget to the minority row surrounded by majority rows") {
  const Matrix minority = from_rows({{0, 0}, {0.1, 0}, {0, 0.1}, {5, 5}});
  const Matrix majority = from_rows({{5.1, 5}, {5, 5.1}, {4.9, 5}, {5, 4.9}});
  const auto alloc = adasyn_allocation(minority, majority, 2, 10.0);
  CHECK_FALSE(alloc.uniform_fallback);
  CHECK(alloc.density[3] == doctest::Approx(1.0));
  CHECK(alloc.counts[3] == 10);
  CHECK(alloc.counts[0] + alloc.counts[1] + alloc.counts[2] == 0);
  const double total = std::accumulate(alloc.density.begin(), alloc.density.end(), 0.0);
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("adasyn budget follows beta") {
  const auto data = test::planted_dataset(200, 2, 17);
  Matrix minority, majority;
  for (std::size_t i = 0; i < data.x.rows(); ++i) (data.y[i] ? minority : majority).append_row(data.x.row(i));
  if (minority.rows() > majority.rows()) std::swap(minority, majority);
  const double gap = static_cast<double>(majority.rows() - minority.rows());
  const auto g = adasyn(minority, majority, 5, 1.0, 4);
  CHECK(std::abs(static_cast<double>(g.rows()) - gap) <= static_cast<double>(minority.rows()) / 2.0 + 1.0);
  CHECK(adasyn(minority, majority, 5, 0.0, 4).rows() == 0);
}

TEST_CASE("apply_plan balances the classes and keeps originals first") {
  learn::TrainSet train;
  Rng rng(5);
  for (int i = 0; i < 140; ++i) {
    const int label = i < 100 ? 0 : 1;
    const std::vector<double> row{rng.normal() + label, rng.normal() - label, rng.uniform()};
    train.x.append_row(row);
    train.y.push_back(label);
  }
  ResamplePlan plan;
  plan.method = Method::kSmote;
  plan.seed = 3;
  const auto out = apply_plan(train, plan);
  CHECK(out.n_original == 140);
  CHECK(out.n_synthetic == 60);
  CHECK(out.x.rows() == 200);
  CHECK(std::count(out.y.begin(), out.y.end(), 1) == 100);
  for (std::size_t i = 0; i < 140; ++i) {
    CHECK(out.y[i] == train.y[i]);
    for (std::size_t j = 0; j < 3; ++j) CHECK(out.x(i, j) == train.x(i, j));
  }
  for (std::size_t i = 140; i < out.y.size(); ++i) CHECK(out.y[i] == 1);

  plan.method = Method::kNone;
  const auto same = apply_plan(train, plan);
  CHECK(same.x == train.x);
  CHECK(same.y == train.y);
  CHECK(same.n_synthetic == 0);

  plan.method = Method::kAdasyn;
  const auto ad = apply_plan(train, plan, 3);
  CHECK(ad.n_original == 140);
  CHECK(std::abs(static_cast<double>(ad.n_synthetic) - 60.0) <= 21.0);
  CHECK(ad.x == apply_plan(train, plan, 1).x);
}

TEST_CASE("parse_method") {
  CHECK(parse_method("none") == Method::kNone);
  CHECK(parse_method("smote") == Method::kSmote);
  CHECK(parse_method("adasyn") == Method::kAdasyn);
  CHECK(method_name(Method::kAdasyn) == "adasyn");
  CHECK_THROWS_AS(parse_method("SMOTE-NC"), ConfigError);
  CHECK_THROWS_AS(parse_method(""), ConfigError);
}
