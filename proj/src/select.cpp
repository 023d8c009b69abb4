#include "soaccept/select.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <numeric>

#include "soaccept/error.hpp"
#include "soaccept/parallel.hpp"
#include "soaccept/rng.hpp"

namespace soaccept::select {

using nlohmann::json;

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DataError("pearson: length mismatch");
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CorrelationMatrix pearson_matrix(const Matrix& x, const std::vector<std::string>& names) {
  if (x.rows() < 2) throw DataError("pearson_matrix: need at least 2 rows");
  if (names.size() != x.cols()) throw DataError("pearson_matrix: name count differs from column count");
  CorrelationMatrix out;
  out.names = names;
  out.r = Matrix(x.cols(), x.cols());
  std::vector<std::vector<double>> cols(x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    cols[c] = x.column(c);
    const auto [lo, hi] = std::minmax_element(cols[c].begin(), cols[c].end());
    if (*lo == *hi) out.zero_variance.push_back(names[c]);
  }
  for (std::size_t i = 0; i < x.cols(); ++i) {
    out.r(i, i) = 1.0;
    for (std::size_t j = i + 1; j < x.cols(); ++j) out.r(i, j) = out.r(j, i) = pearson(cols[i], cols[j]);
  }
  return out;
}

double digamma_int(std::int64_t n) {
  if (n <= 0) throw DataError("digamma_int: argument must be positive");
  constexpr double kEulerGamma = 0.57721566490153286061;
  double h = 0.0;
  // Summing small terms first keeps the harmonic number accurate.
  for (std::int64_t i = n - 1; i >= 1; --i) h += 1.0 / static_cast<double>(i);
  return h - kEulerGamma;
}

double mutual_information(std::span<const double> x, std::span<const int> y, int k, std::uint64_t seed) {
  const std::size_t n = x.size();
  if (y.size() != n) throw DataError("mutual_information: x and y lengths differ");
  if (k < 1) throw DataError("mutual_information: k must be positive");
  if (n < 3 * static_cast<std::size_t>(k)) throw DataError("mutual_information: need n >= 3k");
  std::size_t positives = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw DataError("mutual_information: labels must be 0 or 1");
    positives += static_cast<std::size_t>(v);
  }
  if (positives == 0 || positives == n) throw DataError("mutual_information: labels contain a single class");

  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  if (var == 0.0) return 0.0;
  const double sd = std::sqrt(var / static_cast<double>(n));

  std::vector<double> z(n);
  double mean_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = x[i] / sd;
    mean_abs += std::abs(z[i]);
  }
  mean_abs /= static_cast<double>(n);
  Rng rng(seed);
  const double noise = 1e-10 * std::max(1.0, mean_abs);
  for (auto& v : z) v += noise * rng.normal();

  // Points sorted globally and per class.
  std::vector<double> all(z);
  std::sort(all.begin(), all.end());
  std::array<std::vector<double>, 2> by_class;
  for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(y[i])].push_back(z[i]);

  // psi[i] = digamma(i) for 1 <= i <= n.
  std::vector<double> psi(n + 1, 0.0);
  psi[1] = digamma_int(1);
  for (std::size_t i = 2; i <= n; ++i) psi[i] = psi[i - 1] + 1.0 / static_cast<double>(i - 1);

  double sum_psi_nc = 0.0;
  double sum_psi_k = 0.0;
  double sum_psi_m = 0.0;
  std::size_t used = 0;
  for (auto& cls : by_class) {
    const std::size_t nc = cls.size();
    if (nc < 2) continue;
    std::sort(cls.begin(), cls.end());
    const std::size_t kc = std::min<std::size_t>(static_cast<std::size_t>(k), nc - 1);
    for (std::size_t p = 0; p < nc; ++p) {
      const double v = cls[p];
      std::size_t left = p;
      std::size_t right = p + 1;
      double d = 0.0;
      for (std::size_t step = 0; step < kc; ++step) {
        const double dl = left > 0 ? v - cls[left - 1] : INFINITY;
        const double dr = right < nc ? cls[right] - v : INFINITY;
        if (dl <= dr) {
          d = dl;
          --left;
        } else {
          d = dr;
          ++right;
        }
      }
      const auto lo = std::partition_point(all.begin(), all.end(), [&](double u) { return u < v && v - u > d; });
      const auto hi = std::partition_point(lo, all.end(), [&](double u) { return u <= v || u - v <= d; });
      const auto m = static_cast<std::int64_t>(hi - lo) - 1;
      sum_psi_nc += psi[nc];
      sum_psi_k += psi[kc];
      sum_psi_m += psi[static_cast<std::size_t>(std::max<std::int64_t>(m, 1))];
      ++used;
    }
  }
  if (used == 0) return 0.0;
  const double u = static_cast<double>(used);
  const double nats = psi[used] - sum_psi_nc / u + sum_psi_k / u - sum_psi_m / u;
  return std::max(0.0, nats / std::log(2.0));
}

double InfoGainTable::at(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return bits[i];
  throw DataError("no information gain recorded for '" + name + "'");
}

void SelectionParams::validate() const {
  if (!(r_threshold > 0.0 && r_threshold <= 1.0)) throw ConfigError("selection r_threshold must be in (0, 1]");
  if (!std::isfinite(ig_threshold) || ig_threshold < 0.0) throw ConfigError("selection ig_threshold must be >= 0");
  if (k < 1) throw ConfigError("selection k must be >= 1");
}

SelectionResult select_from_statistics(const std::vector<std::string>& names, const Matrix& r,
                                       const std::vector<double>& ig, double r_threshold, double ig_threshold) {
  const std::size_t d = names.size();
  if (r.rows() != d || r.cols() != d || ig.size() != d)
    throw DataError("select_from_statistics: inconsistent sizes");

  struct Pair {
    double abs_r;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double a = std::abs(r(i, j));
      if (a >= r_threshold) pairs.push_back({a, i, j});
    }
  auto key = [&](const Pair& p) {
    const auto& a = names[p.i];
    const auto& b = names[p.j];
    return a < b ? std::pair(a, b) : std::pair(b, a);
  };
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    if (a.abs_r != b.abs_r) return a.abs_r > b.abs_r;
    return key(a) < key(b);
  });

  SelectionResult out;
  std::vector<bool> dropped(d, false);
  for (const auto& p : pairs) {
    if (dropped[p.i] || dropped[p.j]) continue;
    std::size_t loser;
    if (ig[p.i] != ig[p.j]) {
      loser = ig[p.i] < ig[p.j] ? p.i : p.j;
    } else {
      loser = names[p.i] > names[p.j] ? p.i : p.j;
    }
    const std::size_t winner = loser == p.i ? p.j : p.i;
    dropped[loser] = true;
    out.dropped.push_back({names[loser], "correlated-with:" + names[winner]});
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (dropped[i]) continue;
    if (ig[i] <= ig_threshold) {
      dropped[i] = true;
      out.dropped.push_back({names[i], "low-ig"});
    } else {
      out.retained.push_back(names[i]);
    }
  }
  return out;
}

SelectionReport select_features(const Matrix& x, const Labels& y, const std::vector<std::string>& names,
                                const SelectionParams& params, unsigned threads) {
  params.validate();
  if (y.size() != x.rows()) throw DataError("select_features: label count differs from row count");
  SelectionReport report;
  report.params = params;
  report.correlation = pearson_matrix(x, names);
  report.info_gain.names = names;
  report.info_gain.bits.assign(names.size(), 0.0);
  parallel_for(names.size(), threads, [&](std::size_t c) {
    const auto col = x.column(c);
    report.info_gain.bits[c] = mutual_information(col, y, params.k, derive_seed(params.seed, names[c]));
  });
  report.result = select_from_statistics(names, report.correlation.r, report.info_gain.bits, params.r_threshold,
                                         params.ig_threshold);
  return report;
}

void write_selection_report(const std::filesystem::path& path, const SelectionReport& report) {
  json j;
  j["v"] = 1;
  j["params"] = {{"r_threshold", report.params.r_threshold},
                 {"ig_threshold", report.params.ig_threshold},
                 {"k", report.params.k},
                 {"seed", report.params.seed}};
  json ig = json::object();
  for (std::size_t i = 0; i < report.info_gain.names.size(); ++i)
    ig[report.info_gain.names[i]] = report.info_gain.bits[i];
  j["info_gain_bits"] = ig;
  json rows = json::array();
  for (std::size_t i = 0; i < report.correlation.r.rows(); ++i) {
    auto row = report.correlation.r.row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["correlation"] = {{"names", report.correlation.names},
                      {"r", rows},
                      {"zero_variance", report.correlation.zero_variance}};
  j["retained"] = report.result.retained;
  json dropped = json::array();
  for (const auto& d : report.result.dropped) dropped.push_back({{"feature", d.feature}, {"reason", d.reason}});
  j["dropped"] = dropped;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::vector<std::string> read_retained_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    const auto j = json::parse(in);
    if (j.at("v").get<int>() != 1) throw DataError("selection_report.json: unsupported schema version");
    return j.at("retained").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("selection_report.json: ") + e.what());
  }
}

}  // namespace soaccept::select
