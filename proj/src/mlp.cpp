#include "soaccept/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "soaccept/rng.hpp"

namespace soaccept::learn {

void MlpConfig::validate() const {
  if (hidden.empty()) throw ConfigError("mlp needs at least one hidden layer");
  for (auto h : hidden)
    if (h == 0) throw ConfigError("mlp hidden layer sizes must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("mlp learning_rate must be > 0");
  if (batch_size == 0) throw ConfigError("mlp batch_size must be >= 1");
  if (epochs == 0) throw ConfigError("mlp epochs must be >= 1");
}

DivergenceError::DivergenceError(std::size_t epoch)
    : DataError("mlp training diverged (non-finite loss) in epoch " + std::to_string(epoch)), epoch_(epoch) {}

namespace {

double sigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

double softplus(double v) { return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v))); }

// Activations of every layer; acts[0] is the input, acts.back() holds the
// output logit (before the final sigmoid).
void forward(const MlpModel& model, std::span<const double> z, std::vector<std::vector<double>>& acts) {
  acts.resize(model.layers.size() + 1);
  acts[0].assign(z.begin(), z.end());
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    auto& out = acts[l + 1];
    out.assign(layer.outputs, 0.0);
    const auto& in = acts[l];
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* w = layer.w.data() + o * layer.inputs;
      double s = layer.b[o];
      for (std::size_t i = 0; i < layer.inputs; ++i) s += w[i] * in[i];
      out[o] = l + 1 == model.layers.size() ? s : sigmoid(s);
    }
  }
}

// Adds scale * dLoss/dparam for one sample into grads.
void backward(const MlpModel& model, const std::vector<std::vector<double>>& acts, int label, double scale,
              MlpGradients& grads, std::vector<double>& delta, std::vector<double>& next) {
  const double logit = acts.back()[0];
  delta.assign(1, (sigmoid(logit) - static_cast<double>(label)) * scale);
  for (std::size_t l = model.layers.size(); l-- > 0;) {
    const auto& layer = model.layers[l];
    const auto& in = acts[l];
    auto& dw = grads.dw[l];
    auto& db = grads.db[l];
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      db[o] += delta[o];
      double* g = dw.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) g[i] += delta[o] * in[i];
    }
    if (l == 0) break;
    next.assign(layer.inputs, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* w = layer.w.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) next[i] += w[i] * delta[o];
    }
    for (std::size_t i = 0; i < layer.inputs; ++i) next[i] *= in[i] * (1.0 - in[i]);
    delta.swap(next);
  }
}

MlpGradients zero_gradients(const MlpModel& model) {
  MlpGradients g;
  for (const auto& layer : model.layers) {
    g.dw.emplace_back(layer.w.size(), 0.0);
    g.db.emplace_back(layer.b.size(), 0.0);
  }
  return g;
}

void check_shape(const MlpModel& model, const Matrix& z, const Labels& y) {
  if (z.rows() != y.size()) throw DataError("mlp: label count differs from row count");
  if (z.rows() > 0 && z.cols() != model.n_features()) throw DataError("mlp: feature count mismatch");
}

}  // namespace

MlpModel init_mlp(std::size_t inputs, const MlpConfig& config) {
  config.validate();
  if (inputs == 0) throw DataError("mlp: no input features");
  MlpModel model;
  model.config = config;
  std::vector<std::size_t> sizes{inputs};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(1);
  Rng rng(derive_seed(config.seed, "init"));
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    DenseLayer layer;
    layer.inputs = sizes[l];
    layer.outputs = sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    layer.w.resize(layer.inputs * layer.outputs);
    for (auto& w : layer.w) w = (2.0 * rng.uniform() - 1.0) * limit;
    layer.b.assign(layer.outputs, 0.0);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

double mlp_logit(const MlpModel& model, std::span<const double> z) {
  if (z.size() != model.n_features()) throw DataError("mlp: feature count mismatch");
  std::vector<std::vector<double>> acts;
  forward(model, z, acts);
  return acts.back()[0];
}

double mlp_loss(const MlpModel& model, const Matrix& z, const Labels& y) {
  check_shape(model, z, y);
  if (z.rows() == 0) return 0.0;
  std::vector<std::vector<double>> acts;
  double total = 0.0;
  for (std::size_t r = 0; r < z.rows(); ++r) {
    forward(model, z.row(r), acts);
    const double logit = acts.back()[0];
    total += softplus(logit) - static_cast<double>(y[r]) * logit;
  }
  return total / static_cast<double>(z.rows());
}

MlpGradients mlp_gradients(const MlpModel& model, const Matrix& z, const Labels& y) {
  check_shape(model, z, y);
  auto grads = zero_gradients(model);
  if (z.rows() == 0) return grads;
  std::vector<std::vector<double>> acts;
  std::vector<double> delta;
  std::vector<double> next;
  const double scale = 1.0 / static_cast<double>(z.rows());
  for (std::size_t r = 0; r < z.rows(); ++r) {
    forward(model, z.row(r), acts);
    backward(model, acts, y[r], scale, grads, delta, next);
  }
  return grads;
}

MlpModel fit_mlp(const Matrix& x, const Labels& y, const MlpConfig& config) {
  if (x.rows() != y.size()) throw DataError("mlp: label count differs from row count");
  if (x.rows() < 2) throw DataError("mlp: need at least 2 training rows");
  MlpModel model = init_mlp(x.cols(), config);
  model.scaler = resample::Scaler::fit(x);
  const Matrix z = model.scaler.transform(x);

  std::vector<std::size_t> order(z.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(config.seed, "shuffle"));
  std::vector<std::vector<double>> acts;
  std::vector<double> delta;
  std::vector<double> next;
  auto grads = zero_gradients(model);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      for (auto& g : grads.dw) std::fill(g.begin(), g.end(), 0.0);
      for (auto& g : grads.db) std::fill(g.begin(), g.end(), 0.0);
      const double scale = 1.0 / static_cast<double>(end - start);
      for (std::size_t k = start; k < end; ++k) {
        forward(model, z.row(order[k]), acts);
        backward(model, acts, y[order[k]], scale, grads, delta, next);
      }
      for (std::size_t l = 0; l < model.layers.size(); ++l) {
        auto& layer = model.layers[l];
        for (std::size_t i = 0; i < layer.w.size(); ++i) layer.w[i] -= config.learning_rate * grads.dw[l][i];
        for (std::size_t i = 0; i < layer.b.size(); ++i) layer.b[i] -= config.learning_rate * grads.db[l][i];
      }
    }
    const double loss = mlp_loss(model, z, y);
    if (!std::isfinite(loss)) throw DivergenceError(epoch + 1);
    model.epoch_loss.push_back(loss);
  }
  return model;
}

double mlp_predict_proba(const MlpModel& model, std::span<const double> x) {
  if (x.size() != model.n_features()) throw DataError("mlp: feature count mismatch");
  std::vector<double> z(x.size());
  if (model.scaler.dims() == x.size()) {
    model.scaler.transform_row(x, z);
  } else {
    z.assign(x.begin(), x.end());
  }
  return sigmoid(mlp_logit(model, z));
}

std::vector<double> mlp_predict_proba(const MlpModel& model, const Matrix& x) {
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = mlp_predict_proba(model, x.row(r));
  return out;
}

}  // namespace soaccept::learn
