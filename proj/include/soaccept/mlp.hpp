#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "soaccept/error.hpp"
#include "soaccept/matrix.hpp"
#include "soaccept/resample.hpp"

namespace soaccept::learn {

struct MlpConfig {
  std::vector<std::size_t> hidden{64, 64, 32, 32, 16};
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  std::size_t epochs = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

// Fully connected layer; w is row-major (outputs x inputs).
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> w;
  std::vector<double> b;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Sigmoid after every layer, including the single output unit.
struct MlpModel {
  std::vector<DenseLayer> layers;
  resample::Scaler scaler;        // applied to raw features before the net
  MlpConfig config;
  std::vector<double> epoch_loss;  // mean training loss after each epoch

  std::size_t n_features() const { return layers.empty() ? 0 : layers.front().inputs; }
};

class DivergenceError : public DataError {
 public:
  explicit DivergenceError(std::size_t epoch);
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

// Glorot-uniform weights, zero biases. The scaler is left empty.
MlpModel init_mlp(std::size_t inputs, const MlpConfig& config);

// Output-unit pre-activation for standardized input z.
double mlp_logit(const MlpModel& model, std::span<const double> z);

// Mean binary cross-entropy over standardized rows, computed from logits.
double mlp_loss(const MlpModel& model, const Matrix& z, const Labels& y);

struct MlpGradients {
  std::vector<std::vector<double>> dw;
  std::vector<std::vector<double>> db;
};

// Exact gradient of mlp_loss with respect to every weight and bias.
MlpGradients mlp_gradients(const MlpModel& model, const Matrix& z, const Labels& y);

// Fits the scaler on x, then mini-batch SGD on the standardized rows.
// Throws DivergenceError when the loss stops being finite.
MlpModel fit_mlp(const Matrix& x, const Labels& y, const MlpConfig& config);

// Probability of acceptance for a raw feature row.
double mlp_predict_proba(const MlpModel& model, std::span<const double> x);
std::vector<double> mlp_predict_proba(const MlpModel& model, const Matrix& x);

}  // namespace soaccept::learn
