#pragma once

#include "visdec/types.hpp"

#include <vector>

namespace visdec {

/// One-hidden-layer perceptron: sigmoid hidden layer, identity output.
struct MlpParams {
  Matrix w1;  // hidden x input
  Vector b1;  // hidden
  Matrix w2;  // output x hidden
  Vector b2;  // output
};

/// Gradients share the parameter shapes.
using MlpGradients = MlpParams;

struct AdamState {
  MlpParams m;  // first moments
  MlpParams v;  // second moments
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState zeros_like(const MlpParams& p);
};

struct MlpForwardCache {
  Matrix input;   // B x D, after dropout scaling when a mask was applied
  Matrix hidden;  // B x H sigmoid activations
  Matrix output;  // B x L
};

/// Forward pass over a batch (rows = samples). `dropout_mask`, when given,
/// is a 0/1 matrix of the input shape; kept entries are scaled by
/// 1/(1-dropout_rate) so inference needs no scaling.
MlpForwardCache mlp_forward(const MlpParams& p, const Matrix& x,
                            const Matrix* dropout_mask = nullptr,
                            double dropout_rate = 0.0);

/// Batch-mean 0.5 * ||output - target||^2.
double mlp_loss(const Matrix& output, const Matrix& target);

/// Analytic gradients of mlp_loss w.r.t. all parameters, averaged over the
/// batch that produced `cache`.
MlpGradients mlp_backward(const MlpParams& p, const MlpForwardCache& cache,
                          const Matrix& target);

/// Bias-corrected Adam update, in place.
void adam_step(MlpParams& params, const MlpGradients& grads, AdamState& state,
               double learning_rate);

/// Uniform(-sqrt(6/(fan_in+fan_out)), +...) weights, zero biases.
MlpParams mlp_init(int input_dim, int hidden_units, int output_dim,
                   std::uint64_t seed);

struct MlpFitResult {
  MlpParams params;
  std::vector<double> epoch_loss;  // batch-mean loss per epoch
};

/// Mini-batch Adam training: seeded init, per-epoch row shuffle, fresh
/// dropout mask per sample per batch when dropout_rate > 0. epochs = 0
/// returns the initialized, untrained parameters.
MlpFitResult mlp_fit(const MlpConfig& cfg, const Matrix& x, const Matrix& y);

}  // namespace visdec
