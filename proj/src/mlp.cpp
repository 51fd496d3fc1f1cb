#include "visdec/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace visdec {

AdamState AdamState::zeros_like(const MlpParams& p) {
  AdamState s;
  s.m.w1 = Matrix::Zero(p.w1.rows(), p.w1.cols());
  s.m.b1 = Vector::Zero(p.b1.size());
  s.m.w2 = Matrix::Zero(p.w2.rows(), p.w2.cols());
  s.m.b2 = Vector::Zero(p.b2.size());
  s.v = s.m;
  return s;
}

MlpForwardCache mlp_forward(const MlpParams& p, const Matrix& x,
                            const Matrix* dropout_mask, double dropout_rate) {
  if (x.cols() != p.w1.cols()) {
    std::ostringstream os;
    os << "mlp_forward: dimension mismatch (input has " << x.cols()
       << " columns, w1 expects " << p.w1.cols() << ")";
    throw std::invalid_argument(os.str());
  }
  MlpForwardCache cache;
  if (dropout_mask != nullptr) {
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
      throw std::invalid_argument("mlp_forward: dropout rate must be in [0,1)");
    }
    if (dropout_mask->rows() != x.rows() || dropout_mask->cols() != x.cols()) {
      throw std::invalid_argument("mlp_forward: dropout mask shape mismatch");
    }
    cache.input = x.cwiseProduct(*dropout_mask) / (1.0 - dropout_rate);
  } else {
    cache.input = x;
  }
  Matrix z1 = (cache.input * p.w1.transpose()).rowwise() + p.b1.transpose();
  cache.hidden = z1.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  cache.output = (cache.hidden * p.w2.transpose()).rowwise() + p.b2.transpose();
  return cache;
}

double mlp_loss(const Matrix& output, const Matrix& target) {
  if (output.rows() != target.rows() || output.cols() != target.cols()) {
    throw std::invalid_argument("mlp_loss: output/target shape mismatch");
  }
  return 0.5 * (output - target).squaredNorm() /
         static_cast<double>(output.rows());
}

MlpGradients mlp_backward(const MlpParams& p, const MlpForwardCache& cache,
                          const Matrix& target) {
  const double batch = static_cast<double>(cache.output.rows());
  Matrix d_out = (cache.output - target) / batch;  // B x L
  MlpGradients g;
  g.w2 = d_out.transpose() * cache.hidden;  // L x H
  g.b2 = d_out.colwise().sum().transpose();
  Matrix d_hidden = d_out * p.w2;  // B x H
  Matrix d_z1 = d_hidden.cwiseProduct(
      cache.hidden.cwiseProduct(Matrix::Ones(cache.hidden.rows(),
                                             cache.hidden.cols()) -
                                cache.hidden));
  g.w1 = d_z1.transpose() * cache.input;  // H x D
  g.b1 = d_z1.colwise().sum().transpose();
  return g;
}

namespace {

template <typename T>
void adam_update(T& param, const T& grad, T& m, T& v, double lr, double bc1,
                 double bc2, double beta1, double beta2, double eps) {
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
  param.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
}

}  // namespace

void adam_step(MlpParams& params, const MlpGradients& grads, AdamState& state,
               double learning_rate) {
  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  adam_update(params.w1, grads.w1, state.m.w1, state.v.w1, learning_rate, bc1,
              bc2, state.beta1, state.beta2, state.epsilon);
  adam_update(params.b1, grads.b1, state.m.b1, state.v.b1, learning_rate, bc1,
              bc2, state.beta1, state.beta2, state.epsilon);
  adam_update(params.w2, grads.w2, state.m.w2, state.v.w2, learning_rate, bc1,
              bc2, state.beta1, state.beta2, state.epsilon);
  adam_update(params.b2, grads.b2, state.m.b2, state.v.b2, learning_rate, bc1,
              bc2, state.beta1, state.beta2, state.epsilon);
}

namespace {

Matrix glorot_uniform(Index rows, Index cols, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  }
  return m;
}

MlpParams init_with(std::mt19937_64& rng, Index input_dim, Index hidden,
                    Index output_dim) {
  MlpParams p;
  p.w1 = glorot_uniform(hidden, input_dim, rng);
  p.b1 = Vector::Zero(hidden);
  p.w2 = glorot_uniform(output_dim, hidden, rng);
  p.b2 = Vector::Zero(output_dim);
  return p;
}

}  // namespace

MlpParams mlp_init(int input_dim, int hidden_units, int output_dim,
                   std::uint64_t seed) {
  if (input_dim < 1 || hidden_units < 1 || output_dim < 1) {
    throw std::invalid_argument("mlp_init: dimensions must be positive");
  }
  std::mt19937_64 rng(seed);
  return init_with(rng, input_dim, hidden_units, output_dim);
}

MlpFitResult mlp_fit(const MlpConfig& cfg, const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows()) {
    throw std::invalid_argument("mlp_fit: X and Y row counts differ");
  }
  if (x.rows() < 1) {
    throw std::invalid_argument("mlp_fit: empty training set");
  }
  if (cfg.hidden_units < 1) {
    throw std::invalid_argument("mlp_fit: hidden_units must be >= 1");
  }
  if (cfg.batch_size < 1) {
    throw std::invalid_argument("mlp_fit: batch_size must be >= 1");
  }
  if (cfg.epochs < 0) {
    throw std::invalid_argument("mlp_fit: epochs must be >= 0");
  }
  if (cfg.learning_rate <= 0.0) {
    throw std::invalid_argument("mlp_fit: learning_rate must be > 0");
  }
  if (cfg.dropout_rate < 0.0 || cfg.dropout_rate >= 1.0) {
    throw std::invalid_argument("mlp_fit: dropout_rate must be in [0,1)");
  }

  const Index n = x.rows();
  std::mt19937_64 rng(cfg.seed);
  MlpFitResult result;
  result.params = init_with(rng, x.cols(), cfg.hidden_units, y.cols());
  AdamState state = AdamState::zeros_like(result.params);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::bernoulli_distribution keep(1.0 - cfg.dropout_rate);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    Index batches = 0;
    for (Index start = 0; start < n; start += cfg.batch_size) {
      const Index b = std::min<Index>(cfg.batch_size, n - start);
      Matrix xb(b, x.cols());
      Matrix yb(b, y.cols());
      for (Index r = 0; r < b; ++r) {
        xb.row(r) = x.row(order[static_cast<std::size_t>(start + r)]);
        yb.row(r) = y.row(order[static_cast<std::size_t>(start + r)]);
      }

      Matrix mask;
      const Matrix* mask_ptr = nullptr;
      if (cfg.dropout_rate > 0.0) {
        mask.resize(b, x.cols());
        for (Index r = 0; r < b; ++r) {
          for (Index c = 0; c < x.cols(); ++c) {
            mask(r, c) = keep(rng) ? 1.0 : 0.0;
          }
        }
        mask_ptr = &mask;
      }

      MlpForwardCache cache =
          mlp_forward(result.params, xb, mask_ptr, cfg.dropout_rate);
      const double loss = mlp_loss(cache.output, yb);
      if (!std::isfinite(loss)) {
        std::ostringstream os;
        os << "mlp_fit: non-finite loss at epoch " << epoch << ", batch "
           << batches;
        throw std::runtime_error(os.str());
      }
      MlpGradients grads = mlp_backward(result.params, cache, yb);
      adam_step(result.params, grads, state, cfg.learning_rate);
      loss_sum += loss;
      ++batches;
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(batches));
  }
  return result;
}

}  // namespace visdec
