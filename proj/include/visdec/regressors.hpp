#pragma once

#include "visdec/mlp.hpp"
#include "visdec/types.hpp"

#include <memory>
#include <string>

namespace visdec {

/// A fitted model. Immutable after fit; predict is reentrant.
class Regressor {
 public:
  virtual ~Regressor() = default;

  /// Maps an M x D input matrix to an M x L prediction matrix.
  virtual Matrix predict(const Matrix& x) const = 0;

  virtual const RegressorSpec& spec() const = 0;

  /// Resolved hyperparameters, e.g. "lambda=0.005;degree=2;coef=10;gamma=0.25".
  virtual std::string params_description() const = 0;

  /// Per-epoch training loss; empty for models without iterative training.
  virtual std::vector<double> loss_history() const { return {}; }
};

/// Fits `spec` on row-aligned inputs X (N x D) and targets Y (N x L).
std::unique_ptr<Regressor> fit(const RegressorSpec& spec, const Matrix& x,
                               const Matrix& y);

struct LeastSquaresFit {
  Matrix weights;    // L x D
  Vector intercept;  // L
  std::string diagnostic;  // non-empty when the SPD solve fell back to QR
};

/// Minimizes (1/2N) sum ||Wx + b - y||^2 + (lambda/2N) ||W||_F^2 with an
/// unpenalized intercept: X and Y are centered, (Xc'Xc + lambda I) W' = Xc'Yc
/// is solved by LDLT, and b = ymean - W xmean. lambda = 0 uses a
/// rank-revealing QR solve instead of the normal equations.
LeastSquaresFit solve_least_squares(const Matrix& x, const Matrix& y,
                                    double lambda);

/// (gamma <a,b> + coef)^degree
double polynomial_kernel(const Vector& a, const Vector& b, double gamma,
                         double coef, int degree);

/// Gram matrix K[i][j] = polynomial_kernel(a.row(i), b.row(j), ...).
Matrix polynomial_kernel_matrix(const Matrix& a, const Matrix& b, double gamma,
                                double coef, int degree);

/// Dual coefficients alpha = (K + lambda I)^-1 Y, N x L. Requires lambda > 0.
Matrix kernel_ridge_fit(const Matrix& x, const Matrix& y, double lambda,
                        double gamma, double coef, int degree);

/// Distance-weighted k-nearest-neighbor regression for one query: the k
/// nearest training rows vote with weight 1/distance. Exact matches
/// dominate: if any selected neighbor is at distance zero, the result is
/// the unweighted mean of the zero-distance neighbors' targets.
Vector knn_predict(const Matrix& x, const Matrix& y, int k, const Vector& query);

}  // namespace visdec
