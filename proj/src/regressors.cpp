#include "visdec/regressors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace visdec {

namespace {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double resolve_gamma(const KernelParams& kp, Index input_dim) {
  if (kp.gamma) return *kp.gamma;
  return 1.0 / static_cast<double>(input_dim);
}

class LinearRegressor final : public Regressor {
 public:
  LinearRegressor(RegressorSpec spec, LeastSquaresFit fit)
      : spec_(std::move(spec)), fit_(std::move(fit)) {}

  Matrix predict(const Matrix& x) const override {
    if (x.cols() != fit_.weights.cols()) {
      std::ostringstream os;
      os << "predict: dimension mismatch (input has " << x.cols()
         << " columns, model expects " << fit_.weights.cols() << ")";
      throw std::invalid_argument(os.str());
    }
    return (x * fit_.weights.transpose()).rowwise() +
           fit_.intercept.transpose();
  }

  const RegressorSpec& spec() const override { return spec_; }

  std::string params_description() const override {
    std::string out = "lambda=" + fmt_num(spec_.lambda);
    if (!fit_.diagnostic.empty()) out += ";fallback=qr";
    return out;
  }

  const LeastSquaresFit& solution() const { return fit_; }

 private:
  RegressorSpec spec_;
  LeastSquaresFit fit_;
};

class KnnRegressor final : public Regressor {
 public:
  KnnRegressor(RegressorSpec spec, Matrix x, Matrix y)
      : spec_(std::move(spec)), x_(std::move(x)), y_(std::move(y)) {}

  Matrix predict(const Matrix& q) const override {
    if (q.cols() != x_.cols()) {
      throw std::invalid_argument("predict: dimension mismatch");
    }
    Matrix out(q.rows(), y_.cols());
    for (Index i = 0; i < q.rows(); ++i) {
      out.row(i) =
          knn_predict(x_, y_, spec_.k, q.row(i).transpose()).transpose();
    }
    return out;
  }

  const RegressorSpec& spec() const override { return spec_; }

  std::string params_description() const override {
    return "k=" + std::to_string(spec_.k);
  }

 private:
  RegressorSpec spec_;
  Matrix x_;
  Matrix y_;
};

class KernelRidgeRegressor final : public Regressor {
 public:
  KernelRidgeRegressor(RegressorSpec spec, Matrix x, Matrix alpha, double gamma)
      : spec_(std::move(spec)),
        x_(std::move(x)),
        alpha_(std::move(alpha)),
        gamma_(gamma) {}

  Matrix predict(const Matrix& q) const override {
    if (q.cols() != x_.cols()) {
      throw std::invalid_argument("predict: dimension mismatch");
    }
    Matrix k = polynomial_kernel_matrix(q, x_, gamma_, spec_.kernel.coef,
                                        spec_.kernel.degree);
    return k * alpha_;
  }

  const RegressorSpec& spec() const override { return spec_; }

  std::string params_description() const override {
    return "lambda=" + fmt_num(spec_.lambda) +
           ";degree=" + std::to_string(spec_.kernel.degree) +
           ";coef=" + fmt_num(spec_.kernel.coef) + ";gamma=" + fmt_num(gamma_);
  }

 private:
  RegressorSpec spec_;
  Matrix x_;
  Matrix alpha_;  // N x L
  double gamma_;
};

class MlpRegressor final : public Regressor {
 public:
  MlpRegressor(RegressorSpec spec, MlpFitResult fit)
      : spec_(std::move(spec)), fit_(std::move(fit)) {}

  Matrix predict(const Matrix& x) const override {
    return mlp_forward(fit_.params, x).output;
  }

  const RegressorSpec& spec() const override { return spec_; }

  std::string params_description() const override {
    const auto& m = spec_.mlp;
    return "hidden=" + std::to_string(m.hidden_units) +
           ";epochs=" + std::to_string(m.epochs) +
           ";batch=" + std::to_string(m.batch_size) +
           ";lr=" + fmt_num(m.learning_rate) +
           ";dropout=" + fmt_num(m.dropout_rate) +
           ";seed=" + std::to_string(m.seed);
  }

  std::vector<double> loss_history() const override { return fit_.epoch_loss; }
  const MlpParams& params() const { return fit_.params; }

 private:
  RegressorSpec spec_;
  MlpFitResult fit_;
};

}  // namespace

LeastSquaresFit solve_least_squares(const Matrix& x, const Matrix& y,
                                    double lambda) {
  if (x.rows() != y.rows()) {
    throw std::invalid_argument("solve_least_squares: X and Y row counts differ");
  }
  if (x.rows() < 1) {
    throw std::invalid_argument("solve_least_squares: empty system");
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("solve_least_squares: lambda must be >= 0");
  }

  const Vector x_mean = x.colwise().mean().transpose();
  const Vector y_mean = y.colwise().mean().transpose();
  Matrix xc = x.rowwise() - x_mean.transpose();
  Matrix yc = y.rowwise() - y_mean.transpose();

  LeastSquaresFit out;
  Matrix wt;  // D x L
  if (lambda > 0.0) {
    Matrix normal = xc.transpose() * xc;
    normal.diagonal().array() += lambda;
    Eigen::LDLT<Matrix> ldlt(normal);
    wt = ldlt.solve(xc.transpose() * yc);
    if (ldlt.info() != Eigen::Success || !wt.allFinite()) {
      // Rank-revealing fallback on the augmented system [Xc; sqrt(lambda) I].
      Matrix aug(xc.rows() + xc.cols(), xc.cols());
      aug.topRows(xc.rows()) = xc;
      aug.bottomRows(xc.cols()) =
          std::sqrt(lambda) * Matrix::Identity(xc.cols(), xc.cols());
      Matrix rhs = Matrix::Zero(aug.rows(), yc.cols());
      rhs.topRows(yc.rows()) = yc;
      Eigen::ColPivHouseholderQR<Matrix> qr(aug);
      wt = qr.solve(rhs);
      std::ostringstream os;
      os << "normal-equation factorization failed; used rank-revealing QR"
         << " (rank " << qr.rank() << " of " << xc.cols() << ")";
      out.diagnostic = os.str();
    }
  } else {
    Eigen::ColPivHouseholderQR<Matrix> qr(xc);
    wt = qr.solve(yc);
  }

  if (!wt.allFinite()) {
    throw std::runtime_error(
        "solve_least_squares: solve produced non-finite values (singular or "
        "ill-conditioned system)");
  }
  out.weights = wt.transpose();
  out.intercept = y_mean - out.weights * x_mean;
  return out;
}

double polynomial_kernel(const Vector& a, const Vector& b, double gamma,
                         double coef, int degree) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("polynomial_kernel: length mismatch");
  }
  if (degree < 0) {
    throw std::invalid_argument("polynomial_kernel: degree must be >= 0");
  }
  const double base = gamma * a.dot(b) + coef;
  double result = 1.0;
  for (int d = 0; d < degree; ++d) result *= base;
  return result;
}

Matrix polynomial_kernel_matrix(const Matrix& a, const Matrix& b, double gamma,
                                double coef, int degree) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("polynomial_kernel_matrix: column mismatch");
  }
  if (degree < 0) {
    throw std::invalid_argument("polynomial_kernel_matrix: degree must be >= 0");
  }
  Matrix base = (gamma * (a * b.transpose())).array() + coef;
  Matrix out = Matrix::Ones(base.rows(), base.cols());
  for (int d = 0; d < degree; ++d) out = out.cwiseProduct(base);
  return out;
}

Matrix kernel_ridge_fit(const Matrix& x, const Matrix& y, double lambda,
                        double gamma, double coef, int degree) {
  if (x.rows() != y.rows()) {
    throw std::invalid_argument("kernel_ridge_fit: X and Y row counts differ");
  }
  if (x.rows() < 1) {
    throw std::invalid_argument("kernel_ridge_fit: empty training set");
  }
  if (lambda <= 0.0) {
    throw std::invalid_argument("kernel_ridge_fit: lambda must be > 0");
  }
  Matrix k = polynomial_kernel_matrix(x, x, gamma, coef, degree);
  k.diagonal().array() += lambda;
  Eigen::LDLT<Matrix> ldlt(k);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error(
        "kernel_ridge_fit: factorization failed (K + lambda I not numerically "
        "positive definite)");
  }
  Matrix alpha = ldlt.solve(y);
  if (!alpha.allFinite()) {
    throw std::runtime_error(
        "kernel_ridge_fit: solve produced non-finite coefficients");
  }
  return alpha;
}

Vector knn_predict(const Matrix& x, const Matrix& y, int k,
                   const Vector& query) {
  const Index n = x.rows();
  if (k < 1 || static_cast<Index>(k) > n) {
    std::ostringstream os;
    os << "knn_predict: k=" << k << " out of range for " << n
       << " training rows";
    throw std::invalid_argument(os.str());
  }
  if (query.size() != x.cols()) {
    throw std::invalid_argument("knn_predict: dimension mismatch");
  }

  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  Vector dists(n);
  for (Index i = 0; i < n; ++i) {
    dists[i] = (x.row(i).transpose() - query).norm();
  }
  // Ties in distance break toward the lower row index, so selection is
  // deterministic.
  auto closer = [&](Index a, Index b) {
    return dists[a] != dists[b] ? dists[a] < dists[b] : a < b;
  };
  std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.end(), closer);
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end(), closer);

  Vector out = Vector::Zero(y.cols());
  Index exact = 0;
  for (Index i : idx) {
    if (dists[i] == 0.0) {
      out += y.row(i).transpose();
      ++exact;
    }
  }
  if (exact > 0) return out / static_cast<double>(exact);

  double weight_sum = 0.0;
  for (Index i : idx) {
    const double w = 1.0 / dists[i];
    out += w * y.row(i).transpose();
    weight_sum += w;
  }
  return out / weight_sum;
}

std::unique_ptr<Regressor> fit(const RegressorSpec& spec, const Matrix& x,
                               const Matrix& y) {
  if (x.rows() != y.rows()) {
    throw std::invalid_argument("fit: X and Y row counts differ");
  }
  if (x.rows() < 1) {
    throw std::invalid_argument("fit: empty training set");
  }
  switch (spec.kind) {
    case ModelKind::knn: {
      if (static_cast<Index>(spec.k) > x.rows() || spec.k < 1) {
        std::ostringstream os;
        os << "fit: k=" << spec.k << " out of range for " << x.rows()
           << " training rows";
        throw std::invalid_argument(os.str());
      }
      return std::make_unique<KnnRegressor>(spec, x, y);
    }
    case ModelKind::linear:
      return std::make_unique<LinearRegressor>(
          spec, solve_least_squares(x, y, 0.0));
    case ModelKind::ridge:
      return std::make_unique<LinearRegressor>(
          spec, solve_least_squares(x, y, spec.lambda));
    case ModelKind::kernel_ridge: {
      const double gamma = resolve_gamma(spec.kernel, x.cols());
      Matrix alpha = kernel_ridge_fit(x, y, spec.lambda, gamma,
                                      spec.kernel.coef, spec.kernel.degree);
      return std::make_unique<KernelRidgeRegressor>(spec, x, std::move(alpha),
                                                    gamma);
    }
    case ModelKind::mlp:
    case ModelKind::mlp_dropout:
      return std::make_unique<MlpRegressor>(spec, mlp_fit(spec.mlp, x, y));
  }
  throw std::invalid_argument("fit: unknown model kind");
}

}  // namespace visdec
