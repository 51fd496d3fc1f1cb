#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace visdec {

// Rows are trials/samples, columns are features (voxels or network units).
// All numerics are 64-bit.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// One class token per matrix row. Tokens are opaque strings; ordering,
/// where it matters, is lexicographic.
using Labels = std::vector<std::string>;

/// Named subset of input columns. Indices must be strictly increasing and
/// each smaller than the column count of the matrix the mask applies to.
struct RoiMask {
  std::string name;
  std::vector<Index> indices;
};

/// Per-column mean and standard deviation captured from a training matrix.
struct NormStats {
  Vector mean;
  Vector stddev;
};

/// Per-class mean target vectors, in original (denormalized) target space.
/// Row k of `prototypes` pairs with `class_ids[k]`; ids are sorted and unique.
struct PrototypeSet {
  std::vector<std::string> class_ids;
  Matrix prototypes;  // K x L
};

struct Dataset {
  Matrix train_x;  // N x D
  Matrix train_y;  // N x L
  Labels train_labels;
  Matrix test_x;  // M x D, same D as train_x
  Labels test_labels;
  std::optional<Matrix> test_y;  // absent for imagery-style test sets
  std::vector<RoiMask> rois;
  // Loaded from an external prototypes file when present; otherwise
  // prototypes are computed from train_y.
  std::optional<PrototypeSet> prototype_override;
};

enum class ModelKind { knn, linear, ridge, kernel_ridge, mlp, mlp_dropout };

std::string to_string(ModelKind kind);
std::optional<ModelKind> model_kind_from_string(const std::string& name);

struct KernelParams {
  int degree = 2;
  double coef = 10.0;
  std::optional<double> gamma;  // empty = "auto" = 1/D, resolved at fit time
};

struct MlpConfig {
  int hidden_units = 300;
  int epochs = 100;
  int batch_size = 128;
  double learning_rate = 1e-3;
  double dropout_rate = 0.0;  // input-layer dropout, inverted scaling
  std::uint64_t seed = 0;
};

struct RegressorSpec {
  ModelKind kind = ModelKind::ridge;
  std::string name;     // display name; defaults to the kind string
  int k = 5;            // knn
  double lambda = 1.0;  // ridge / kernel_ridge regularizer weight
  KernelParams kernel;
  MlpConfig mlp;

  /// Spec with the stock hyperparameters for `kind`.
  static RegressorSpec defaults(ModelKind kind);
};

enum class Metric { euclidean, cosine, pearson };

std::string to_string(Metric m);
std::optional<Metric> metric_from_string(const std::string& name);

struct ExperimentConfig {
  std::string dataset_dir;
  std::vector<RegressorSpec> models;
  std::vector<Metric> metrics;
  std::vector<std::string> rois;  // "all" expands to every mask plus VC
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_stem;  // run writes <stem>.csv and <stem>.md
};

struct ResultRecord {
  std::string roi;
  std::string model;
  std::string metric;
  double accuracy = 0.0;  // fraction in [0,1], valid when ok
  std::size_t n_pairs = 0;
  std::int64_t wins = 0;
  std::int64_t ties = 0;
  std::int64_t losses = 0;
  double wall_time_sec = 0.0;  // cell fit+eval time; never serialized
  bool ok = true;
  std::string params;  // resolved hyperparameters, e.g. "lambda=1"
  std::string error;   // failure reason when !ok
};

struct ResultsTable {
  std::vector<ResultRecord> records;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every structural invariant of `d` and reports all violations.
/// Report-style: never throws; callers decide whether to abort.
ValidationReport validate_dataset(const Dataset& d);

}  // namespace visdec
