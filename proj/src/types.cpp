#include "visdec/types.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace visdec {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::knn: return "knn";
    case ModelKind::linear: return "linear";
    case ModelKind::ridge: return "ridge";
    case ModelKind::kernel_ridge: return "kernel_ridge";
    case ModelKind::mlp: return "mlp";
    case ModelKind::mlp_dropout: return "mlp_dropout";
  }
  return "unknown";
}

std::optional<ModelKind> model_kind_from_string(const std::string& name) {
  if (name == "knn") return ModelKind::knn;
  if (name == "linear") return ModelKind::linear;
  if (name == "ridge") return ModelKind::ridge;
  if (name == "kernel_ridge") return ModelKind::kernel_ridge;
  if (name == "mlp") return ModelKind::mlp;
  if (name == "mlp_dropout") return ModelKind::mlp_dropout;
  return std::nullopt;
}

RegressorSpec RegressorSpec::defaults(ModelKind kind) {
  RegressorSpec spec;
  spec.kind = kind;
  spec.name = to_string(kind);
  switch (kind) {
    case ModelKind::knn:
      spec.k = 5;
      break;
    case ModelKind::linear:
      spec.lambda = 0.0;
      break;
    case ModelKind::ridge:
      spec.lambda = 1.0;
      break;
    case ModelKind::kernel_ridge:
      spec.lambda = 0.005;
      spec.kernel.degree = 2;
      spec.kernel.coef = 10.0;
      spec.kernel.gamma = std::nullopt;
      break;
    case ModelKind::mlp:
      spec.mlp.dropout_rate = 0.0;
      break;
    case ModelKind::mlp_dropout:
      spec.mlp.dropout_rate = 0.3;
      break;
  }
  return spec;
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::cosine: return "cosine";
    case Metric::pearson: return "pearson";
  }
  return "unknown";
}

std::optional<Metric> metric_from_string(const std::string& name) {
  if (name == "euclidean") return Metric::euclidean;
  if (name == "cosine") return Metric::cosine;
  if (name == "pearson") return Metric::pearson;
  return std::nullopt;
}

namespace {

void check_matrix(const Matrix& m, const std::string& name,
                  std::vector<std::string>& out) {
  if (m.rows() < 1 || m.cols() < 1) {
    out.push_back(name + ": empty matrix");
    return;
  }
  if (!m.allFinite()) {
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        if (!std::isfinite(m(i, j))) {
          std::ostringstream os;
          os << name << ": non-finite entry at (" << i << "," << j << ")";
          out.push_back(os.str());
          return;
        }
      }
    }
  }
}

void check_labels(const Labels& labels, Index rows, const std::string& name,
                  std::vector<std::string>& out) {
  if (static_cast<Index>(labels.size()) != rows) {
    std::ostringstream os;
    os << name << ": label length mismatch (" << labels.size()
       << " labels for " << rows << " rows)";
    out.push_back(os.str());
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) {
      out.push_back(name + ": empty label at row " + std::to_string(i));
      break;
    }
  }
}

}  // namespace

ValidationReport validate_dataset(const Dataset& d) {
  ValidationReport r;
  auto& v = r.violations;

  check_matrix(d.train_x, "train_x", v);
  check_matrix(d.train_y, "train_y", v);
  check_matrix(d.test_x, "test_x", v);
  if (d.test_y) check_matrix(*d.test_y, "test_y", v);

  if (d.train_y.rows() != d.train_x.rows()) {
    std::ostringstream os;
    os << "train_x/train_y row mismatch (" << d.train_x.rows() << " vs "
       << d.train_y.rows() << ")";
    v.push_back(os.str());
  }
  check_labels(d.train_labels, d.train_x.rows(), "train_labels", v);
  check_labels(d.test_labels, d.test_x.rows(), "test_labels", v);

  if (d.test_x.cols() != d.train_x.cols()) {
    std::ostringstream os;
    os << "test_x column mismatch (" << d.test_x.cols() << " vs train_x "
       << d.train_x.cols() << ")";
    v.push_back(os.str());
  }
  if (d.test_y) {
    if (d.test_y->rows() != d.test_x.rows()) {
      v.push_back("test_y row count differs from test_x");
    }
    if (d.test_y->cols() != d.train_y.cols()) {
      v.push_back("test_y column count differs from train_y");
    }
  }

  const Index dim = d.train_x.cols();
  std::set<std::string> roi_names;
  for (const auto& roi : d.rois) {
    const std::string tag = "roi '" + roi.name + "'";
    if (!roi_names.insert(roi.name).second) {
      v.push_back("duplicate roi name '" + roi.name + "'");
    }
    if (roi.indices.empty()) {
      v.push_back(tag + ": empty index list");
      continue;
    }
    Index prev = -1;
    for (Index idx : roi.indices) {
      if (idx < 0 || idx >= dim) {
        std::ostringstream os;
        os << tag << ": roi index out of range (" << idx << " for " << dim
           << " columns)";
        v.push_back(os.str());
        break;
      }
      if (idx <= prev) {
        v.push_back(tag + ": indices not strictly increasing");
        break;
      }
      prev = idx;
    }
  }

  if (d.prototype_override) {
    const auto& p = *d.prototype_override;
    if (static_cast<Index>(p.class_ids.size()) != p.prototypes.rows()) {
      v.push_back("prototypes: class id count differs from row count");
    }
    std::set<std::string> ids(p.class_ids.begin(), p.class_ids.end());
    if (ids.size() != p.class_ids.size()) {
      v.push_back("prototypes: duplicate class ids");
    }
    if (p.prototypes.cols() != d.train_y.cols()) {
      v.push_back("prototypes: column count differs from train_y");
    }
    check_matrix(p.prototypes, "prototypes", v);
  }

  return r;
}

}  // namespace visdec
