#include "visdec/preprocess.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace visdec {

NormStats fit_zscore(const Matrix& m) {
  if (m.rows() < 2) {
    std::ostringstream os;
    os << "fit_zscore: insufficient rows for statistics (need >= 2, got "
       << m.rows() << ")";
    throw std::invalid_argument(os.str());
  }
  NormStats s;
  s.mean = m.colwise().mean().transpose();
  Matrix centered = m.rowwise() - s.mean.transpose();
  s.stddev = centered.array().square().colwise().mean().sqrt().transpose();
  for (Index j = 0; j < s.stddev.size(); ++j) {
    if (s.stddev[j] < 1e-12) s.stddev[j] = 1.0;  // zero-variance guard
  }
  return s;
}

namespace {

void check_stats_width(const Matrix& m, const NormStats& s, const char* op) {
  if (m.cols() != s.mean.size() || m.cols() != s.stddev.size()) {
    std::ostringstream os;
    os << op << ": dimension mismatch (matrix has " << m.cols()
       << " columns, stats have " << s.mean.size() << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Matrix apply_zscore(const Matrix& m, const NormStats& s) {
  check_stats_width(m, s, "apply_zscore");
  Matrix out = m.rowwise() - s.mean.transpose();
  out.array().rowwise() /= s.stddev.transpose().array();
  return out;
}

Matrix invert_zscore(const Matrix& m, const NormStats& s) {
  check_stats_width(m, s, "invert_zscore");
  Matrix out = m;
  out.array().rowwise() *= s.stddev.transpose().array();
  out.rowwise() += s.mean.transpose();
  return out;
}

Matrix select_columns(const Matrix& m, const std::vector<Index>& indices) {
  Matrix out(m.rows(), static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const Index src = indices[j];
    if (src < 0 || src >= m.cols()) {
      std::ostringstream os;
      os << "select_columns: roi index out of range (" << src << " for "
         << m.cols() << " columns)";
      throw std::out_of_range(os.str());
    }
    out.col(static_cast<Index>(j)) = m.col(src);
  }
  return out;
}

Dataset select_roi(const Dataset& d, const RoiMask& roi) {
  Dataset out;
  out.train_x = select_columns(d.train_x, roi.indices);
  out.test_x = select_columns(d.test_x, roi.indices);
  out.train_y = d.train_y;
  out.train_labels = d.train_labels;
  out.test_labels = d.test_labels;
  out.test_y = d.test_y;
  out.prototype_override = d.prototype_override;
  return out;
}

const RoiMask& find_roi(const Dataset& d, const std::string& name) {
  for (const auto& roi : d.rois) {
    if (roi.name == name) return roi;
  }
  throw std::invalid_argument("unknown roi '" + name + "'");
}

PrototypeSet compute_prototypes(const Matrix& targets, const Labels& labels) {
  if (targets.rows() == 0 || labels.empty()) {
    throw std::invalid_argument("compute_prototypes: empty class set");
  }
  if (static_cast<Index>(labels.size()) != targets.rows()) {
    std::ostringstream os;
    os << "compute_prototypes: label length mismatch (" << labels.size()
       << " labels for " << targets.rows() << " rows)";
    throw std::invalid_argument(os.str());
  }

  // std::map keeps class ids in sorted order.
  std::map<std::string, std::pair<Vector, Index>> sums;
  for (Index i = 0; i < targets.rows(); ++i) {
    auto [it, inserted] = sums.try_emplace(
        labels[i], Vector::Zero(targets.cols()), Index{0});
    it->second.first += targets.row(i).transpose();
    it->second.second += 1;
  }

  PrototypeSet protos;
  protos.prototypes.resize(static_cast<Index>(sums.size()), targets.cols());
  Index k = 0;
  for (const auto& [id, acc] : sums) {
    protos.class_ids.push_back(id);
    protos.prototypes.row(k) =
        (acc.first / static_cast<double>(acc.second)).transpose();
    ++k;
  }
  return protos;
}

}  // namespace visdec
