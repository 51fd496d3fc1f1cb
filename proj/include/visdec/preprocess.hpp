#pragma once

#include "visdec/types.hpp"

namespace visdec {

/// Column means and population standard deviations (divide by N) of `m`.
/// Columns with standard deviation below 1e-12 get stddev 1 so constant
/// channels pass through unscaled. Requires at least 2 rows.
NormStats fit_zscore(const Matrix& m);

/// out[i][j] = (m[i][j] - mean[j]) / stddev[j]
Matrix apply_zscore(const Matrix& m, const NormStats& s);

/// out[i][j] = m[i][j] * stddev[j] + mean[j]
Matrix invert_zscore(const Matrix& m, const NormStats& s);

Matrix select_columns(const Matrix& m, const std::vector<Index>& indices);

/// Dataset with train_x/test_x restricted to the mask columns. Targets and
/// labels are unchanged; the roi list is dropped because the column space
/// of the result no longer matches the masks.
Dataset select_roi(const Dataset& d, const RoiMask& roi);

const RoiMask& find_roi(const Dataset& d, const std::string& name);

/// Per-class arithmetic means of the target rows, classes sorted by id.
PrototypeSet compute_prototypes(const Matrix& targets, const Labels& labels);

}  // namespace visdec
