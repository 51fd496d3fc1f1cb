#pragma once

#include "visdec/types.hpp"

namespace visdec {

struct IdentificationResult {
  std::string predicted_class;
  Index predicted_index = -1;
  // Aligned with the prototype set's class ids; NaN marks a candidate the
  // metric could not score.
  std::vector<double> similarities;
  std::vector<std::string> diagnostics;  // skipped candidates, tie notes
  bool tied = false;
  std::string true_class;  // filled by evaluation callers, not by identify
};

/// argmax_k S(y_r, prototype_k). Candidates the metric rejects are skipped
/// with a diagnostic; exact ties break toward the smallest class id.
/// Throws when every candidate is skipped or fewer than 2 classes exist.
IdentificationResult identify(const Vector& y_r, const PrototypeSet& protos,
                              Metric metric);

struct PairwiseAccuracy {
  double accuracy = 0.0;
  std::size_t n_pairs = 0;  // scored pairs
  std::int64_t wins = 0;
  std::int64_t ties = 0;
  std::int64_t losses = 0;
  std::size_t skipped_pairs = 0;  // pairs the metric could not score
};

/// Binary identification over every (test sample, distractor class) pair:
/// sample i with true class c scores a win against class k != c when
/// S(pred_i, proto_c) > S(pred_i, proto_k), a tie on equality. Accuracy is
/// (wins + 0.5 ties) / scored pairs; chance level is 0.5.
PairwiseAccuracy pairwise_accuracy(const Matrix& preds, const Labels& labels,
                                   const PrototypeSet& protos, Metric metric);

/// Full sweep: for every requested roi x model, slice columns, z-score
/// inputs and targets on training statistics, fit, predict, denormalize,
/// and score each metric against the prototype set. Cells fail in
/// isolation; a failed cell yields error records for its metrics. Cell
/// RNG streams derive from (seed, roi, model), so thread count never
/// changes the numbers.
ResultsTable run_experiment(const ExperimentConfig& cfg, const Dataset& d);

/// Masks named in `names` resolved against the dataset: "all" expands to
/// every dataset mask plus a full-width VC; "VC" is synthesized as the
/// full-width mask when absent from the dataset.
std::vector<RoiMask> resolve_rois(const std::vector<std::string>& names,
                                  const Dataset& d);

}  // namespace visdec
