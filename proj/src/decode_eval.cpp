#include "visdec/decode_eval.hpp"

#include "visdec/preprocess.hpp"
#include "visdec/regressors.hpp"
#include "visdec/similarity.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace visdec {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t cell_seed(std::uint64_t global_seed, const std::string& roi,
                        const std::string& model, std::uint64_t model_seed) {
  std::uint64_t h = 1469598103934665603ull;
  h = fnv1a(&global_seed, sizeof(global_seed), h);
  h = fnv1a(roi.data(), roi.size(), h);
  h = fnv1a("\x1f", 1, h);
  h = fnv1a(model.data(), model.size(), h);
  h = fnv1a(&model_seed, sizeof(model_seed), h);
  return h;
}

// Similarities of one prediction against every prototype row; NaN where the
// metric is undefined for the pair.
void score_candidates(const Vector& pred, const PrototypeSet& protos,
                      Metric metric, std::vector<double>& sims,
                      std::vector<std::string>* diagnostics) {
  const Index k = protos.prototypes.rows();
  sims.assign(static_cast<std::size_t>(k), kNan);
  for (Index i = 0; i < k; ++i) {
    try {
      sims[static_cast<std::size_t>(i)] =
          similarity(metric, pred, protos.prototypes.row(i).transpose());
    } catch (const std::exception& e) {
      if (diagnostics != nullptr) {
        diagnostics->push_back("class '" + protos.class_ids[i] +
                               "' skipped: " + e.what());
      }
    }
  }
}

}  // namespace

IdentificationResult identify(const Vector& y_r, const PrototypeSet& protos,
                              Metric metric) {
  const Index k = protos.prototypes.rows();
  if (k < 2) {
    throw std::invalid_argument("identify: need at least 2 prototype classes");
  }
  if (static_cast<Index>(protos.class_ids.size()) != k) {
    throw std::invalid_argument(
        "identify: class id count differs from prototype rows");
  }
  if (y_r.size() != protos.prototypes.cols()) {
    std::ostringstream os;
    os << "identify: prediction length " << y_r.size()
       << " differs from prototype length " << protos.prototypes.cols();
    throw std::invalid_argument(os.str());
  }

  IdentificationResult res;
  score_candidates(y_r, protos, metric, res.similarities, &res.diagnostics);

  Index best = -1;
  int ties_at_best = 0;
  for (Index i = 0; i < k; ++i) {
    const double s = res.similarities[static_cast<std::size_t>(i)];
    if (std::isnan(s)) continue;
    if (best < 0 || s > res.similarities[static_cast<std::size_t>(best)]) {
      best = i;
      ties_at_best = 1;
    } else if (s == res.similarities[static_cast<std::size_t>(best)]) {
      ++ties_at_best;
      if (protos.class_ids[i] < protos.class_ids[best]) best = i;
    }
  }
  if (best < 0) {
    throw std::runtime_error(
        "identify: metric is degenerate for every candidate class");
  }
  res.predicted_index = best;
  res.predicted_class = protos.class_ids[best];
  res.tied = ties_at_best > 1;
  if (res.tied) {
    res.diagnostics.push_back("tie at max similarity (" +
                              std::to_string(ties_at_best) +
                              " classes); picked smallest class id");
  }
  return res;
}

PairwiseAccuracy pairwise_accuracy(const Matrix& preds, const Labels& labels,
                                   const PrototypeSet& protos, Metric metric) {
  const Index m = preds.rows();
  const Index k = protos.prototypes.rows();
  if (static_cast<Index>(labels.size()) != m) {
    throw std::invalid_argument(
        "pairwise_accuracy: label count differs from prediction rows");
  }
  if (k < 2) {
    throw std::invalid_argument(
        "pairwise_accuracy: need at least 2 prototype classes");
  }
  if (preds.cols() != protos.prototypes.cols()) {
    throw std::invalid_argument(
        "pairwise_accuracy: prediction length differs from prototype length");
  }

  std::unordered_map<std::string, Index> class_index;
  for (Index i = 0; i < k; ++i) class_index.emplace(protos.class_ids[i], i);
  std::vector<Index> true_idx(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    auto it = class_index.find(labels[static_cast<std::size_t>(i)]);
    if (it == class_index.end()) {
      throw std::invalid_argument("pairwise_accuracy: label '" +
                                  labels[static_cast<std::size_t>(i)] +
                                  "' absent from prototype set");
    }
    true_idx[static_cast<std::size_t>(i)] = it->second;
  }

  PairwiseAccuracy pa;
  std::vector<double> sims;
  for (Index i = 0; i < m; ++i) {
    score_candidates(preds.row(i).transpose(), protos, metric, sims, nullptr);
    const double s_true =
        sims[static_cast<std::size_t>(true_idx[static_cast<std::size_t>(i)])];
    for (Index c = 0; c < k; ++c) {
      if (c == true_idx[static_cast<std::size_t>(i)]) continue;
      const double s_other = sims[static_cast<std::size_t>(c)];
      if (std::isnan(s_true) || std::isnan(s_other)) {
        ++pa.skipped_pairs;
        continue;
      }
      if (s_true > s_other) {
        ++pa.wins;
      } else if (s_true == s_other) {
        ++pa.ties;
      } else {
        ++pa.losses;
      }
    }
  }
  const std::int64_t scored = pa.wins + pa.ties + pa.losses;
  if (scored == 0) {
    throw std::runtime_error(
        "pairwise_accuracy: no scorable pairs (metric degenerate on all "
        "candidates)");
  }
  pa.n_pairs = static_cast<std::size_t>(scored);
  pa.accuracy = (static_cast<double>(pa.wins) + 0.5 * static_cast<double>(pa.ties)) /
                static_cast<double>(scored);
  return pa;
}

std::vector<RoiMask> resolve_rois(const std::vector<std::string>& names,
                                  const Dataset& d) {
  const Index dim = d.train_x.cols();
  auto full_vc = [dim]() {
    RoiMask vc;
    vc.name = "VC";
    vc.indices.resize(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) vc.indices[static_cast<std::size_t>(i)] = i;
    return vc;
  };

  std::vector<RoiMask> out;
  auto push_unique = [&out](RoiMask mask) {
    for (const auto& existing : out) {
      if (existing.name == mask.name) return;
    }
    out.push_back(std::move(mask));
  };

  for (const auto& name : names) {
    if (name == "all") {
      for (const auto& roi : d.rois) push_unique(roi);
      push_unique(full_vc());
      continue;
    }
    bool found = false;
    for (const auto& roi : d.rois) {
      if (roi.name == name) {
        push_unique(roi);
        found = true;
        break;
      }
    }
    if (!found) {
      if (name == "VC") {
        push_unique(full_vc());
      } else {
        throw std::invalid_argument("unknown roi '" + name + "'");
      }
    }
  }
  return out;
}

ResultsTable run_experiment(const ExperimentConfig& cfg, const Dataset& d) {
  const ValidationReport report = validate_dataset(d);
  if (!report.ok()) {
    std::string msg = "run_experiment: dataset invalid:";
    for (const auto& violation : report.violations) msg += " [" + violation + "]";
    throw std::invalid_argument(msg);
  }

  const std::vector<RoiMask> rois = resolve_rois(cfg.rois, d);
  const PrototypeSet protos =
      d.prototype_override ? *d.prototype_override
                           : compute_prototypes(d.train_y, d.train_labels);

  // Target normalization is roi- and model-independent.
  const NormStats target_stats = fit_zscore(d.train_y);
  const Matrix train_y_norm = apply_zscore(d.train_y, target_stats);

  struct Cell {
    const RoiMask* roi;
    const RegressorSpec* spec;
  };
  std::vector<Cell> cells;
  for (const auto& roi : rois) {
    for (const auto& spec : cfg.models) cells.push_back({&roi, &spec});
  }

  std::vector<std::vector<ResultRecord>> cell_records(cells.size());

  auto run_cell = [&](std::size_t ci) {
    const Cell& cell = cells[ci];
    auto& records = cell_records[ci];
    const auto t0 = std::chrono::steady_clock::now();

    auto fail_all = [&](const std::string& why, const std::string& params) {
      records.clear();
      for (Metric metric : cfg.metrics) {
        ResultRecord rec;
        rec.roi = cell.roi->name;
        rec.model = cell.spec->name;
        rec.metric = to_string(metric);
        rec.ok = false;
        rec.error = why;
        rec.params = params;
        records.push_back(std::move(rec));
      }
    };

    try {
      Matrix train_x = select_columns(d.train_x, cell.roi->indices);
      Matrix test_x = select_columns(d.test_x, cell.roi->indices);
      const NormStats input_stats = fit_zscore(train_x);
      train_x = apply_zscore(train_x, input_stats);
      test_x = apply_zscore(test_x, input_stats);

      RegressorSpec effective = *cell.spec;
      effective.mlp.seed = cell_seed(cfg.seed, cell.roi->name, cell.spec->name,
                                     cell.spec->mlp.seed);

      const auto model = fit(effective, train_x, train_y_norm);
      const Matrix preds =
          invert_zscore(model->predict(test_x), target_stats);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();

      for (Metric metric : cfg.metrics) {
        ResultRecord rec;
        rec.roi = cell.roi->name;
        rec.model = cell.spec->name;
        rec.metric = to_string(metric);
        rec.params = model->params_description();
        rec.wall_time_sec = seconds;
        try {
          const PairwiseAccuracy pa =
              pairwise_accuracy(preds, d.test_labels, protos, metric);
          rec.accuracy = pa.accuracy;
          rec.n_pairs = pa.n_pairs;
          rec.wins = pa.wins;
          rec.ties = pa.ties;
          rec.losses = pa.losses;
        } catch (const std::exception& e) {
          rec.ok = false;
          rec.error = e.what();
        }
        records.push_back(std::move(rec));
      }
    } catch (const std::exception& e) {
      fail_all(e.what(), "");
    }
  };

  const std::size_t n_threads = std::min<std::size_t>(
      cells.size(), static_cast<std::size_t>(std::max(1, cfg.threads)));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back([&]() {
        for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
          run_cell(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  ResultsTable table;
  for (auto& records : cell_records) {
    for (auto& rec : records) table.records.push_back(std::move(rec));
  }
  return table;
}

}  // namespace visdec
