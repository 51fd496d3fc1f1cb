#pragma once

#include "visdec/types.hpp"

namespace visdec {

/// Seeded generator spec. Targets are drawn around K Gaussian class centers
/// scaled by class_separation; inputs encode the targets through a planted
/// full-rank map plus Gaussian noise, mirroring a brain-activity encoding
/// that the pipeline has to invert.
struct SynthSpec {
  enum class Mapping { linear, quadratic };

  std::uint64_t seed = 0;
  int n_classes = 2;
  int train_per_class = 1;
  int test_per_class = 1;
  int input_dim = 1;   // D
  int target_dim = 1;  // L
  Mapping mapping = Mapping::linear;
  double noise_sigma = 0.0;
  double class_separation = 1.0;
};

struct SynthTruth {
  Matrix encode_linear;     // D x L
  Matrix encode_quadratic;  // D x L; empty for linear mapping
  Matrix centers;           // K x L
};

struct SynthResult {
  Dataset dataset;
  SynthTruth truth;
};

/// Linear mapping: x = A y + eps, A random full-rank (requires D >= L).
/// Quadratic adds B (y .* y). Class k contributes train_per_class train
/// rows and test_per_class test rows; within-class jitter is
/// 0.05 * class_separation. Masks: full-width VC plus two random subsets.
SynthResult gen_dataset(const SynthSpec& s);

/// Structured targets but inputs drawn independently of them, so decoding
/// accuracy must sit at chance level. mapping/noise_sigma/class_separation
/// are ignored.
Dataset gen_noise_only(const SynthSpec& s);

}  // namespace visdec
