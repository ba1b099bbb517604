// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "pmatch/matrix.hpp"

namespace pmatch {

using Rng = std::mt19937_64;
using FeatureMatrix = Matrix<double>;

/// Independent deterministic stream `stream` derived from a run seed.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

struct Dataset {
  FeatureMatrix features;
  LabelMatrix labels;

  std::size_t size() const { return features.rows(); }
};

struct DatasetSpec {
  std::uint64_t seed = 0;
  std::size_t samples = 5000;  // labeled + unlabeled pool
  std::size_t classes = 20;
  std::size_t features = 50;
  std::size_t test_samples = 2000;
  double imbalance_ratio = 20.0;  // largest prior / smallest prior
  double label_fraction = 0.1;
  double max_prior = 0.4;
  double prototype_scale = 4.0;  // norm of each class prototype
  double noise_scale = 1.0;      // per-feature noise standard deviation

  void validate() const;
};

/// Labeled / unlabeled / test splits of one synthetic multi-label problem.
/// The unlabeled split keeps its labels for evaluation only.
struct SyntheticData {
  Dataset labeled;
  Dataset unlabeled;
  Dataset test;
  std::vector<double> class_priors;
  double imbalance_ratio = 1.0;

  std::size_t classes() const { return class_priors.size(); }
  std::size_t features() const { return labeled.features.cols(); }
};

/// Priors log-spaced from max_prior down to max_prior / imbalance_ratio.
std::vector<double> class_priors(double max_prior, std::size_t classes, double imbalance_ratio);

/// Each class is present independently with its prior; a sample's features
/// are the sum of the prototypes of its active classes plus isotropic noise.
/// The first round(label_fraction * samples) pool samples form the labeled
/// split. Identical specs give identical data.
SyntheticData generate_dataset(const DatasetSpec& spec);

/// Columnar text dump: two comment lines (shape, priors), a column header,
/// then one CSV row per sample tagged with its split.
void write_dataset(std::ostream& out, const SyntheticData& data);
SyntheticData read_dataset(std::istream& in);

struct AugmentationPolicy {
  double weak_noise = 0.3;
  double strong_noise = 1.0;
  double strong_dropout = 0.2;

  void validate() const;
};

enum class AugmentStrength { Weak, Strong };

/// Weak: additive Gaussian noise. Strong: larger noise, then each feature is
/// zeroed with probability strong_dropout.
FeatureMatrix augment(const FeatureMatrix& x, const AugmentationPolicy& policy, AugmentStrength strength,
                      Rng& rng);

}  // namespace pmatch
