// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pmatch {

/// Exponential-moving-average histogram of one class's weak-view scores over
/// K equal-width bins of [0, 1]. Mass always sums to one.
///
/// A decay of 0 freezes the histogram: updates are accepted and validated but
/// leave the bins untouched, so a frozen uniform histogram maps every
/// percentile to itself.
class ClassHistogram {
 public:
  static constexpr std::size_t kDefaultBins = 100;
  static constexpr double kDefaultDecay = 0.99;

  /// Uniform histogram with `bin_count` bins. Throws std::invalid_argument if
  /// bin_count is zero or decay lies outside [0, 1].
  ClassHistogram(std::size_t bin_count = kDefaultBins, double decay = kDefaultDecay);

  /// Restores a histogram from stored bins (e.g. a trace dump).
  static ClassHistogram from_bins(std::vector<double> bins, double decay);

  /// Folds one unlabeled mini-batch of scores into the estimate:
  ///   bins <- decay * bins + (1 - decay) * hist(scores) / scores.size()
  /// Scores equal to an interior bin edge land in the upper bin; 1.0 lands in
  /// the top bin. Throws std::invalid_argument on an empty batch or a score
  /// outside [0, 1] (NaN included); the histogram is unchanged on error.
  void update(std::span<const double> scores);

  /// Smallest score at which the piecewise-linear CDF (mass spread uniformly
  /// inside each bin) reaches `percentile`. Returns 0 for 0 and 1 for 1.
  /// Monotone non-decreasing in `percentile`.
  double quantile(double percentile) const;

  /// Piecewise-linear CDF evaluated at `score`.
  double cdf(double score) const;

  std::size_t bin_count() const { return bins_.size(); }
  double decay() const { return decay_; }
  bool frozen() const { return decay_ == 0.0; }
  std::span<const double> bins() const { return bins_; }
  double mass() const;

  /// Bin index for a score in [0, 1].
  std::size_t bin_of(double score) const;

 private:
  std::vector<double> bins_;
  double decay_;
};

}  // namespace pmatch
