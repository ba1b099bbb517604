// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pmatch/matrix.hpp"
#include "pmatch/score_histogram.hpp"

namespace pmatch {

/// Per-class percentile targets and the score thresholds derived from them.
struct ThresholdState {
  std::vector<double> kappa_plus;
  std::vector<double> kappa_minus;
  std::vector<double> tau_plus;
  std::vector<double> tau_minus;
  std::vector<double> gap;  // tau_plus - tau_minus

  std::size_t class_count() const { return kappa_plus.size(); }
};

/// Maps a class's threshold gap to its unlabeled loss weight.
struct WeightSchedule {
  double gap_start = 0.5;      // weight is zero below this gap
  double gap_saturate = 0.55;  // weight is alpha_saturate above this gap
  double alpha_saturate = 1.0;
  long warmup_iters = 300;  // weight is zero for t < warmup_iters

  /// Throws std::invalid_argument unless gap_start < gap_saturate,
  /// alpha_saturate > 0 and warmup_iters >= 0.
  void validate() const;
};

struct PercentileInit {
  double kappa_plus = 0.98;
  double kappa_minus = 0.1;
  /// Apply min(kappa_minus, negative ratio). The positive clamp is always on.
  bool clamp_negative = true;
};

/// Per-class percentile targets from the global ones and the negative ratio
/// r_c of each class in the labeled set:
///   kappa_plus[c]  = max(kappa_plus,  r_c)
///   kappa_minus[c] = min(kappa_minus, r_c)
/// Score thresholds start at the percentiles (quantiles of a uniform
/// histogram). Throws std::invalid_argument for an empty labeled set or bad
/// global ordering, and ConfigError naming every class whose clamped targets
/// violate kappa_minus < kappa_plus.
ThresholdState init_class_percentiles(const PercentileInit& init, const LabelMatrix& labeled_labels);

/// Fraction of zero labels per class.
std::vector<double> negative_ratios(const LabelMatrix& labels);

/// Recomputes tau and gap for every class from its histogram.
void refresh_thresholds(ThresholdState& state, std::span<const ClassHistogram> histograms);

/// Thresholds pinned to fixed score values for every class (gap = tau_plus -
/// tau_minus); used for the fixed-threshold baseline.
ThresholdState fixed_thresholds(std::size_t classes, double tau_plus, double tau_minus);

/// Unlabeled loss weight for one class. Zero during warmup or below
/// gap_start, alpha_saturate above gap_saturate, linear in between (the ramp
/// is evaluated at both boundaries, so the function is continuous).
double loss_weight(double gap, long iteration, const WeightSchedule& schedule);

}  // namespace pmatch
