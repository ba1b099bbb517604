// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "pmatch/matrix.hpp"
#include "pmatch/pseudo_labeler.hpp"

namespace pmatch {

enum class LossKind { BinaryCrossEntropy, Asymmetric };

/// Element loss H(target, score). The asymmetric kind is
///   target 1: -(1 - p)^gamma_pos * log(p)
///   target 0: -(p_m)^gamma_neg * log(1 - p_m),  p_m = max(p - prob_shift, 0)
/// and reduces to binary cross-entropy when all three parameters are zero.
struct LossConfig {
  LossKind kind = LossKind::BinaryCrossEntropy;
  double gamma_pos = 0.0;
  double gamma_neg = 0.0;
  double prob_shift = 0.0;
  /// Divide the unlabeled loss by the number of selected entries instead of
  /// the unlabeled batch size.
  bool normalize_by_selected = false;

  void validate() const;
};

inline constexpr double kScoreFloor = 1e-7;

double elementwise_loss(int target, double score, const LossConfig& cfg);

/// d H / d score, evaluated at the clamped score.
double elementwise_gradient(int target, double score, const LossConfig& cfg);

struct SupervisedLoss {
  double value = 0.0;
  ScoreMatrix grad;  // d value / d score
};

/// Mean over the batch of the class-summed element loss.
SupervisedLoss supervised_loss(const LabelMatrix& labels, const ScoreMatrix& scores, const LossConfig& cfg);

struct UnlabeledLoss {
  double value = 0.0;
  std::vector<double> per_class;  // value == sum(per_class)
  ScoreMatrix grad;               // unweighted d value / d strong score
  std::size_t selected = 0;
};

/// Masked loss of pseudo-labels against strong-view scores, normalized by the
/// unlabeled batch size. Entries with selected == 0 contribute nothing and get
/// a zero gradient regardless of their score.
UnlabeledLoss unlabeled_loss(const SelectionMask& mask, const ScoreMatrix& strong_scores,
                             const LossConfig& cfg);

inline double total_loss(double supervised, double unlabeled, double alpha) {
  return supervised + alpha * unlabeled;
}

/// Per-class weighting: supervised + sum_c alpha[c] * unlabeled_per_class[c].
double total_loss(double supervised, std::span<const double> unlabeled_per_class,
                  std::span<const double> alpha);

}  // namespace pmatch
