// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pmatch {

namespace {

double clamp_score(double score) {
  if (std::isnan(score)) throw std::invalid_argument("loss: score is NaN");
  return std::clamp(score, kScoreFloor, 1.0 - kScoreFloor);
}

void check_target(int target) {
  if (target != 0 && target != 1) {
    throw std::invalid_argument("loss: target must be 0 or 1, got " + std::to_string(target));
  }
}

// x^g with the convention 0^0 = 1.
double power(double x, double g) { return g == 0.0 ? 1.0 : std::pow(x, g); }

// d/dx x^g, zero when g == 0.
double power_slope(double x, double g) { return g == 0.0 ? 0.0 : g * std::pow(x, g - 1.0); }

}  // namespace

void LossConfig::validate() const {
  if (!(gamma_pos >= 0.0) || !(gamma_neg >= 0.0)) {
    throw std::invalid_argument("asymmetric focusing exponents must be non-negative");
  }
  if (!(prob_shift >= 0.0 && prob_shift < 1.0)) {
    throw std::invalid_argument("asymmetric probability shift must lie in [0, 1)");
  }
}

double elementwise_loss(int target, double score, const LossConfig& cfg) {
  check_target(target);
  const double p = clamp_score(score);
  if (cfg.kind == LossKind::BinaryCrossEntropy) {
    return target == 1 ? -std::log(p) : -std::log1p(-p);
  }
  if (target == 1) return -power(1.0 - p, cfg.gamma_pos) * std::log(p);
  const double shifted = std::max(p - cfg.prob_shift, 0.0);
  if (shifted == 0.0) return 0.0;
  return -power(shifted, cfg.gamma_neg) * std::log1p(-shifted);
}

double elementwise_gradient(int target, double score, const LossConfig& cfg) {
  check_target(target);
  const double p = clamp_score(score);
  if (cfg.kind == LossKind::BinaryCrossEntropy) {
    return target == 1 ? -1.0 / p : 1.0 / (1.0 - p);
  }
  if (target == 1) {
    const double q = 1.0 - p;
    return power_slope(q, cfg.gamma_pos) * std::log(p) - power(q, cfg.gamma_pos) / p;
  }
  const double shifted = p - cfg.prob_shift;
  if (shifted <= 0.0) return 0.0;
  return -power_slope(shifted, cfg.gamma_neg) * std::log1p(-shifted) +
         power(shifted, cfg.gamma_neg) / (1.0 - shifted);
}

SupervisedLoss supervised_loss(const LabelMatrix& labels, const ScoreMatrix& scores, const LossConfig& cfg) {
  require_same_shape(labels, scores, "supervised_loss");
  if (scores.rows() == 0) throw std::invalid_argument("supervised_loss: empty batch");
  const double inv_batch = 1.0 / static_cast<double>(scores.rows());

  SupervisedLoss out{0.0, ScoreMatrix(scores.rows(), scores.cols())};
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    double row_sum = 0.0;
    for (std::size_t c = 0; c < scores.cols(); ++c) {
      row_sum += elementwise_loss(labels(i, c), scores(i, c), cfg);
      out.grad(i, c) = inv_batch * elementwise_gradient(labels(i, c), scores(i, c), cfg);
    }
    out.value += row_sum;
  }
  out.value *= inv_batch;
  return out;
}

UnlabeledLoss unlabeled_loss(const SelectionMask& mask, const ScoreMatrix& strong_scores,
                             const LossConfig& cfg) {
  require_same_shape(mask.selected, strong_scores, "unlabeled_loss");
  require_same_shape(mask.pseudo, strong_scores, "unlabeled_loss");
  if (strong_scores.rows() == 0) throw std::invalid_argument("unlabeled_loss: empty batch");

  UnlabeledLoss out;
  out.per_class.assign(strong_scores.cols(), 0.0);
  out.grad = ScoreMatrix(strong_scores.rows(), strong_scores.cols());
  for (std::size_t i = 0; i < strong_scores.rows(); ++i) {
    for (std::size_t c = 0; c < strong_scores.cols(); ++c) {
      if (!mask.selected(i, c)) continue;
      ++out.selected;
      out.per_class[c] += elementwise_loss(mask.pseudo(i, c), strong_scores(i, c), cfg);
      out.grad(i, c) = elementwise_gradient(mask.pseudo(i, c), strong_scores(i, c), cfg);
    }
  }

  double denom = static_cast<double>(strong_scores.rows());
  if (cfg.normalize_by_selected) denom = static_cast<double>(out.selected);
  if (denom == 0.0) {
    // Nothing selected: the loss and its gradient are already zero.
    return out;
  }
  const double scale = 1.0 / denom;
  for (double& v : out.per_class) {
    v *= scale;
    out.value += v;
  }
  for (double& g : out.grad.values()) g *= scale;
  return out;
}

double total_loss(double supervised, std::span<const double> unlabeled_per_class,
                  std::span<const double> alpha) {
  if (unlabeled_per_class.size() != alpha.size()) {
    throw std::invalid_argument("total_loss: one weight per class required");
  }
  double acc = supervised;
  for (std::size_t c = 0; c < alpha.size(); ++c) acc += alpha[c] * unlabeled_per_class[c];
  return acc;
}

}  // namespace pmatch
