// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch/pseudo_labeler.hpp"

#include <stdexcept>
#include <string>

namespace pmatch {

SelectionMask select(const ScoreMatrix& weak_scores, std::span<const double> tau_plus,
                     std::span<const double> tau_minus) {
  const std::size_t classes = weak_scores.cols();
  if (tau_plus.size() != classes || tau_minus.size() != classes) {
    throw std::invalid_argument("select: threshold vectors must have one entry per class");
  }
  for (std::size_t c = 0; c < classes; ++c) {
    if (!(tau_minus[c] <= tau_plus[c])) {
      throw std::invalid_argument("select: tau_minus exceeds tau_plus for class " + std::to_string(c));
    }
  }

  SelectionMask mask{LabelMatrix(weak_scores.rows(), classes), LabelMatrix(weak_scores.rows(), classes)};
  for (std::size_t i = 0; i < weak_scores.rows(); ++i) {
    for (std::size_t c = 0; c < classes; ++c) {
      const double p = weak_scores(i, c);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("select: score outside [0, 1] at (" + std::to_string(i) + ", " +
                                    std::to_string(c) + ")");
      }
      const bool positive = p > tau_plus[c];
      const bool negative = p < tau_minus[c];
      mask.selected(i, c) = (positive || negative) ? 1 : 0;
      mask.pseudo(i, c) = positive ? 1 : 0;
    }
  }
  return mask;
}

SelectionCounts count_selected(const SelectionMask& mask) {
  SelectionCounts counts{std::vector<std::size_t>(mask.cols(), 0), std::vector<std::size_t>(mask.cols(), 0)};
  for (std::size_t i = 0; i < mask.rows(); ++i) {
    for (std::size_t c = 0; c < mask.cols(); ++c) {
      if (!mask.selected(i, c)) continue;
      if (mask.pseudo(i, c)) {
        ++counts.positives[c];
      } else {
        ++counts.negatives[c];
      }
    }
  }
  return counts;
}

}  // namespace pmatch
