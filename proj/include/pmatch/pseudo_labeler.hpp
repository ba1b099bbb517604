// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pmatch/matrix.hpp"

namespace pmatch {

/// Which (sample, class) pairs feed the unlabeled loss, and their hard targets.
struct SelectionMask {
  LabelMatrix selected;  // 1 iff score > tau_plus or score < tau_minus
  LabelMatrix pseudo;    // 1 iff score > tau_plus; meaningless where selected == 0

  std::size_t rows() const { return selected.rows(); }
  std::size_t cols() const { return selected.cols(); }
};

struct SelectionCounts {
  std::vector<std::size_t> positives;  // per class
  std::vector<std::size_t> negatives;
};

/// Selects pseudo-labels from weak-view scores. Scores strictly above
/// tau_plus[c] become positives, strictly below tau_minus[c] negatives; the
/// closed interval between them is discarded. Throws std::invalid_argument
/// for scores outside [0, 1], threshold vectors of the wrong length, or
/// tau_minus[c] > tau_plus[c].
SelectionMask select(const ScoreMatrix& weak_scores, std::span<const double> tau_plus,
                     std::span<const double> tau_minus);

SelectionCounts count_selected(const SelectionMask& mask);

}  // namespace pmatch
