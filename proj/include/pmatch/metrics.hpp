// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pmatch/matrix.hpp"
#include "pmatch/pseudo_labeler.hpp"

namespace pmatch {

/// Non-interpolated average precision: sweep samples by descending score
/// (ties keep input order) and average the precision at every positive.
/// Empty when there are no positives.
std::optional<double> average_precision(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Probability that a random positive outscores a random negative, ties
/// counted half. Empty unless both polarities are present.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct ClassPseudoQuality {
  std::size_t positive_selected = 0;
  std::size_t positive_correct = 0;
  std::size_t positive_true = 0;  // ground-truth positives among the scored entries
  std::size_t negative_selected = 0;
  std::size_t negative_correct = 0;
  std::size_t negative_true = 0;

  std::optional<double> positive_precision() const;
  std::optional<double> positive_recall() const;
  std::optional<double> negative_precision() const;
  std::optional<double> negative_recall() const;
};

std::vector<ClassPseudoQuality> pseudo_label_quality(const SelectionMask& mask, const LabelMatrix& truth);

struct EvalReport {
  long iteration = -1;
  std::vector<std::optional<double>> ap;   // per class; empty where skipped
  std::vector<std::optional<double>> auc;  // per class; empty where skipped
  std::optional<double> mean_ap;           // over non-skipped classes
  std::optional<double> macro_auc;
  std::vector<std::size_t> skipped_ap;
  std::vector<std::size_t> skipped_auc;
  std::vector<ClassPseudoQuality> pseudo;  // empty unless measured

  static constexpr const char* kApVariant = "non-interpolated";
};

EvalReport evaluate(const ScoreMatrix& scores, const LabelMatrix& labels);

}  // namespace pmatch
