// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pmatch {

namespace {

void check_lengths(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& values, std::vector<std::size_t>& skipped) {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (values[c]) {
      acc += *values[c];
      ++n;
    } else {
      skipped.push_back(c);
    }
  }
  if (n == 0) return std::nullopt;
  return acc / static_cast<double>(n);
}

}  // namespace

std::optional<double> average_precision(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_lengths(scores, labels);
  const auto positives = static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](auto y) { return y != 0; }));
  if (positives == 0) return std::nullopt;

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] == 0) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(positives);
}

std::optional<double> roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_lengths(scores, labels);
  const std::size_t n = scores.size();
  std::size_t positives = 0;
  for (auto y : labels) positives += y != 0 ? 1 : 0;
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mann-Whitney U with mid-ranks for ties.
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) positive_rank_sum += mid_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

std::optional<double> ClassPseudoQuality::positive_precision() const { return ratio(positive_correct, positive_selected); }
std::optional<double> ClassPseudoQuality::positive_recall() const { return ratio(positive_correct, positive_true); }
std::optional<double> ClassPseudoQuality::negative_precision() const { return ratio(negative_correct, negative_selected); }
std::optional<double> ClassPseudoQuality::negative_recall() const { return ratio(negative_correct, negative_true); }

std::vector<ClassPseudoQuality> pseudo_label_quality(const SelectionMask& mask, const LabelMatrix& truth) {
  require_same_shape(mask.selected, truth, "pseudo_label_quality");
  std::vector<ClassPseudoQuality> out(truth.cols());
  for (std::size_t i = 0; i < truth.rows(); ++i) {
    for (std::size_t c = 0; c < truth.cols(); ++c) {
      auto& q = out[c];
      const bool present = truth(i, c) != 0;
      if (present) {
        ++q.positive_true;
      } else {
        ++q.negative_true;
      }
      if (!mask.selected(i, c)) continue;
      if (mask.pseudo(i, c)) {
        ++q.positive_selected;
        q.positive_correct += present ? 1 : 0;
      } else {
        ++q.negative_selected;
        q.negative_correct += present ? 0 : 1;
      }
    }
  }
  return out;
}

EvalReport evaluate(const ScoreMatrix& scores, const LabelMatrix& labels) {
  require_same_shape(scores, labels, "evaluate");
  EvalReport r;
  r.ap.resize(scores.cols());
  r.auc.resize(scores.cols());
  for (std::size_t c = 0; c < scores.cols(); ++c) {
    const auto s = scores.column(c);
    const auto y = labels.column(c);
    r.ap[c] = average_precision(s, y);
    r.auc[c] = roc_auc(s, y);
  }
  r.mean_ap = mean_of(r.ap, r.skipped_ap);
  r.macro_auc = mean_of(r.auc, r.skipped_auc);
  return r;
}

}  // namespace pmatch
