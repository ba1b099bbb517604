// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmatch/config.hpp"
#include "pmatch/metrics.hpp"
#include "pmatch/pseudo_labeler.hpp"
#include "pmatch/score_histogram.hpp"
#include "pmatch/threshold_controller.hpp"

namespace pmatch {

/// Telemetry for one training iteration.
struct TraceRecord {
  long iteration = 0;
  double lr = 0.0;
  std::vector<double> tau_plus;
  std::vector<double> tau_minus;
  std::vector<double> gap;
  std::vector<double> alpha;
  SelectionCounts selected;
  double loss_supervised = 0.0;
  double loss_unlabeled = 0.0;           // unweighted
  double loss_unlabeled_weighted = 0.0;  // alpha already applied
  double loss_total = 0.0;
  std::optional<EvalReport> eval;
};

struct RunSummary {
  EvalReport final_report;
  ThresholdState final_thresholds;
  std::vector<double> mean_gap;  // per iteration, averaged over classes
  std::vector<ClassHistogram> histograms;
};

/// Called after every iteration with its record and the histograms as they
/// stand after that iteration's update.
using TraceObserver = std::function<void(const TraceRecord&, std::span<const ClassHistogram>)>;

/// Runs the full semi-supervised training loop and streams one JSON record
/// per line to `trace`: a header, one record per iteration, and a final
/// record with the closing report and histogram state.
///
/// Each iteration converts percentiles to score thresholds from the
/// histograms as left by the previous iteration, computes per-class loss
/// weights, selects pseudo-labels on the weak view, then folds the weak
/// scores into the histograms before the loss and the optimizer step.
///
/// Throws ConfigError before training on an invalid config and NumericError
/// (with iteration diagnostics) on a non-finite loss.
RunSummary run_experiment(const ExperimentConfig& cfg, std::ostream& trace, const TraceObserver& observer = {});
RunSummary run_experiment(const ExperimentConfig& cfg, const SyntheticData& data, std::ostream& trace,
                          const TraceObserver& observer = {});

/// Final-record view of one trace file.
struct TraceResult {
  std::string path;
  std::string label;
  std::string method;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> dataset;  // fingerprint
  std::optional<double> mean_ap;
  std::optional<double> macro_auc;
  std::optional<double> positive_precision;  // pooled over classes
  std::optional<double> negative_precision;
};

TraceResult read_trace_result(const std::string& path);
TraceResult read_trace_result(std::istream& in, const std::string& path = "<stream>");

struct ArmSeedDelta {
  std::uint64_t seed = 0;
  std::optional<double> map_delta;
  std::optional<double> auc_delta;
};

struct ComparisonArm {
  std::string label;
  std::vector<TraceResult> runs;  // sorted by seed
  std::optional<double> mean_map;
  std::optional<double> mean_auc;
  std::optional<double> mean_positive_precision;
  std::optional<double> mean_negative_precision;
  std::vector<ArmSeedDelta> deltas;  // versus the reference arm
  std::optional<double> mean_map_delta;
  std::size_t seeds_not_worse = 0;  // map_delta >= 0
};

struct Comparison {
  std::string reference;  // label of the first arm
  std::vector<ComparisonArm> arms;
};

/// Groups traces into arms by run label (first appearance order; a repeated
/// (label, seed) pair opens a new arm) and tabulates each arm against the
/// first. Throws std::invalid_argument for fewer than two traces and
/// MismatchError when arms cover different seeds or different data.
Comparison compare_runs(const std::vector<TraceResult>& traces);

std::string comparison_to_json(const Comparison& cmp);
std::string comparison_to_text(const Comparison& cmp);

}  // namespace pmatch
