// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pmatch/adam.hpp"
#include "pmatch/classifier.hpp"
#include "pmatch/errors.hpp"
#include "pmatch/losses.hpp"
#include "pmatch/trace_json.hpp"

namespace pmatch {

namespace {

using ojson = nlohmann::ordered_json;

// Independent random streams per concern, so changing one consumer does not
// shift the draws of another.
enum Stream : std::uint64_t { kInit = 1, kSampling = 2, kAugment = 3 };

double scheduled_lr(const ExperimentConfig& cfg, long t) {
  const double peak = cfg.adam.lr;
  if (cfg.lr_schedule == LrSchedule::Constant) return peak;
  // Linear ramp over the first 30% from peak/25, then linear decay to ~0.
  const double total = static_cast<double>(cfg.iterations);
  const double rise = 0.3 * total;
  const double x = static_cast<double>(t);
  if (x < rise) return peak * (0.04 + 0.96 * x / rise);
  return peak * std::max(1.0 - (x - rise) / (total - rise), 1e-4);
}

std::vector<std::size_t> draw_indices(std::size_t count, std::size_t population, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, population - 1);
  std::vector<std::size_t> idx(count);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

ojson header_record(const ExperimentConfig& cfg, const SyntheticData& data, const ThresholdState& init) {
  ojson h;
  h["type"] = "header";
  h["format"] = "pmatch-trace";
  h["version"] = 1;
  h["label"] = cfg.label();
  h["method"] = std::string(to_string(cfg.method));
  h["classes"] = data.classes();
  ojson config = ojson::object();
  for (const auto& [k, v] : cfg.entries()) config[k] = v;
  h["config"] = std::move(config);
  ojson dataset = ojson::object();
  for (const auto& [k, v] : cfg.dataset_entries()) dataset[k] = v;
  h["dataset"] = std::move(dataset);
  h["class_priors"] = data.class_priors;
  h["labeled_negative_ratio"] = negative_ratios(data.labeled.labels);
  h["kappa_plus"] = init.kappa_plus;
  h["kappa_minus"] = init.kappa_minus;
  h["fields"] = {
      {"t", "iteration, starting at 0"},
      {"lr", "learning rate used for this step"},
      {"tau_plus", "per-class positive score threshold used for selection"},
      {"tau_minus", "per-class negative score threshold used for selection"},
      {"gap", "per-class tau_plus - tau_minus"},
      {"alpha", "per-class unlabeled loss weight"},
      {"selected_pos", "per-class count of positive pseudo-labels in the unlabeled batch"},
      {"selected_neg", "per-class count of negative pseudo-labels in the unlabeled batch"},
      {"loss_s", "supervised loss"},
      {"loss_u", "unweighted unlabeled loss"},
      {"loss_u_weighted", "unlabeled loss after per-class weighting"},
      {"loss_total", "loss_s + loss_u_weighted"},
      {"eval", "periodic evaluation report (test split; pseudo-label quality on the unlabeled split)"},
  };
  return h;
}

ojson iteration_record(const TraceRecord& r) {
  ojson j;
  j["type"] = "iteration";
  j["t"] = r.iteration;
  j["lr"] = r.lr;
  j["tau_plus"] = r.tau_plus;
  j["tau_minus"] = r.tau_minus;
  j["gap"] = r.gap;
  j["alpha"] = r.alpha;
  j["selected_pos"] = r.selected.positives;
  j["selected_neg"] = r.selected.negatives;
  j["loss_s"] = r.loss_supervised;
  j["loss_u"] = r.loss_unlabeled;
  j["loss_u_weighted"] = r.loss_unlabeled_weighted;
  j["loss_total"] = r.loss_total;
  if (r.eval) j["eval"] = ojson::parse(report_to_json(*r.eval));
  return j;
}

void check_finite(const TraceRecord& r) {
  if (std::isfinite(r.loss_total) && std::isfinite(r.loss_supervised) && std::isfinite(r.loss_unlabeled)) return;
  std::ostringstream msg;
  msg << "non-finite loss at iteration " << r.iteration << ": loss_s=" << r.loss_supervised
      << " loss_u=" << r.loss_unlabeled << " loss_total=" << r.loss_total;
  throw NumericError(msg.str());
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg, std::ostream& trace, const TraceObserver& observer) {
  cfg.validate();
  DatasetSpec spec = cfg.data;
  spec.seed = cfg.seed;
  return run_experiment(cfg, generate_dataset(spec), trace, observer);
}

RunSummary run_experiment(const ExperimentConfig& cfg, const SyntheticData& data, std::ostream& trace,
                          const TraceObserver& observer) {
  cfg.validate();
  const std::size_t classes = data.classes();
  if (data.labeled.size() == 0 || data.unlabeled.size() == 0) {
    throw ConfigError("dataset needs non-empty labeled and unlabeled splits");
  }

  ThresholdState thresholds = init_class_percentiles(cfg.percentiles, data.labeled.labels);
  const ThresholdState initial = thresholds;
  if (cfg.method == Method::FixMatchFixed) {
    thresholds = fixed_thresholds(classes, ExperimentConfig::kFixedTauPlus, ExperimentConfig::kFixedTauMinus);
  }
  std::vector<ClassHistogram> histograms(classes, ClassHistogram(cfg.bins, cfg.decay));

  ToyClassifier model(data.features(), classes, cfg.hidden_units);
  {
    Rng init_rng = make_stream(cfg.seed, kInit);
    model.initialize(init_rng, cfg.init_scale);
    // Start every class at its labeled-set log-odds (add-half smoothed).
    const auto neg = negative_ratios(data.labeled.labels);
    const double n = static_cast<double>(data.labeled.size());
    std::vector<double> bias(classes);
    for (std::size_t c = 0; c < classes; ++c) {
      const double pos = (1.0 - neg[c]) * n;
      bias[c] = std::log((pos + 0.5) / (n - pos + 0.5));
    }
    model.set_output_bias(bias);
  }
  Adam optimizer(model.parameters().size(), cfg.adam);
  Rng sampling = make_stream(cfg.seed, kSampling);
  Rng aug_rng = make_stream(cfg.seed, kAugment);

  trace << header_record(cfg, data, initial).dump() << '\n';

  RunSummary summary;
  summary.mean_gap.reserve(static_cast<std::size_t>(cfg.iterations));
  const std::size_t unlabeled_batch = cfg.unlabeled_batch();
  std::vector<double> grads(model.parameters().size());
  std::vector<double> column(unlabeled_batch);

  for (long t = 0; t < cfg.iterations; ++t) {
    TraceRecord rec;
    rec.iteration = t;
    rec.lr = scheduled_lr(cfg, t);

    // Thresholds and weights come from the histograms as left by iteration t-1.
    if (cfg.method != Method::FixMatchFixed) refresh_thresholds(thresholds, histograms);
    rec.alpha.assign(classes, 0.0);
    if (cfg.method != Method::SupervisedOnly) {
      if (cfg.per_class_alpha) {
        for (std::size_t c = 0; c < classes; ++c) rec.alpha[c] = loss_weight(thresholds.gap[c], t, cfg.schedule);
      } else {
        const double mean_gap =
            std::accumulate(thresholds.gap.begin(), thresholds.gap.end(), 0.0) / static_cast<double>(classes);
        std::fill(rec.alpha.begin(), rec.alpha.end(), loss_weight(mean_gap, t, cfg.schedule));
      }
    }

    const auto labeled_idx = draw_indices(cfg.batch_size, data.labeled.size(), sampling);
    const auto unlabeled_idx = draw_indices(unlabeled_batch, data.unlabeled.size(), sampling);
    const FeatureMatrix labeled_x = data.labeled.features.gather_rows(labeled_idx);
    const LabelMatrix labeled_y = data.labeled.labels.gather_rows(labeled_idx);
    const FeatureMatrix unlabeled_x = data.unlabeled.features.gather_rows(unlabeled_idx);

    const FeatureMatrix labeled_weak = augment(labeled_x, cfg.augmentation, AugmentStrength::Weak, aug_rng);
    const FeatureMatrix unlabeled_weak = augment(unlabeled_x, cfg.augmentation, AugmentStrength::Weak, aug_rng);
    const FeatureMatrix unlabeled_strong = augment(unlabeled_x, cfg.augmentation, AugmentStrength::Strong, aug_rng);

    const auto labeled_act = model.forward(labeled_weak);
    const ScoreMatrix weak_scores = model.predict(unlabeled_weak);
    const auto strong_act = model.forward(unlabeled_strong);

    const SelectionMask mask = select(weak_scores, thresholds.tau_plus, thresholds.tau_minus);
    rec.selected = count_selected(mask);

    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t i = 0; i < unlabeled_batch; ++i) column[i] = weak_scores(i, c);
      histograms[c].update(column);
    }

    const SupervisedLoss ls = supervised_loss(labeled_y, labeled_act.scores, cfg.loss);
    UnlabeledLoss lu = unlabeled_loss(mask, strong_act.scores, cfg.loss);
    rec.loss_supervised = ls.value;
    rec.loss_unlabeled = lu.value;
    rec.loss_total = total_loss(ls.value, lu.per_class, rec.alpha);
    rec.loss_unlabeled_weighted = rec.loss_total - ls.value;
    rec.tau_plus = thresholds.tau_plus;
    rec.tau_minus = thresholds.tau_minus;
    rec.gap = thresholds.gap;
    check_finite(rec);

    for (std::size_t i = 0; i < unlabeled_batch; ++i) {
      for (std::size_t c = 0; c < classes; ++c) lu.grad(i, c) *= rec.alpha[c];
    }
    std::fill(grads.begin(), grads.end(), 0.0);
    model.backward(labeled_weak, labeled_act, ls.grad, grads);
    model.backward(unlabeled_strong, strong_act, lu.grad, grads);
    optimizer.step(model.parameters(), grads, rec.lr);

    const bool last = t + 1 == cfg.iterations;
    if (last || (t + 1) % cfg.eval_every == 0) {
      EvalReport report = evaluate(model.predict(data.test.features), data.test.labels);
      report.iteration = t;
      const SelectionMask full =
          select(model.predict(data.unlabeled.features), thresholds.tau_plus, thresholds.tau_minus);
      report.pseudo = pseudo_label_quality(full, data.unlabeled.labels);
      rec.eval = std::move(report);
    }

    summary.mean_gap.push_back(std::accumulate(rec.gap.begin(), rec.gap.end(), 0.0) / static_cast<double>(classes));
    trace << iteration_record(rec).dump() << '\n';
    if (observer) observer(rec, histograms);
    if (last) summary.final_report = *rec.eval;
  }

  summary.final_thresholds = thresholds;
  summary.histograms = histograms;

  ojson fin;
  fin["type"] = "final";
  fin["iterations"] = cfg.iterations;
  fin["report"] = ojson::parse(report_to_json(summary.final_report));
  fin["tau_plus"] = thresholds.tau_plus;
  fin["tau_minus"] = thresholds.tau_minus;
  fin["gap"] = thresholds.gap;
  ojson hists = ojson::array();
  for (const auto& h : histograms) hists.push_back(std::vector<double>(h.bins().begin(), h.bins().end()));
  fin["histogram_decay"] = cfg.decay;
  fin["histograms"] = std::move(hists);
  trace << fin.dump() << '\n';
  trace.flush();
  if (!trace) throw IoError("failed writing trace output");
  return summary;
}

}  // namespace pmatch
