// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pmatch/adam.hpp"
#include "pmatch/dataset.hpp"
#include "pmatch/losses.hpp"
#include "pmatch/threshold_controller.hpp"

namespace pmatch {

enum class Method { PercentMatch, FixMatchFixed, SupervisedOnly };
enum class LrSchedule { Constant, OneCycleLinear };

std::string_view to_string(Method m);
std::string_view to_string(LossKind k);
std::string_view to_string(LrSchedule s);

/// Everything a run needs. Defaults are the desk-scale configuration.
struct ExperimentConfig {
  std::string name;  // free-form run label; the method name when empty
  std::uint64_t seed = 0;
  DatasetSpec data;
  Method method = Method::PercentMatch;

  PercentileInit percentiles;
  double decay = ClassHistogram::kDefaultDecay;
  std::size_t bins = ClassHistogram::kDefaultBins;
  WeightSchedule schedule;
  bool per_class_alpha = true;

  std::size_t batch_size = 36;  // labeled batch B
  std::size_t mu = 1;           // unlabeled batch is mu * B

  LossConfig loss;
  AdamOptions adam;
  LrSchedule lr_schedule = LrSchedule::Constant;
  long iterations = 10000;
  long eval_every = 200;

  std::size_t hidden_units = 64;
  double init_scale = 0.1;
  AugmentationPolicy augmentation;

  static constexpr double kFixedTauPlus = 0.95;
  static constexpr double kFixedTauMinus = 0.0;

  std::string label() const { return name.empty() ? std::string(to_string(method)) : name; }
  std::size_t unlabeled_batch() const { return mu * batch_size; }

  /// Throws ConfigError describing the first invalid field.
  void validate() const;

  /// Assigns one field by its config-file key. Throws ConfigError for an
  /// unknown key or unparsable value.
  void set(std::string_view key, std::string_view value);

  /// Canonical key/value pairs, in a fixed order, covering every field.
  std::vector<std::pair<std::string, std::string>> entries() const;

  /// Key/value pairs identifying the generated data (seed included).
  std::vector<std::pair<std::string, std::string>> dataset_entries() const;
};

/// Flat `key = value` document; `#` starts a comment, blank lines ignored.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
std::string format_config(const ExperimentConfig& cfg);

}  // namespace pmatch
