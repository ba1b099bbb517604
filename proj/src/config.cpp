// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "pmatch/errors.hpp"

namespace pmatch {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::PercentMatch: return "percentmatch";
    case Method::FixMatchFixed: return "fixmatch-fixed";
    case Method::SupervisedOnly: return "supervised-only";
  }
  return "?";
}

std::string_view to_string(LossKind k) {
  return k == LossKind::BinaryCrossEntropy ? "binary-cross-entropy" : "asymmetric";
}

std::string_view to_string(LrSchedule s) { return s == LrSchedule::Constant ? "constant" : "one-cycle-linear"; }

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("config key '" + std::string(key) + "': expected " + std::string(expected) + ", got '" +
                    std::string(value) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) bad_value(key, value, "a number");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "true or false");
}

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}
template <typename T>
std::string fmt_int(T v) {
  return std::to_string(v);
}
std::string fmt(bool v) { return v ? "true" : "false"; }

struct Field {
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  bool dataset = false;
};

#define PM_DOUBLE(KEY, MEMBER, DATA)                                                                      \
  Field {                                                                                                 \
    KEY, [](const ExperimentConfig& c) { return fmt(c.MEMBER); },                                          \
        [](ExperimentConfig& c, std::string_view v) { c.MEMBER = parse_number<double>(KEY, v); }, DATA    \
  }
#define PM_INT(KEY, MEMBER, TYPE, DATA)                                                                   \
  Field {                                                                                                 \
    KEY, [](const ExperimentConfig& c) { return fmt_int(c.MEMBER); },                                      \
        [](ExperimentConfig& c, std::string_view v) { c.MEMBER = parse_number<TYPE>(KEY, v); }, DATA      \
  }
#define PM_BOOL(KEY, MEMBER)                                                                              \
  Field {                                                                                                 \
    KEY, [](const ExperimentConfig& c) { return fmt(c.MEMBER); },                                          \
        [](ExperimentConfig& c, std::string_view v) { c.MEMBER = parse_bool(KEY, v); }, false             \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{"name", [](const ExperimentConfig& c) { return c.name; },
            [](ExperimentConfig& c, std::string_view v) { c.name = std::string(v); }},
      PM_INT("seed", seed, std::uint64_t, true),
      PM_INT("num_samples", data.samples, std::size_t, true),
      PM_INT("num_classes", data.classes, std::size_t, true),
      PM_INT("num_features", data.features, std::size_t, true),
      PM_INT("test_samples", data.test_samples, std::size_t, true),
      PM_DOUBLE("imbalance_ratio", data.imbalance_ratio, true),
      PM_DOUBLE("label_fraction", data.label_fraction, true),
      PM_DOUBLE("max_prior", data.max_prior, true),
      PM_DOUBLE("prototype_scale", data.prototype_scale, true),
      PM_DOUBLE("noise_scale", data.noise_scale, true),
      Field{"method", [](const ExperimentConfig& c) { return std::string(to_string(c.method)); },
            [](ExperimentConfig& c, std::string_view v) {
              if (v == "percentmatch") {
                c.method = Method::PercentMatch;
              } else if (v == "fixmatch-fixed") {
                c.method = Method::FixMatchFixed;
              } else if (v == "supervised-only") {
                c.method = Method::SupervisedOnly;
              } else {
                bad_value("method", v, "percentmatch, fixmatch-fixed or supervised-only");
              }
            }},
      PM_DOUBLE("kappa_plus", percentiles.kappa_plus, false),
      PM_DOUBLE("kappa_minus", percentiles.kappa_minus, false),
      PM_BOOL("clamp_negative_percentile", percentiles.clamp_negative),
      PM_DOUBLE("decay", decay, false),
      PM_INT("bins", bins, std::size_t, false),
      PM_INT("batch_size", batch_size, std::size_t, false),
      PM_INT("mu", mu, std::size_t, false),
      PM_DOUBLE("gap_start", schedule.gap_start, false),
      PM_DOUBLE("gap_saturate", schedule.gap_saturate, false),
      PM_DOUBLE("alpha_saturate", schedule.alpha_saturate, false),
      PM_INT("warmup_iters", schedule.warmup_iters, long, false),
      PM_BOOL("per_class_alpha", per_class_alpha),
      Field{"loss", [](const ExperimentConfig& c) { return std::string(to_string(c.loss.kind)); },
            [](ExperimentConfig& c, std::string_view v) {
              if (v == "binary-cross-entropy" || v == "bce") {
                c.loss.kind = LossKind::BinaryCrossEntropy;
              } else if (v == "asymmetric") {
                c.loss.kind = LossKind::Asymmetric;
              } else {
                bad_value("loss", v, "binary-cross-entropy or asymmetric");
              }
            }},
      PM_DOUBLE("asl_gamma_pos", loss.gamma_pos, false),
      PM_DOUBLE("asl_gamma_neg", loss.gamma_neg, false),
      PM_DOUBLE("asl_prob_shift", loss.prob_shift, false),
      PM_BOOL("normalize_by_selected", loss.normalize_by_selected),
      PM_DOUBLE("lr", adam.lr, false),
      PM_DOUBLE("adam_beta1", adam.beta1, false),
      PM_DOUBLE("adam_beta2", adam.beta2, false),
      PM_DOUBLE("adam_epsilon", adam.epsilon, false),
      Field{"lr_schedule", [](const ExperimentConfig& c) { return std::string(to_string(c.lr_schedule)); },
            [](ExperimentConfig& c, std::string_view v) {
              if (v == "constant") {
                c.lr_schedule = LrSchedule::Constant;
              } else if (v == "one-cycle-linear") {
                c.lr_schedule = LrSchedule::OneCycleLinear;
              } else {
                bad_value("lr_schedule", v, "constant or one-cycle-linear");
              }
            }},
      PM_INT("iterations", iterations, long, false),
      PM_INT("eval_every", eval_every, long, false),
      PM_INT("hidden_units", hidden_units, std::size_t, false),
      PM_DOUBLE("init_scale", init_scale, false),
      PM_DOUBLE("weak_noise", augmentation.weak_noise, false),
      PM_DOUBLE("strong_noise", augmentation.strong_noise, false),
      PM_DOUBLE("strong_dropout", augmentation.strong_dropout, false),
  };
  return table;
}

#undef PM_DOUBLE
#undef PM_INT
#undef PM_BOOL

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(*this, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(*this));
  return out;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::dataset_entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) {
    if (f.dataset) out.emplace_back(f.key, f.get(*this));
  }
  return out;
}

void ExperimentConfig::validate() const {
  try {
    data.validate();
    schedule.validate();
    loss.validate();
    augmentation.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto& p = percentiles;
  if (!(p.kappa_minus >= 0.0 && p.kappa_minus < p.kappa_plus && p.kappa_plus <= 1.0)) {
    throw ConfigError("percentiles must satisfy 0 <= kappa_minus < kappa_plus <= 1");
  }
  if (!(decay >= 0.0 && decay <= 1.0)) throw ConfigError("decay must lie in [0, 1]");
  if (bins == 0) throw ConfigError("bins must be positive");
  if (batch_size == 0 || mu == 0) throw ConfigError("batch_size and mu must be positive");
  if (!(adam.lr > 0.0)) throw ConfigError("lr must be positive");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw ConfigError("adam betas must lie in [0, 1)");
  }
  if (!(adam.epsilon > 0.0)) throw ConfigError("adam_epsilon must be positive");
  if (iterations <= 0) throw ConfigError("iterations must be positive");
  if (eval_every <= 0) throw ConfigError("eval_every must be positive");
  if (!(init_scale >= 0.0)) throw ConfigError("init_scale must be non-negative");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg.entries()) out += k + " = " + v + "\n";
  return out;
}

}  // namespace pmatch
