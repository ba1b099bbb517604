// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include "pmatch/dataset.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pmatch/errors.hpp"

namespace pmatch {

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

void DatasetSpec::validate() const {
  if (samples == 0 || classes == 0 || features == 0) {
    throw std::invalid_argument("dataset needs positive sample, class and feature counts");
  }
  if (!(label_fraction > 0.0 && label_fraction < 1.0)) {
    throw std::invalid_argument("label_fraction must lie in (0, 1)");
  }
  if (!(imbalance_ratio >= 1.0)) throw std::invalid_argument("imbalance_ratio must be >= 1");
  if (!(max_prior > 0.0 && max_prior < 1.0)) {
    throw std::invalid_argument("class priors must lie in (0, 1); max_prior=" + std::to_string(max_prior));
  }
  if (!(prototype_scale > 0.0) || !(noise_scale >= 0.0)) {
    throw std::invalid_argument("prototype_scale must be positive and noise_scale non-negative");
  }
  const auto labeled = static_cast<std::size_t>(std::llround(label_fraction * static_cast<double>(samples)));
  if (labeled == 0 || labeled >= samples) {
    throw std::invalid_argument("label_fraction leaves an empty labeled or unlabeled split");
  }
}

std::vector<double> class_priors(double max_prior, std::size_t classes, double imbalance_ratio) {
  std::vector<double> priors(classes, max_prior);
  if (classes < 2) return priors;
  const double log_span = std::log(imbalance_ratio);
  for (std::size_t c = 1; c < classes; ++c) {
    const double frac = static_cast<double>(c) / static_cast<double>(classes - 1);
    priors[c] = max_prior * std::exp(-frac * log_span);
  }
  priors.back() = max_prior / imbalance_ratio;
  return priors;
}

namespace {

Dataset draw(std::size_t n, const std::vector<double>& priors, const FeatureMatrix& prototypes,
             double noise_scale, Rng& rng) {
  const std::size_t classes = priors.size();
  const std::size_t dims = prototypes.cols();
  Dataset out{FeatureMatrix(n, dims), LabelMatrix(n, classes)};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = out.features.row(i);
    for (std::size_t c = 0; c < classes; ++c) {
      if (unit(rng) < priors[c]) {
        out.labels(i, c) = 1;
        auto proto = prototypes.row(c);
        for (std::size_t d = 0; d < dims; ++d) x[d] += proto[d];
      }
    }
    for (std::size_t d = 0; d < dims; ++d) x[d] += noise_scale * noise(rng);
  }
  return out;
}

Dataset slice(const Dataset& src, std::size_t begin, std::size_t end) {
  std::vector<std::size_t> idx(end - begin);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = begin + i;
  return {src.features.gather_rows(idx), src.labels.gather_rows(idx)};
}

}  // namespace

SyntheticData generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  Rng rng = make_stream(spec.seed, 0x5eed'da7aULL);

  const auto priors = class_priors(spec.max_prior, spec.classes, spec.imbalance_ratio);

  FeatureMatrix prototypes(spec.classes, spec.features);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    auto proto = prototypes.row(c);
    double norm = 0.0;
    for (double& v : proto) {
      v = gauss(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : proto) v *= spec.prototype_scale / norm;
  }

  const Dataset pool = draw(spec.samples, priors, prototypes, spec.noise_scale, rng);
  const auto labeled = static_cast<std::size_t>(std::llround(spec.label_fraction * static_cast<double>(spec.samples)));

  SyntheticData data;
  data.labeled = slice(pool, 0, labeled);
  data.unlabeled = slice(pool, labeled, spec.samples);
  data.test = draw(spec.test_samples, priors, prototypes, spec.noise_scale, rng);
  data.class_priors = priors;
  data.imbalance_ratio = priors.front() / priors.back();
  return data;
}

namespace {

void write_split(std::ostream& out, const char* name, const Dataset& d) {
  char buf[32];
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << name;
    for (double v : d.features.row(i)) {
      auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    for (auto y : d.labels.row(i)) out << ',' << static_cast<int>(y);
    out << '\n';
  }
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw IoError("dataset line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::size_t header_value(const std::string& header, const std::string& key) {
  const auto pos = header.find(key + "=");
  if (pos == std::string::npos) throw IoError("dataset header lacks '" + key + "'");
  return std::stoul(header.substr(pos + key.size() + 1));
}

}  // namespace

void write_dataset(std::ostream& out, const SyntheticData& data) {
  const std::size_t dims = data.features();
  const std::size_t classes = data.classes();
  out << "# pmatch-dataset v1 features=" << dims << " classes=" << classes << '\n';
  out << "# priors";
  char buf[32];
  for (double p : data.class_priors) {
    auto res = std::to_chars(buf, buf + sizeof(buf), p);
    out << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
  }
  out << '\n' << "split";
  for (std::size_t d = 0; d < dims; ++d) out << ",x" << d;
  for (std::size_t c = 0; c < classes; ++c) out << ",y" << c;
  out << '\n';
  write_split(out, "labeled", data.labeled);
  write_split(out, "unlabeled", data.unlabeled);
  write_split(out, "test", data.test);
}

SyntheticData read_dataset(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# pmatch-dataset v1", 0) != 0) {
    throw IoError("not a pmatch dataset dump");
  }
  const std::size_t dims = header_value(header, "features");
  const std::size_t classes = header_value(header, "classes");

  std::string line;
  if (!std::getline(in, line) || line.rfind("# priors", 0) != 0) throw IoError("dataset dump lacks priors line");
  SyntheticData data;
  {
    std::istringstream ps(line.substr(8));
    std::string tok;
    while (ps >> tok) data.class_priors.push_back(parse_double(tok, 2));
  }
  if (data.class_priors.size() != classes) throw IoError("dataset priors do not match class count");
  if (!std::getline(in, line)) throw IoError("dataset dump lacks column header");

  std::vector<double> feats[3];
  std::vector<std::uint8_t> labels[3];
  std::size_t line_no = 3;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string_view rest(line);
    auto next = [&]() {
      const auto comma = rest.find(',');
      std::string_view field = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      return field;
    };
    const auto split = next();
    int which = split == "labeled" ? 0 : split == "unlabeled" ? 1 : split == "test" ? 2 : -1;
    if (which < 0) throw IoError("dataset line " + std::to_string(line_no) + ": unknown split");
    for (std::size_t d = 0; d < dims; ++d) feats[which].push_back(parse_double(next(), line_no));
    for (std::size_t c = 0; c < classes; ++c) {
      const auto f = next();
      if (f != "0" && f != "1") throw IoError("dataset line " + std::to_string(line_no) + ": bad label");
      labels[which].push_back(f == "1" ? 1 : 0);
    }
    if (!rest.empty()) throw IoError("dataset line " + std::to_string(line_no) + ": too many columns");
  }
  Dataset* out[3] = {&data.labeled, &data.unlabeled, &data.test};
  for (int s = 0; s < 3; ++s) {
    const std::size_t rows = labels[s].size() / classes;
    out[s]->features = FeatureMatrix(rows, dims, std::move(feats[s]));
    out[s]->labels = LabelMatrix(rows, classes, std::move(labels[s]));
  }
  data.imbalance_ratio = data.class_priors.front() / data.class_priors.back();
  return data;
}

void AugmentationPolicy::validate() const {
  if (!(weak_noise >= 0.0) || !(weak_noise < strong_noise)) {
    throw std::invalid_argument("augmentation needs 0 <= weak_noise < strong_noise");
  }
  if (!(strong_dropout >= 0.0 && strong_dropout < 1.0)) {
    throw std::invalid_argument("strong_dropout must lie in [0, 1)");
  }
}

FeatureMatrix augment(const FeatureMatrix& x, const AugmentationPolicy& policy, AugmentStrength strength,
                      Rng& rng) {
  FeatureMatrix out = x;
  const bool strong = strength == AugmentStrength::Strong;
  const double sigma = strong ? policy.strong_noise : policy.weak_noise;
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution drop(strong ? policy.strong_dropout : 0.0);
  for (double& v : out.values()) {
    if (sigma > 0.0) v += sigma * noise(rng);
    if (strong && drop(rng)) v = 0.0;
  }
  return out;
}

}  // namespace pmatch
