// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "pmatch/errors.hpp"
#include "pmatch/threshold_controller.hpp"

using namespace pmatch;

namespace {

// One class per entry; `negatives[c]` of `rows` labels are zero.
LabelMatrix labels_with_negatives(std::size_t rows, const std::vector<std::size_t>& negatives) {
  LabelMatrix y(rows, negatives.size(), 1);
  for (std::size_t c = 0; c < negatives.size(); ++c) {
    for (std::size_t i = 0; i < negatives[c]; ++i) y(i, c) = 0;
  }
  return y;
}

}  // namespace

TEST_CASE("negative ratios count zeros per class") {
  const auto y = labels_with_negatives(200, {199, 100, 10, 0});
  const auto r = negative_ratios(y);
  CHECK(r[0] == 0.995);
  CHECK(r[1] == 0.5);
  CHECK(r[2] == 0.05);
  CHECK(r[3] == 0.0);
  CHECK_THROWS_AS(negative_ratios(LabelMatrix(0, 3)), std::invalid_argument);
}

TEST_CASE("percentile init clamps to labeled ratios") {
  const auto y = labels_with_negatives(200, {199, 100, 10});
  const auto s = init_class_percentiles(PercentileInit{0.98, 0.1, true}, y);
  CHECK(s.kappa_plus[0] == 0.995);
  CHECK(s.kappa_plus[1] == 0.98);
  CHECK(s.kappa_minus[1] == 0.1);
  CHECK(s.kappa_minus[2] == 0.05);
  CHECK(s.kappa_plus[2] == 0.98);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(s.tau_plus[c] == s.kappa_plus[c]);
    CHECK(s.tau_minus[c] == s.kappa_minus[c]);
    CHECK(s.gap[c] == s.tau_plus[c] - s.tau_minus[c]);
  }

  const auto off = init_class_percentiles(PercentileInit{0.98, 0.1, false}, y);
  CHECK(off.kappa_minus[2] == 0.1);
}

TEST_CASE("percentile init keeps the ordering for extreme classes") {
  const auto y = labels_with_negatives(10, {10, 0});
  for (bool clamp : {true, false}) {
    const auto s = init_class_percentiles(PercentileInit{0.98, 0.1, clamp}, y);
    CHECK(s.kappa_plus[0] == 1.0);
    CHECK(s.kappa_minus[1] == (clamp ? 0.0 : 0.1));
    for (std::size_t c = 0; c < 2; ++c) CHECK(s.kappa_minus[c] < s.kappa_plus[c]);
  }
  CHECK_THROWS_AS(init_class_percentiles(PercentileInit{0.1, 0.2, true}, y), std::invalid_argument);
  CHECK_THROWS_AS(init_class_percentiles(PercentileInit{0.98, 0.1, true}, LabelMatrix(0, 2)),
                  std::invalid_argument);
}

TEST_CASE("refresh inverts each class histogram") {
  ThresholdState s = fixed_thresholds(2, 0.5, 0.5);
  s.kappa_plus = {0.98, 0.9};
  s.kappa_minus = {0.1, 0.4};
  std::vector<ClassHistogram> hists{ClassHistogram(100, 0.0), ClassHistogram::from_bins({0.8, 0.2}, 0.99)};
  refresh_thresholds(s, hists);
  CHECK(s.tau_plus[0] == doctest::Approx(0.98).epsilon(1e-14));
  CHECK(s.tau_minus[0] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(s.gap[0] == doctest::Approx(0.88).epsilon(1e-14));
  CHECK(s.tau_plus[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(s.tau_minus[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(s.gap[1] == doctest::Approx(0.5).epsilon(1e-14));

  std::vector<ClassHistogram> one{ClassHistogram(10, 0.9)};
  CHECK_THROWS_AS(refresh_thresholds(s, one), std::invalid_argument);
}

TEST_CASE("gap stays non-negative for near-equal percentiles") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    ClassHistogram h(50, 0.9);
    std::vector<double> batch(40);
    for (double& x : batch) x = u(rng) * u(rng);
    h.update(batch);
    ThresholdState s = fixed_thresholds(1, 0.5, 0.5);
    const double km = u(rng) * 0.99;
    s.kappa_minus = {km};
    s.kappa_plus = {km + 1e-9};
    std::vector<ClassHistogram> hs{h};
    refresh_thresholds(s, hs);
    CHECK(s.gap[0] >= 0.0);
    CHECK(s.tau_minus[0] <= s.tau_plus[0]);
  }
}

TEST_CASE("permuting classes permutes the state") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t classes = 6;
  std::vector<ClassHistogram> hists;
  for (std::size_t c = 0; c < classes; ++c) {
    ClassHistogram h(100, 0.8);
    std::vector<double> batch(30);
    for (double& x : batch) x = std::pow(u(rng), 1.0 + static_cast<double>(c));
    h.update(batch);
    hists.push_back(h);
  }
  LabelMatrix y(100, classes, 0);
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < 5 * (c + 1); ++i) y(i, c) = 1;
  }
  std::vector<std::size_t> perm(classes);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  LabelMatrix yp(100, classes);
  std::vector<ClassHistogram> hp;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < 100; ++i) yp(i, c) = y(i, perm[c]);
    hp.push_back(hists[perm[c]]);
  }
  auto a = init_class_percentiles(PercentileInit{0.9, 0.1, true}, y);
  auto b = init_class_percentiles(PercentileInit{0.9, 0.1, true}, yp);
  refresh_thresholds(a, hists);
  refresh_thresholds(b, hp);
  for (std::size_t c = 0; c < classes; ++c) {
    CHECK(b.tau_plus[c] == a.tau_plus[perm[c]]);
    CHECK(b.tau_minus[c] == a.tau_minus[perm[c]]);
    CHECK(b.gap[c] == a.gap[perm[c]]);
  }
}

TEST_CASE("loss weight schedule") {
  const WeightSchedule d;
  CHECK(loss_weight(0.4, 1000, d) == 0.0);
  CHECK(loss_weight(0.6, 1000, d) == 1.0);
  CHECK(loss_weight(0.525, 1000, d) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(loss_weight(0.9, 100, d) == 0.0);
  CHECK(loss_weight(0.9, 299, d) == 0.0);
  CHECK(loss_weight(0.9, 300, d) == 1.0);
  CHECK(loss_weight(0.5, 1000, d) == 0.0);
  CHECK(loss_weight(0.55, 1000, d) == doctest::Approx(1.0).epsilon(1e-12));

  WeightSchedule half = d;
  half.alpha_saturate = 0.5;
  CHECK(loss_weight(0.7, 1000, half) == 0.5);
}

TEST_CASE("loss weight is monotone and bounded in gap") {
  const WeightSchedule d;
  double prev = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double a = loss_weight(i / 10000.0, 500, d);
    REQUIRE(a >= prev);
    REQUIRE(a >= 0.0);
    REQUIRE(a <= d.alpha_saturate);
    prev = a;
  }
}

TEST_CASE("weight schedule validation") {
  WeightSchedule s;
  CHECK_NOTHROW(s.validate());
  s.gap_start = 0.6;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = WeightSchedule{};
  s.warmup_iters = -1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = WeightSchedule{};
  s.alpha_saturate = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("fixed thresholds") {
  const auto s = fixed_thresholds(3, 0.95, 0.0);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(s.tau_plus[c] == 0.95);
    CHECK(s.tau_minus[c] == 0.0);
    CHECK(s.gap[c] == 0.95);
  }
  CHECK_THROWS_AS(fixed_thresholds(3, 0.1, 0.2), std::invalid_argument);
}
