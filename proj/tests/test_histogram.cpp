// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "pmatch/score_histogram.hpp"

using pmatch::ClassHistogram;

namespace {

double total(const ClassHistogram& h) {
  double s = 0.0;
  for (double b : h.bins()) s += b;
  return s;
}

// Smallest raw score s such that the fraction of scores <= s reaches kappa.
double empirical_quantile(std::vector<double> xs, double kappa) {
  std::sort(xs.begin(), xs.end());
  const auto n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (static_cast<double>(i + 1) / n >= kappa) return xs[i];
  }
  return xs.back();
}

}  // namespace

TEST_CASE("init is uniform") {
  ClassHistogram four(4, 0.99);
  for (double b : four.bins()) CHECK(b == 0.25);
  ClassHistogram one(1, 0.99);
  REQUIRE(one.bin_count() == 1);
  CHECK(one.bins()[0] == 1.0);
  ClassHistogram ten(10, 0.5);
  REQUIRE(ten.bin_count() == 10);
  for (double b : ten.bins()) CHECK(b == doctest::Approx(0.1));
  CHECK_THROWS_AS(ClassHistogram(0, 0.99), std::invalid_argument);
  CHECK_THROWS_AS(ClassHistogram(4, 1.5), std::invalid_argument);
}

TEST_CASE("update blends old mass with the batch histogram") {
  ClassHistogram h(2, 0.9);
  const std::vector<double> batch{0.1, 0.2, 0.3, 0.49};
  h.update(batch);
  CHECK(h.bins()[0] == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(h.bins()[1] == doctest::Approx(0.45).epsilon(1e-12));

  auto keep = ClassHistogram::from_bins({0.3, 0.7}, 1.0);
  keep.update(batch);
  CHECK(keep.bins()[0] == 0.3);
  CHECK(keep.bins()[1] == 0.7);
}

TEST_CASE("decay zero freezes the histogram") {
  auto h = ClassHistogram::from_bins({0.1, 0.2, 0.3, 0.4}, 0.0);
  CHECK(h.frozen());
  const std::vector<double> batch{0.0, 0.99, 1.0, 0.5};
  h.update(batch);
  CHECK(h.bins()[0] == 0.1);
  CHECK(h.bins()[1] == 0.2);
  CHECK(h.bins()[2] == 0.3);
  CHECK(h.bins()[3] == 0.4);
}

TEST_CASE("update rejects bad batches") {
  ClassHistogram h(10, 0.9);
  CHECK_THROWS_AS(h.update(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(h.update(std::vector<double>{0.5, 1.01}), std::invalid_argument);
  CHECK_THROWS_AS(h.update(std::vector<double>{-0.01}), std::invalid_argument);
  CHECK_THROWS_AS(h.update(std::vector<double>{std::nan("")}), std::invalid_argument);
}

TEST_CASE("boundary scores go to the upper bin") {
  ClassHistogram h(4, 0.5);
  CHECK(h.bin_of(0.0) == 0);
  CHECK(h.bin_of(0.25) == 1);
  CHECK(h.bin_of(0.5) == 2);
  CHECK(h.bin_of(0.7499) == 2);
  CHECK(h.bin_of(1.0) == 3);
}

TEST_CASE("quantile examples") {
  for (std::size_t k : {1u, 2u, 7u, 100u}) {
    ClassHistogram u(k, 0.0);
    CHECK(u.quantile(0.1) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(u.quantile(0.0) == 0.0);
    CHECK(u.quantile(1.0) == 1.0);
  }
  auto skew = ClassHistogram::from_bins({0.8, 0.2}, 0.99);
  CHECK(skew.quantile(0.4) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(skew.quantile(0.0) == 0.0);
  CHECK(skew.quantile(1.0) == 1.0);
  CHECK_THROWS_AS(skew.quantile(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(skew.quantile(1.1), std::invalid_argument);
}

TEST_CASE("quantile skips empty bins") {
  auto h = ClassHistogram::from_bins({0.0, 0.5, 0.0, 0.5}, 0.99);
  CHECK(h.quantile(0.25) == doctest::Approx(0.375));
  CHECK(h.quantile(0.5) == doctest::Approx(0.5));
  CHECK(h.quantile(0.75) == doctest::Approx(0.875));
}

TEST_CASE("mass is conserved across many updates") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ClassHistogram h(100, 0.99);
  for (int step = 0; step < 2000; ++step) {
    std::vector<double> batch(36);
    for (double& s : batch) s = u(rng) * u(rng);
    h.update(batch);
    for (double b : h.bins()) REQUIRE(b >= 0.0);
  }
  CHECK(std::abs(total(h) - 1.0) < 1e-9);
}

TEST_CASE("quantile matches the empirical quantile within one bin") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.7, 0.15);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xs(1000);
    for (double& x : xs) x = trial % 2 == 0 ? u(rng) : std::clamp(g(rng), 0.0, 1.0);
    // Decay this small leaves only the batch histogram after one update.
    ClassHistogram h(100, 1e-300);
    h.update(xs);
    for (double kappa : {0.05, 0.1, 0.5, 0.9, 0.98}) {
      CHECK(std::abs(h.quantile(kappa) - empirical_quantile(xs, kappa)) <= 0.01 + 1e-12);
    }
  }
}

TEST_CASE("quantile is monotone in kappa") {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution zero(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> bins(20);
    double s = 0.0;
    for (double& b : bins) {
      b = zero(rng) ? 0.0 : e(rng);
      s += b;
    }
    if (s == 0.0) bins[0] = s = 1.0;
    for (double& b : bins) b /= s;
    auto h = ClassHistogram::from_bins(bins, 0.99);
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double q = h.quantile(i / 1000.0);
      REQUIRE(q >= prev);
      REQUIRE(q >= 0.0);
      REQUIRE(q <= 1.0);
      prev = q;
    }
  }
}

TEST_CASE("frozen uniform histogram returns kappa") {
  ClassHistogram h(100, 0.0);
  std::vector<double> batch{0.9, 0.95, 0.99};
  for (int i = 0; i < 10; ++i) h.update(batch);
  for (int i = 0; i <= 100; ++i) {
    const double kappa = i / 100.0;
    CHECK(h.quantile(kappa) == doctest::Approx(kappa).epsilon(1e-15));
  }
}

TEST_CASE("cdf inverts quantile") {
  auto h = ClassHistogram::from_bins({0.1, 0.4, 0.3, 0.2}, 0.9);
  for (double kappa : {0.05, 0.3, 0.5, 0.8, 0.95}) {
    CHECK(h.cdf(h.quantile(kappa)) == doctest::Approx(kappa));
  }
}

TEST_CASE("from_bins validates") {
  CHECK_THROWS_AS(ClassHistogram::from_bins({}, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(ClassHistogram::from_bins({0.5, 0.6}, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(ClassHistogram::from_bins({1.2, -0.2}, 0.9), std::invalid_argument);
}
