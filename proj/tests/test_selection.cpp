// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "pmatch/pseudo_labeler.hpp"

using namespace pmatch;

namespace {

SelectionMask select_one(double score, double tau_plus, double tau_minus) {
  ScoreMatrix s(1, 1, score);
  const std::vector<double> tp{tau_plus};
  const std::vector<double> tm{tau_minus};
  return select(s, tp, tm);
}

}  // namespace

TEST_CASE("selection examples") {
  auto m = select_one(0.99, 0.98, 0.1);
  CHECK(m.selected(0, 0) == 1);
  CHECK(m.pseudo(0, 0) == 1);
  m = select_one(0.05, 0.98, 0.1);
  CHECK(m.selected(0, 0) == 1);
  CHECK(m.pseudo(0, 0) == 0);
  m = select_one(0.5, 0.98, 0.1);
  CHECK(m.selected(0, 0) == 0);
  m = select_one(0.98, 0.98, 0.1);
  CHECK(m.selected(0, 0) == 0);
  m = select_one(0.1, 0.98, 0.1);
  CHECK(m.selected(0, 0) == 0);
}

TEST_CASE("selection grid matches the indicator sum") {
  for (int ti = 0; ti <= 100; ti += 5) {
    for (int tj = ti; tj <= 100; tj += 5) {
      const double tm = ti / 100.0;
      const double tp = tj / 100.0;
      ScoreMatrix s(101, 1);
      for (int k = 0; k <= 100; ++k) s(static_cast<std::size_t>(k), 0) = k / 100.0;
      const std::vector<double> tpv{tp};
      const std::vector<double> tmv{tm};
      const auto m = select(s, tpv, tmv);
      for (int k = 0; k <= 100; ++k) {
        const double p = k / 100.0;
        const int g = (p > tp ? 1 : 0) + (p < tm ? 1 : 0);
        REQUIRE(g <= 1);
        REQUIRE(m.selected(static_cast<std::size_t>(k), 0) == g);
        if (g == 1) REQUIRE(m.pseudo(static_cast<std::size_t>(k), 0) == (p > tp ? 1 : 0));
      }
    }
  }
}

TEST_CASE("fixed positive-only thresholds never select negatives") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScoreMatrix s(500, 4);
  for (double& v : s.values()) v = u(rng);
  s(0, 0) = 0.0;
  const std::vector<double> tp(4, 0.95);
  const std::vector<double> tm(4, 0.0);
  const auto counts = count_selected(select(s, tp, tm));
  for (std::size_t c = 0; c < 4; ++c) CHECK(counts.negatives[c] == 0);
}

TEST_CASE("single-label degeneracy") {
  std::mt19937_64 rng(2);
  std::exponential_distribution<double> e(1.0);
  const std::size_t classes = 5;
  const double tau = 0.7;
  const std::vector<double> tp(classes, tau);
  const std::vector<double> tm(classes, 1.0 - tau);
  for (int trial = 0; trial < 2000; ++trial) {
    ScoreMatrix s(1, classes);
    double total = 0.0;
    for (double& v : s.values()) total += (v = e(rng) * (trial % 3 == 0 ? 10.0 : 1.0));
    for (double& v : s.values()) v /= total;
    const auto m = select(s, tp, tm);
    for (std::size_t c = 0; c < classes; ++c) {
      if (!(m.selected(0, c) && m.pseudo(0, c))) continue;
      for (std::size_t o = 0; o < classes; ++o) {
        if (o == c) continue;
        CHECK(s(0, o) < 1.0 - tau);
        CHECK(m.selected(0, o) == 1);
        CHECK(m.pseudo(0, o) == 0);
      }
    }
  }
}

TEST_CASE("selection counts") {
  ScoreMatrix s(3, 2, std::vector<double>{0.99, 0.5, 0.01, 0.02, 0.97, 0.6});
  const std::vector<double> tp{0.9, 0.9};
  const std::vector<double> tm{0.1, 0.1};
  const auto c = count_selected(select(s, tp, tm));
  CHECK(c.positives == std::vector<std::size_t>{2, 0});
  CHECK(c.negatives == std::vector<std::size_t>{1, 1});
}

TEST_CASE("selection errors") {
  ScoreMatrix s(1, 1, 0.5);
  CHECK_THROWS_AS(select(s, std::vector<double>{0.2}, std::vector<double>{0.3}), std::invalid_argument);
  CHECK_THROWS_AS(select(s, std::vector<double>{0.9, 0.9}, std::vector<double>{0.1}), std::invalid_argument);
  ScoreMatrix bad(1, 1, 1.5);
  CHECK_THROWS_AS(select(bad, std::vector<double>{0.9}, std::vector<double>{0.1}), std::invalid_argument);
}
