// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "pmatch/losses.hpp"

using namespace pmatch;

namespace {

LossConfig asymmetric(double gp, double gn, double shift) {
  LossConfig c;
  c.kind = LossKind::Asymmetric;
  c.gamma_pos = gp;
  c.gamma_neg = gn;
  c.prob_shift = shift;
  return c;
}

}  // namespace

TEST_CASE("elementwise values") {
  const LossConfig bce;
  CHECK(elementwise_loss(1, 0.5, bce) == doctest::Approx(std::log(2.0)));
  CHECK(elementwise_loss(0, 0.5, bce) == doctest::Approx(std::log(2.0)));
  CHECK(elementwise_loss(0, 1e-12, bce) < 1e-6);
  CHECK(std::isfinite(elementwise_loss(1, 0.0, bce)));
  CHECK(std::isfinite(elementwise_loss(0, 1.0, bce)));
  CHECK(elementwise_loss(1, 0.0, bce) == doctest::Approx(-std::log(kScoreFloor)));
  CHECK_THROWS_AS(elementwise_loss(1, std::nan(""), bce), std::invalid_argument);
  CHECK_THROWS_AS(elementwise_loss(2, 0.5, bce), std::invalid_argument);
}

TEST_CASE("asymmetric with zero parameters is cross-entropy") {
  const LossConfig bce;
  const auto asl = asymmetric(0.0, 0.0, 0.0);
  for (int i = 1; i < 100; ++i) {
    const double p = i / 100.0;
    for (int y : {0, 1}) {
      CHECK(elementwise_loss(y, p, asl) == doctest::Approx(elementwise_loss(y, p, bce)).epsilon(1e-12));
      CHECK(elementwise_loss(y, p, bce) == doctest::Approx(oracle::bce(y, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("asymmetric down-weights easy negatives") {
  const auto asl = asymmetric(0.0, 4.0, 0.05);
  const LossConfig bce;
  CHECK(elementwise_loss(0, 0.04, asl) == 0.0);
  CHECK(elementwise_loss(0, 0.2, asl) < elementwise_loss(0, 0.2, bce));
  CHECK(elementwise_loss(1, 0.2, asl) == doctest::Approx(elementwise_loss(1, 0.2, bce)));
}

TEST_CASE("elementwise gradient matches finite differences") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::uniform_real_distribution<double> gam(0.0, 4.0);
  std::uniform_real_distribution<double> sh(0.0, 0.2);
  for (int trial = 0; trial < 200; ++trial) {
    const LossConfig cfg = trial % 2 == 0 ? LossConfig{} : asymmetric(gam(rng), gam(rng), sh(rng));
    double p = u(rng);
    if (std::abs(p - cfg.prob_shift) < 1e-3) p += 0.01;
    for (int y : {0, 1}) {
      const double numeric = oracle::central_difference([&](double x) { return elementwise_loss(y, x, cfg); }, p);
      CHECK(oracle::close_relative(elementwise_gradient(y, p, cfg), numeric, 1e-4));
    }
  }
}

TEST_CASE("supervised loss") {
  const LossConfig bce;
  LabelMatrix y(1, 2, std::vector<std::uint8_t>{1, 0});
  ScoreMatrix p(1, 2, 0.5);
  CHECK(supervised_loss(y, p, bce).value == doctest::Approx(2.0 * std::log(2.0)));
  CHECK(supervised_loss(y, p, bce).value == doctest::Approx(1.3863).epsilon(1e-4));

  LabelMatrix y2(2, 2, std::vector<std::uint8_t>{1, 0, 1, 0});
  ScoreMatrix p2(2, 2, 0.5);
  CHECK(supervised_loss(y2, p2, bce).value == doctest::Approx(supervised_loss(y, p, bce).value));

  LabelMatrix yy(2, 2, std::vector<std::uint8_t>{1, 0, 0, 1});
  ScoreMatrix good(2, 2, std::vector<double>{0.999, 0.001, 0.001, 0.999});
  CHECK(supervised_loss(yy, good, bce).value < 0.01);

  CHECK_THROWS_AS(supervised_loss(y, p2, bce), std::invalid_argument);
}

TEST_CASE("unlabeled loss") {
  const LossConfig bce;
  SelectionMask m{LabelMatrix(1, 1, 1), LabelMatrix(1, 1, 1)};
  ScoreMatrix p(1, 1, 0.5);
  const auto lu = unlabeled_loss(m, p, bce);
  CHECK(lu.value == doctest::Approx(std::log(2.0)));
  CHECK(lu.selected == 1);

  SelectionMask none{LabelMatrix(3, 2, 0), LabelMatrix(3, 2, 1)};
  ScoreMatrix p3(3, 2, 0.3);
  const auto zero = unlabeled_loss(none, p3, bce);
  CHECK(zero.value == 0.0);
  for (double g : zero.grad.values()) CHECK(g == 0.0);

  LossConfig per_selected = bce;
  per_selected.normalize_by_selected = true;
  SelectionMask two{LabelMatrix(4, 1, std::vector<std::uint8_t>{1, 1, 0, 0}), LabelMatrix(4, 1, 1)};
  ScoreMatrix p4(4, 1, 0.5);
  CHECK(unlabeled_loss(two, p4, bce).value == doctest::Approx(2.0 * std::log(2.0) / 4.0));
  CHECK(unlabeled_loss(two, p4, per_selected).value == doctest::Approx(std::log(2.0)));
}

TEST_CASE("masked entries do not influence loss or gradient") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::bernoulli_distribution coin(0.5);
  const LossConfig bce;
  for (int trial = 0; trial < 50; ++trial) {
    SelectionMask m{LabelMatrix(6, 3), LabelMatrix(6, 3)};
    ScoreMatrix p(6, 3);
    for (std::size_t k = 0; k < p.values().size(); ++k) {
      m.selected.values()[k] = coin(rng);
      m.pseudo.values()[k] = coin(rng);
      p.values()[k] = u(rng);
    }
    m.selected(0, 0) = 0;
    const auto a = unlabeled_loss(m, p, bce);
    p(0, 0) = u(rng);
    const auto b = unlabeled_loss(m, p, bce);
    CHECK(a.value == b.value);
    CHECK(a.grad == b.grad);
    CHECK(b.grad(0, 0) == 0.0);
  }
}

TEST_CASE("batch gradients match finite differences") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const LossConfig cfg = trial % 2 == 0 ? LossConfig{} : asymmetric(1.0, 4.0, 0.05);
    LabelMatrix y(4, 3);
    ScoreMatrix p(4, 3);
    SelectionMask m{LabelMatrix(4, 3), LabelMatrix(4, 3)};
    for (std::size_t k = 0; k < p.values().size(); ++k) {
      y.values()[k] = coin(rng);
      m.selected.values()[k] = coin(rng);
      m.pseudo.values()[k] = coin(rng);
      double v = u(rng);
      if (std::abs(v - 0.05) < 1e-3) v += 0.01;
      p.values()[k] = v;
    }
    const std::vector<double> alpha{0.2, 1.0, 0.7};
    const auto ls = supervised_loss(y, p, cfg);
    const auto lu = unlabeled_loss(m, p, cfg);
    CHECK(ls.value == doctest::Approx(oracle::supervised(y, p, cfg)).epsilon(1e-12));
    CHECK(total_loss(ls.value, lu.per_class, alpha) ==
          doctest::Approx(ls.value + oracle::unlabeled(m, p, cfg, alpha)).epsilon(1e-12));
    for (std::size_t k = 0; k < p.values().size(); ++k) {
      const std::size_t c = k % 3;
      auto f = [&](double x) {
        ScoreMatrix q = p;
        q.values()[k] = x;
        return oracle::supervised(y, q, cfg) + oracle::unlabeled(m, q, cfg, alpha);
      };
      const double analytic = ls.grad.values()[k] + alpha[c] * lu.grad.values()[k];
      CHECK(oracle::close_relative(analytic, oracle::central_difference(f, p.values()[k]), 1e-4));
    }
  }
}

TEST_CASE("total loss") {
  CHECK(total_loss(1.0, 0.5, 1.0) == 1.5);
  CHECK(total_loss(0.0, 2.0, 0.5) == 1.0);
  CHECK(total_loss(0.7, 3.0, 0.0) == 0.7);
  const std::vector<double> per{0.5, 0.25};
  const std::vector<double> alpha{1.0, 2.0};
  CHECK(total_loss(1.0, per, alpha) == 2.0);
  CHECK_THROWS_AS(total_loss(1.0, per, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("loss config validation") {
  CHECK_NOTHROW(LossConfig{}.validate());
  CHECK_THROWS_AS(asymmetric(-1.0, 0.0, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(asymmetric(0.0, 0.0, 1.0).validate(), std::invalid_argument);
}
