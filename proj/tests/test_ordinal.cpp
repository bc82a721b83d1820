// Copyright 2026 The bevaug Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"

#include "bevaug/checks/oracles.hpp"
#include "bevaug/error.hpp"
#include "bevaug/ordinal.hpp"

using namespace bevaug;

namespace {

// Logits with y_2k - y_2k+1 = margin[k].
std::vector<double> FromMargins(const std::vector<double>& margins) {
  std::vector<double> y;
  for (double m : margins) {
    y.push_back(0.5 * m);
    y.push_back(-0.5 * m);
  }
  return y;
}

std::vector<double> RandomLogits(std::mt19937_64& gen, int k, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> y(2 * (k + 1));
  for (double& v : y) v = dist(gen);
  return y;
}

}  // namespace

TEST_CASE("make_scheme") {
  const auto s = MakeScheme(500, 750, 5);
  CHECK(s.thresholds == std::vector<double>{500, 550, 600, 650, 700, 750});
  CHECK(s.num_categories() == 7);
  CHECK(s.num_logits() == 12);

  const auto four = MakeScheme(500, 700, 4);
  CHECK(four.num_thresholds() == 5);
  CHECK(four.num_categories() == 6);

  const auto one = MakeScheme(400, 900, 1);
  CHECK(one.thresholds == std::vector<double>{400, 900});
  CHECK(one.num_categories() == 3);

  CHECK_THROWS_AS(MakeScheme(750, 500, 5), InvalidArgument);
  CHECK_THROWS_AS(MakeScheme(500, 500, 5), InvalidArgument);
  CHECK_THROWS_AS(MakeScheme(500, 750, 0), InvalidArgument);
  CHECK_THROWS_AS(MakeScheme(500, NAN, 2), InvalidArgument);
}

TEST_CASE("assign_label") {
  const auto s = MakeScheme(500, 750, 5);
  CHECK(AssignLabel(s, 480) == 0);
  CHECK(AssignLabel(s, 720) == 5);
  CHECK(AssignLabel(s, 800) == 6);
  // A focal length on a threshold belongs to the interval it opens.
  CHECK(AssignLabel(s, 500) == 1);
  CHECK(AssignLabel(s, 550) == 2);
  CHECK(AssignLabel(s, 749.999) == 5);
  CHECK(AssignLabel(s, 750) == 6);
  CHECK_THROWS_AS(AssignLabel(s, 0.0), InvalidArgument);
  CHECK_THROWS_AS(AssignLabel(s, -5.0), InvalidArgument);

  int prev = 0;
  for (double f = 1.0; f < 1200.0; f += 0.37) {
    const int l = AssignLabel(s, f);
    REQUIRE(l >= prev);
    REQUIRE(l <= 6);
    prev = l;
  }
}

TEST_CASE("ordinal_loss examples") {
  CHECK(OrdinalLoss(FromMargins({20, 20}), 0) < 1e-8);

  for (int k : {1, 3, 5}) {
    const std::vector<double> flat(2 * (k + 1), 0.7);
    for (int label = 0; label <= k + 1; ++label) {
      CHECK(OrdinalLoss(flat, label) == doctest::Approx((k + 1) * std::numbers::ln2).epsilon(1e-14));
    }
  }

  const std::vector<double> y{0.3, -1.2, 2.0, 0.4, -0.7, 0.1};
  const auto p = OrdinalProbabilities(y);
  double expected = 0.0;
  for (double pk : p) expected -= std::log(1.0 - pk);
  CHECK(OrdinalLoss(y, 3) == doctest::Approx(expected).epsilon(1e-13));

  // Extreme logits stay finite.
  CHECK(OrdinalLoss(FromMargins({-800, 800}), 1) < 1e-12);
  CHECK(std::isfinite(OrdinalLoss(FromMargins({-800, 800}), 0)));
  CHECK(OrdinalLoss(FromMargins({-800, 800}), 0) == doctest::Approx(800.0));

  CHECK_THROWS_AS(OrdinalLoss(std::vector<double>{1, 2, 3}, 0), InvalidArgument);
  CHECK_THROWS_AS(OrdinalLoss(std::vector<double>{}, 0), InvalidArgument);
  CHECK_THROWS_AS(OrdinalLoss(y, 4), InvalidArgument);
  CHECK_THROWS_AS(OrdinalLoss(y, -1), InvalidArgument);
}

TEST_CASE("ordinal probabilities and decoding") {
  const auto p = OrdinalProbabilities(FromMargins({0.0, 2.0, -2.0}));
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))));
  CHECK(p[2] == doctest::Approx(1.0 / (1.0 + std::exp(2.0))));

  const auto s = MakeScheme(500, 750, 5);
  for (int label = 0; label <= 6; ++label) {
    std::vector<double> margins(6);
    for (int k = 0; k <= 5; ++k) margins[k] = label <= k ? 5.0 : -5.0;
    CHECK(DecodeLabel(FromMargins(margins)) == label);
  }
  CHECK(DecodeLabel(FromMargins({3, 3, 3, 3, 3, 3})) == 0);
  CHECK(AssignLabel(s, 620) == 3);
}

TEST_CASE("ordinal loss ranks nearer labels lower") {
  // Logits confidently encoding label 3 of 7.
  std::vector<double> margins(6);
  for (int k = 0; k <= 5; ++k) margins[k] = 3 <= k ? 4.0 : -4.0;
  const auto y = FromMargins(margins);
  for (int l = 3; l < 6; ++l) CHECK(OrdinalLoss(y, l) < OrdinalLoss(y, l + 1));
  for (int l = 3; l > 0; --l) CHECK(OrdinalLoss(y, l) < OrdinalLoss(y, l - 1));
}

TEST_CASE("ordinal_loss_grad") {
  const auto sat = OrdinalLossGrad(FromMargins({20, 20}), 0);
  double norm = 0.0;
  for (double g : sat) norm += g * g;
  CHECK(std::sqrt(norm) < 1e-6);

  const std::vector<double> flat(8, -0.25);
  for (int label = 0; label <= 4; ++label) {
    const auto g = OrdinalLossGrad(flat, label);
    for (int k = 0; k <= 3; ++k) {
      const double sign = label <= k ? -1.0 : 1.0;
      CHECK(g[2 * k] == doctest::Approx(0.5 * sign));
      CHECK(g[2 * k + 1] == doctest::Approx(-0.5 * sign));
    }
  }

  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 6;
    const auto y = RandomLogits(gen, k, 3.0);
    const int label = trial % (k + 2);
    const auto analytic = OrdinalLossGrad(y, label);
    const auto numeric = oracle::CentralDifferences(
        [&](std::span<const double> x) { return OrdinalLoss(x, label); }, y, 1e-5);
    REQUIRE(oracle::RelativeError(analytic, numeric) < 1e-6);
  }

  CHECK_THROWS_AS(OrdinalLossGrad(std::vector<double>{1.0}, 0), InvalidArgument);
}

TEST_CASE("reverse_gradient") {
  const std::vector<double> g{0.5, -2.0, 3.25, 0.0};
  CHECK(ReverseGradient(g, 1.0) == std::vector<double>{-0.5, 2.0, -3.25, -0.0});
  for (double v : ReverseGradient(g, 0.0)) CHECK(v == 0.0);
  CHECK(ReverseGradient(ReverseGradient(g, 1.0), 1.0) == g);
  CHECK(ReverseGradient(g, 0.1)[1] == doctest::Approx(0.2));
  CHECK_THROWS_AS(ReverseGradient(g, -0.5), InvalidArgument);
}
