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

#ifndef BEVAUG_ORDINAL_HPP_
#define BEVAUG_ORDINAL_HPP_

#include <span>
#include <vector>

namespace bevaug {

// Uniform discretization of the focal interval [alpha, beta] into
// `num_subintervals` pieces: thresholds t_i = alpha + (beta - alpha) * i / K,
// i = 0..K, and K + 2 categories (two open-ended ones outside the interval).
struct OrdinalDomainScheme {
  double alpha = 0.0;
  double beta = 0.0;
  int num_subintervals = 1;
  std::vector<double> thresholds;

  int num_categories() const { return num_subintervals + 2; }
  int num_thresholds() const { return num_subintervals + 1; }
  // Logit vector length 2 (K + 1): one pair per threshold.
  int num_logits() const { return 2 * (num_subintervals + 1); }

  friend bool operator==(const OrdinalDomainScheme&, const OrdinalDomainScheme&) = default;
};

OrdinalDomainScheme MakeScheme(double alpha, double beta, int num_subintervals);

// Label in 0..K+1: 0 below t_0, K+1 at or above t_K, otherwise i + 1 for
// t_i <= focal < t_{i+1}. Throws InvalidArgument for focal <= 0.
int AssignLabel(const OrdinalDomainScheme& scheme, double focal);

// P^k = exp(y_2k) / (exp(y_2k) + exp(y_2k+1)): probability that the focal
// length lies below threshold k. Target gamma(k, l) = 1 iff l <= k.
//
// Loss = -sum_k [gamma log P^k + (1 - gamma) log(1 - P^k)], k = 0..K.
// Throws InvalidArgument when logits.size() is odd or zero, or the label is
// outside 0..K+1 with K = logits.size() / 2 - 1.
double OrdinalLoss(std::span<const double> logits, int label);

// d Loss / d y: (P^k - gamma) on y_2k and (gamma - P^k) on y_2k+1.
std::vector<double> OrdinalLossGrad(std::span<const double> logits, int label);

// Probabilities P^k for every threshold.
std::vector<double> OrdinalProbabilities(std::span<const double> logits);

// Number of thresholds the focal length is predicted to lie at or above,
// i.e. count of k with P^k < 1/2.
int DecodeLabel(std::span<const double> logits);

// Backward pass of a gradient reversal layer: -lambda * grad. The forward
// pass is the identity and needs no function.
std::vector<double> ReverseGradient(std::span<const double> grad, double lambda);

}  // namespace bevaug

#endif  // BEVAUG_ORDINAL_HPP_
