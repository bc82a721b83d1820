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

#include "bevaug/ordinal.hpp"

#include <cmath>
#include <string>

#include "bevaug/error.hpp"

namespace bevaug {

namespace {

// log(1 + exp(x)) without overflow.
double Softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Number of thresholds encoded by a logit vector; validates the label.
int CheckLogits(std::span<const double> logits, int label) {
  if (logits.empty() || logits.size() % 2 != 0) {
    throw InvalidArgument("ordinal: logit count must be a positive even number, got " +
                          std::to_string(logits.size()));
  }
  for (double y : logits) {
    if (!std::isfinite(y)) throw InvalidArgument("ordinal: non-finite logit");
  }
  const int thresholds = static_cast<int>(logits.size() / 2);
  if (label < 0 || label > thresholds) {
    throw InvalidArgument("ordinal: label " + std::to_string(label) + " outside [0, " +
                          std::to_string(thresholds) + "]");
  }
  return thresholds;
}

}  // namespace

OrdinalDomainScheme MakeScheme(double alpha, double beta, int num_subintervals) {
  if (!(std::isfinite(alpha) && std::isfinite(beta) && alpha < beta)) {
    throw InvalidArgument("ordinal scheme: need finite alpha < beta");
  }
  if (num_subintervals < 1) {
    throw InvalidArgument("ordinal scheme: need at least one sub-interval");
  }
  OrdinalDomainScheme s{alpha, beta, num_subintervals, {}};
  s.thresholds.reserve(static_cast<std::size_t>(num_subintervals) + 1);
  for (int i = 0; i <= num_subintervals; ++i) {
    s.thresholds.push_back(alpha + (beta - alpha) * i / num_subintervals);
  }
  return s;
}

int AssignLabel(const OrdinalDomainScheme& scheme, double focal) {
  if (!(std::isfinite(focal) && focal > 0.0)) {
    throw InvalidArgument("assign_label: focal length must be > 0");
  }
  int label = 0;
  for (double t : scheme.thresholds) {
    if (focal >= t) ++label;
  }
  return label;
}

double OrdinalLoss(std::span<const double> logits, int label) {
  const int thresholds = CheckLogits(logits, label);
  double loss = 0.0;
  for (int k = 0; k < thresholds; ++k) {
    // z > 0 favours "below threshold k".
    const double z = logits[2 * k] - logits[2 * k + 1];
    loss += (label <= k) ? Softplus(-z) : Softplus(z);
  }
  return loss;
}

std::vector<double> OrdinalLossGrad(std::span<const double> logits, int label) {
  const int thresholds = CheckLogits(logits, label);
  std::vector<double> grad(logits.size());
  for (int k = 0; k < thresholds; ++k) {
    const double p = Sigmoid(logits[2 * k] - logits[2 * k + 1]);
    const double gamma = (label <= k) ? 1.0 : 0.0;
    grad[2 * k] = p - gamma;
    grad[2 * k + 1] = gamma - p;
  }
  return grad;
}

std::vector<double> OrdinalProbabilities(std::span<const double> logits) {
  const int thresholds = CheckLogits(logits, 0);
  std::vector<double> probs(thresholds);
  for (int k = 0; k < thresholds; ++k) probs[k] = Sigmoid(logits[2 * k] - logits[2 * k + 1]);
  return probs;
}

int DecodeLabel(std::span<const double> logits) {
  int label = 0;
  for (double p : OrdinalProbabilities(logits)) {
    if (p < 0.5) ++label;
  }
  return label;
}

std::vector<double> ReverseGradient(std::span<const double> grad, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("reverse_gradient: lambda must be >= 0");
  std::vector<double> out(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) out[i] = -lambda * grad[i];
  return out;
}

}  // namespace bevaug
