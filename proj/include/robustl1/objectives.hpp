/*
 * Copyright 2026 The robustl1 Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <span>

#include "robustl1/data_model.hpp"
#include "robustl1/truncation.hpp"

namespace robustl1 {

struct TruncatedL1Spec {
  double alpha;
  TruncationKind kind = TruncationKind::LogQuadratic;

  void validate() const;
};

/// Ridge weight lambda and scale alpha of the truncated min-max l2 payoff.
/// The payoff always uses the saturating truncation.
struct MinMaxSpec {
  double lambda = 0.0;
  double alpha;

  void validate() const;
};

/// (1 / (n alpha)) sum_i psi(alpha |y_i - x_i^T w|)
double truncated_l1_value(const Dataset& data, std::span<const double> w,
                          const TruncatedL1Spec& spec);

/// Almost-everywhere gradient of truncated_l1_value, with sign(0) = 0.
Vector truncated_l1_gradient(const Dataset& data, std::span<const double> w,
                             const TruncatedL1Spec& spec);

/// Value and gradient in one pass; `gradient` must have length d.
double truncated_l1_value_and_gradient(const Dataset& data, std::span<const double> w,
                                       const TruncatedL1Spec& spec, std::span<double> gradient);

/// (1/n) sum_i -sign(r_i) x_i, sign(0) = 0.
Vector erm_l1_subgradient(const Dataset& data, std::span<const double> w);

/// lambda (|w|^2 - |u|^2) + (1/(alpha n)) sum_i psi_sat[alpha r_i(w)^2 - alpha r_i(u)^2]
double minmax_l2_payoff(const Dataset& data, std::span<const double> w, std::span<const double> u,
                        const MinMaxSpec& spec);

struct PayoffGradients {
  Vector w;  // d payoff / d w
  Vector u;  // d payoff / d u
};

PayoffGradients minmax_l2_payoff_gradients(const Dataset& data, std::span<const double> w,
                                           std::span<const double> u, const MinMaxSpec& spec);

/// Fraction of samples with alpha |r_i| >= 1.
double saturation_fraction(const Dataset& data, std::span<const double> w, double alpha);

}  // namespace robustl1
