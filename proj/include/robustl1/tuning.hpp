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

#include <cstddef>
#include <optional>

namespace robustl1 {

/// Inputs to the high-probability excess-risk bound for the truncated l1
/// estimator over a Euclidean ball.
struct BoundInputs {
  std::size_t n;
  std::size_t d;
  double radius;  // B
  double delta;   // must lie in (0, 1/2)
  std::optional<double> epsilon{};  // net radius; 1/n when absent
  double mean_norm = 0.0;     // E||x||
  double mean_sq_norm = 0.0;  // E||x||^2
  double sup_l2_risk = 0.0;   // sup_w R_l2(w)

  double net_radius() const;
  void validate() const;
};

/// log N(B_B, eps) <= d log(6B/eps), clamped at 0 (a single point covers the
/// ball once eps >= 6B).
double log_covering_ball(std::size_t d, double radius, double epsilon);

/// alpha = sqrt((log N + log(1/delta^2)) / n)
double default_alpha_regression(const BoundInputs& inputs);

/// General-alpha form:
/// 2 eps E||x|| + alpha eps^2 E||x||^2 + (3 alpha / 2) sup R_l2 + (log N + log(1/delta^2)) / (n alpha)
double theorem1_bound_at_alpha(const BoundInputs& inputs, double alpha);

/// The same bound with alpha set to default_alpha_regression(inputs).
double theorem1_bound(const BoundInputs& inputs);

/// ERM excess-risk bound for inputs with ||x|| <= D:
/// (4 B D / sqrt(n)) (1 + sqrt(log(1/delta) / 2)).
double erm_bound(double radius, double max_input_norm, std::size_t n, double delta);

}  // namespace robustl1
