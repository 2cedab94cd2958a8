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
#include "robustl1/tuning.hpp"

#include <cmath>

#include "robustl1/error.hpp"

namespace robustl1 {
namespace {

double log_confidence_total(const BoundInputs& in) {
  return log_covering_ball(in.d, in.radius, in.net_radius()) - 2.0 * std::log(in.delta);
}

}  // namespace

double BoundInputs::net_radius() const {
  return epsilon.value_or(1.0 / static_cast<double>(n));
}

void BoundInputs::validate() const {
  require(n >= 1, "n must be positive");
  require(d >= 1, "d must be positive");
  require(radius > 0.0 && std::isfinite(radius), "B must be positive and finite");
  require(delta > 0.0 && delta < 0.5, "delta must lie in (0, 1/2)");
  require(net_radius() > 0.0 && std::isfinite(net_radius()), "epsilon must be positive");
  require(mean_norm >= 0.0 && std::isfinite(mean_norm), "mean_norm must be non-negative");
  require(mean_sq_norm >= 0.0 && std::isfinite(mean_sq_norm), "mean_sq_norm must be non-negative");
  require(sup_l2_risk >= 0.0 && std::isfinite(sup_l2_risk), "sup_l2_risk must be non-negative");
}

double log_covering_ball(std::size_t d, double radius, double epsilon) {
  require(d >= 1, "d must be positive");
  require(radius > 0.0 && std::isfinite(radius), "B must be positive and finite");
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive and finite");
  const double ratio = 6.0 * radius / epsilon;
  if (ratio <= 1.0) return 0.0;
  return static_cast<double>(d) * std::log(ratio);
}

double default_alpha_regression(const BoundInputs& inputs) {
  inputs.validate();
  return std::sqrt(log_confidence_total(inputs) / static_cast<double>(inputs.n));
}

double theorem1_bound_at_alpha(const BoundInputs& inputs, double alpha) {
  inputs.validate();
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  const double eps = inputs.net_radius();
  return 2.0 * eps * inputs.mean_norm + alpha * eps * eps * inputs.mean_sq_norm +
         1.5 * alpha * inputs.sup_l2_risk +
         log_confidence_total(inputs) / (static_cast<double>(inputs.n) * alpha);
}

double theorem1_bound(const BoundInputs& inputs) {
  const double alpha = default_alpha_regression(inputs);
  const double eps = inputs.net_radius();
  return 2.0 * eps * inputs.mean_norm +
         alpha * (eps * eps * inputs.mean_sq_norm + 1.5 * inputs.sup_l2_risk + 1.0);
}

double erm_bound(double radius, double max_input_norm, std::size_t n, double delta) {
  require(radius > 0.0 && std::isfinite(radius), "B must be positive and finite");
  require(max_input_norm > 0.0 && std::isfinite(max_input_norm), "D must be positive and finite");
  require(n >= 1, "n must be positive");
  require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
  return 4.0 * radius * max_input_norm / std::sqrt(static_cast<double>(n)) *
         (1.0 + std::sqrt(0.5 * std::log(1.0 / delta)));
}

}  // namespace robustl1
