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
#include "robustl1/catoni.hpp"

#include <algorithm>
#include <cmath>

#include "robustl1/error.hpp"

namespace robustl1 {
namespace {

double centering_sum(std::span<const double> values, TruncationKind kind, double alpha,
                     double theta) {
  double acc = 0.0;
  for (double x : values) acc += psi(kind, alpha * (x - theta));
  return acc;
}

double sample_variance(std::span<const double> values) {
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(values.size() - 1);
}

}  // namespace

double default_alpha_mean(std::size_t n, double nu) {
  require(n >= 1, "n must be positive");
  require(nu > 0.0 && std::isfinite(nu), "variance nu must be positive and finite");
  return std::sqrt(2.0 / (static_cast<double>(n) * nu));
}

CatoniEstimate catoni_estimate(std::span<const double> values, TruncationKind kind,
                               const CatoniConfig& config) {
  require(!values.empty(), "catoni_estimate needs at least one value");
  for (double x : values) require_finite(x, "value");
  if (config.alpha) require(*config.alpha > 0.0 && std::isfinite(*config.alpha), "alpha must be positive");
  if (config.variance) require(*config.variance > 0.0, "variance must be positive");
  if (config.tolerance) require(*config.tolerance > 0.0, "tolerance must be positive");
  require(config.max_iterations >= 1, "max_iterations must be positive");

  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  double lo = *min_it;
  double hi = *max_it;
  const bool plugin = !config.alpha && !config.variance;
  if (lo == hi) return {lo, config.alpha.value_or(0.0), plugin, 0};

  double alpha = 0.0;
  if (config.alpha) {
    alpha = *config.alpha;
  } else if (config.variance) {
    alpha = default_alpha_mean(values.size(), *config.variance);
  } else {
    if (values.size() == 1) return {values.front(), 0.0, true, 0};
    alpha = default_alpha_mean(values.size(), sample_variance(values));
  }

  const double tolerance = config.tolerance.value_or(1e-10 * (hi - lo));
  // The centering sum is non-increasing in theta, >= 0 at min and <= 0 at max.
  if (centering_sum(values, kind, alpha, lo) < 0.0 || centering_sum(values, kind, alpha, hi) > 0.0)
    throw Error(ErrorCode::Internal, "catoni bisection failed to bracket a root");

  int iterations = 0;
  while (hi - lo > tolerance && iterations < config.max_iterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s = centering_sum(values, kind, alpha, mid);
    if (s > 0.0) {
      lo = mid;
    } else if (s < 0.0) {
      hi = mid;
    } else {
      // Landed inside the root set; locate both of its ends.
      double left_lo = lo, left_hi = mid;
      double right_lo = mid, right_hi = hi;
      while (left_hi - left_lo > tolerance && iterations < config.max_iterations) {
        const double m = 0.5 * (left_lo + left_hi);
        (centering_sum(values, kind, alpha, m) > 0.0 ? left_lo : left_hi) = m;
        ++iterations;
      }
      while (right_hi - right_lo > tolerance && iterations < config.max_iterations) {
        const double m = 0.5 * (right_lo + right_hi);
        (centering_sum(values, kind, alpha, m) < 0.0 ? right_hi : right_lo) = m;
        ++iterations;
      }
      lo = left_lo;
      hi = right_hi;
      break;
    }
    ++iterations;
  }
  return {0.5 * (lo + hi), alpha, plugin, iterations};
}

}  // namespace robustl1
