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

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "robustl1/data_model.hpp"
#include "robustl1/error.hpp"
#include "robustl1/objectives.hpp"

namespace robustl1 {

struct SolverConfig {
  int iterations = 2000;
  int restarts = 16;
  /// Step scale; defaults to the ball radius.
  std::optional<double> step_scale;
  std::uint64_t seed = 0;
  bool record_trajectory = false;
  /// After the main schedule the best point is refined by this many short
  /// rounds, each restarting the schedule at a 4x smaller scale.
  int polish_rounds = 8;
  /// The truncated solver screens this many exact fits through d-point
  /// subsets of the data (all subsets when there are fewer) and adds the
  /// best one as a final start. 0 disables the extra start.
  int elemental_candidates = 256;

  void validate() const;
  double scale_for(const Domain& domain) const { return step_scale.value_or(domain.radius); }
};

struct SolveReport {
  Vector weights;
  double objective_value = 0.0;
  int starts_tried = 0;
  int best_start_index = 0;
  double saturation_fraction = 0.0;
  bool saturation_warning = false;
  /// Objective at every iterate of the winning start (main schedule then
  /// polish), only when record_trajectory is set.
  std::vector<double> trajectory;
};

/// Projected subgradient descent on the empirical l1 risk from w = 0, with
/// step step_scale / (G sqrt(t)) and G = max_i ||x_i||. Best iterate wins.
SolveReport solve_erm_l1(const Dataset& data, const Domain& domain, const SolverConfig& config = {});

/// Multi-start projected normalized gradient descent on the truncated l1
/// objective. Starts: 0, the ERM-l1 solution, then uniform points in the ball.
SolveReport solve_truncated_l1(const Dataset& data, const Domain& domain,
                               const TruncatedL1Spec& spec, const SolverConfig& config = {});

struct MinMaxReport {
  /// `weights.objective_value` is the certificate: max over the pool of
  /// payoff(w_final, u').
  SolveReport w;
  Vector u;
};

/// Simultaneous projected gradient descent-ascent with normalized steps
/// step_scale / sqrt(t); last iterate is returned.
MinMaxReport solve_minmax_l2(const Dataset& data, const Domain& domain, const MinMaxSpec& spec,
                             const SolverConfig& config = {});

/// Exact minimizer of the empirical squared risk over the ball.
Vector fit_least_squares_in_ball(const Dataset& data, const Domain& domain);

SolveReport solve_erm_l2(const Dataset& data, const Domain& domain);

/// max over pool of payoff(w, u'), pool = {0, u_final, restarts uniform points}.
double minmax_certificate(const Dataset& data, const Domain& domain, const MinMaxSpec& spec,
                          std::span<const double> w, std::span<const double> u_final,
                          const SolverConfig& config);

/// Uniform point in the ball.
template <class Generator>
Vector uniform_in_ball(const Domain& domain, Generator& gen) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  Vector w(domain.d);
  double length = 0.0;
  do {
    for (double& v : w) v = gauss(gen);
    length = norm(w);
  } while (length == 0.0);
  const double radius = domain.radius * std::pow(unit(gen), 1.0 / static_cast<double>(domain.d));
  for (double& v : w) v *= radius / length;
  return w;
}

/// Brute-force minimizer over the regular grid on [-B, B]^d intersected with
/// the ball, `resolution` points per axis. Ties go to the lexicographically
/// smallest point. Only d <= 2.
template <class Objective>
Vector grid_search(Objective&& objective, const Domain& domain, std::size_t resolution) {
  if (domain.d > 2)
    throw Error(ErrorCode::UnsupportedDimension, "grid_search supports d <= 2 only");
  require(resolution >= 2, "grid resolution must be at least 2");
  const double b = domain.radius;
  const double step = 2.0 * b / static_cast<double>(resolution - 1);
  auto coord = [&](std::size_t k) {
    return k + 1 == resolution ? b : -b + step * static_cast<double>(k);
  };
  const double limit = b * b * (1.0 + 1e-12);
  Vector best;
  double best_value = INFINITY;
  Vector w(domain.d);
  if (domain.d == 1) {
    for (std::size_t k = 0; k < resolution; ++k) {
      w[0] = coord(k);
      const double v = objective(std::span<const double>(w));
      if (v < best_value || best.empty()) {
        best_value = v;
        best = w;
      }
    }
    return best;
  }
  for (std::size_t k = 0; k < resolution; ++k) {
    w[0] = coord(k);
    for (std::size_t l = 0; l < resolution; ++l) {
      w[1] = coord(l);
      if (w[0] * w[0] + w[1] * w[1] > limit) continue;
      const double v = objective(std::span<const double>(w));
      if (v < best_value || best.empty()) {
        best_value = v;
        best = w;
      }
    }
  }
  return best;
}

}  // namespace robustl1
