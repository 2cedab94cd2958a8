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
#include <span>

#include "robustl1/truncation.hpp"

namespace robustl1 {

/// sqrt(2 / (n nu)), the scale that gives an O(sqrt(nu/n)) deviation.
double default_alpha_mean(std::size_t n, double nu);

struct CatoniConfig {
  std::optional<double> alpha{};
  /// Known variance. When absent the unbiased sample variance is used.
  std::optional<double> variance{};
  /// Bisection stops once the bracket is narrower than this. Defaults to
  /// 1e-10 times the data range.
  std::optional<double> tolerance{};
  int max_iterations = 200;
};

struct CatoniEstimate {
  double value;
  double alpha;  // 0 when the input was degenerate and no root search ran
  bool variance_plugin;
  int iterations;
};

/// Root of sum_i psi(alpha (x_i - theta)) = 0, found by bisection on
/// [min x, max x]. Plateaus return the midpoint of the root interval.
CatoniEstimate catoni_estimate(std::span<const double> values, TruncationKind kind,
                               const CatoniConfig& config = {});

}  // namespace robustl1
