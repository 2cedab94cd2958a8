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

// Unchecked psi evaluations for non-negative arguments, shared by the public
// truncation functions and the objective inner loops.

#include <cmath>
#include <numbers>

#include "robustl1/truncation.hpp"

namespace robustl1::detail {

// log(1 + x + x^2/2), accurate near 0 and free of overflow for huge |x|.
inline double log_quadratic(double x) {
  const double ax = std::fabs(x);
  if (ax < 1e100) return std::log1p(x + 0.5 * x * x);
  const double inv = 1.0 / x;
  return 2.0 * std::log(ax) - std::numbers::ln2 + std::log1p(2.0 * inv + 2.0 * inv * inv);
}

inline double psi_nonnegative(TruncationKind kind, double x) {
  if (kind == TruncationKind::LogQuadratic) return log_quadratic(x);
  return x >= 1.0 ? std::numbers::ln2 : -std::log1p(-x + 0.5 * x * x);
}

inline double derivative_nonnegative(TruncationKind kind, double x) {
  if (kind == TruncationKind::LogQuadratic) {
    if (x > 1e100) return 0.0;
    return (1.0 + x) / (1.0 + x + 0.5 * x * x);
  }
  if (x > 1.0) return 0.0;
  return (1.0 - x) / (1.0 - x + 0.5 * x * x);
}

}  // namespace robustl1::detail
