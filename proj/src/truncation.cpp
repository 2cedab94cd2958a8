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
#include "robustl1/truncation.hpp"

#include <algorithm>
#include <cmath>

#include "psi_kernels.hpp"
#include "robustl1/error.hpp"

namespace robustl1 {
using detail::derivative_nonnegative;
using detail::log_quadratic;
using detail::psi_nonnegative;

std::string_view to_string(TruncationKind kind) {
  return kind == TruncationKind::SaturatingOdd ? "saturating" : "logquad";
}

TruncationKind parse_truncation_kind(std::string_view text) {
  if (text == "saturating" || text == "SaturatingOdd") return TruncationKind::SaturatingOdd;
  if (text == "logquad" || text == "LogQuadratic") return TruncationKind::LogQuadratic;
  throw_invalid("unknown truncation kind '" + std::string(text) + "'");
}

double psi(TruncationKind kind, double x) {
  require_finite(x, "psi argument");
  return x < 0.0 ? -psi_nonnegative(kind, -x) : psi_nonnegative(kind, x);
}

double psi_derivative(TruncationKind kind, double x) {
  require_finite(x, "psi argument");
  return derivative_nonnegative(kind, std::fabs(x));
}

Envelope psi_envelope(double x) {
  require_finite(x, "psi argument");
  return {-log_quadratic(-x), log_quadratic(x)};
}

PsiCheckReport check_psi(TruncationKind kind, std::size_t grid_points, double range,
                         double slack_tolerance) {
  require(grid_points >= 2, "grid needs at least 2 points");
  require(range > 0.0 && std::isfinite(range), "range must be positive and finite");

  PsiCheckReport report;
  report.points = grid_points;
  const double step = 2.0 * range / static_cast<double>(grid_points - 1);
  double previous = -INFINITY;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = i + 1 == grid_points ? range : -range + step * static_cast<double>(i);
    const double value = psi(kind, x);
    const Envelope env = psi_envelope(x);
    const double slack = std::min(value - env.lower, env.upper - value);
    if (slack < report.worst_envelope_slack) report.worst_envelope_slack = slack;
    if (slack < -slack_tolerance) report.envelope_ok = false;
    if (value < previous) report.monotone_ok = false;
    if (psi(kind, -x) != -value) report.odd_ok = false;
    previous = value;
  }
  return report;
}

}  // namespace robustl1
