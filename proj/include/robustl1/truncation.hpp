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
#include <string>
#include <string_view>

namespace robustl1 {

/// Truncation functions psi usable in the Catoni-style estimators.
///
/// SaturatingOdd:  -log(1 - x + x^2/2) on [0, 1], log 2 beyond, odd extension.
/// LogQuadratic:   log(1 + x + x^2/2) for x >= 0, odd extension.
enum class TruncationKind { SaturatingOdd, LogQuadratic };

std::string_view to_string(TruncationKind kind);
/// Accepts "saturating" / "logquad" (and the enum spellings).
TruncationKind parse_truncation_kind(std::string_view text);

double psi(TruncationKind kind, double x);

/// Derivative of psi. At the SaturatingOdd knot |x| = 1 the inner branch
/// value is returned (which is 0).
double psi_derivative(TruncationKind kind, double x);

struct Envelope {
  double lower;
  double upper;
};

/// Bounds every admissible truncation must respect:
/// -log(1 - x + x^2/2) <= psi(x) <= log(1 + x + x^2/2).
Envelope psi_envelope(double x);

struct PsiCheckReport {
  bool envelope_ok = true;
  bool monotone_ok = true;
  bool odd_ok = true;
  double worst_envelope_slack = 0.0;  // most negative slack seen (0 when none)
  std::size_t points = 0;

  bool all_ok() const { return envelope_ok && monotone_ok && odd_ok; }
};

/// Runs the envelope, monotonicity and oddness checks on a uniform grid of
/// `grid_points` points over [-range, range].
PsiCheckReport check_psi(TruncationKind kind, std::size_t grid_points, double range,
                         double slack_tolerance = 1e-12);

}  // namespace robustl1
