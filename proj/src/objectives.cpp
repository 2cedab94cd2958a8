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
#include "robustl1/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "psi_kernels.hpp"
#include "robustl1/error.hpp"

namespace robustl1 {
namespace {

void check_dims(const Dataset& data, std::span<const double> w) {
  require(w.size() == data.dim(), "weight dimension does not match dataset");
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

void TruncatedL1Spec::validate() const {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive and finite");
}

void MinMaxSpec::validate() const {
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be non-negative");
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive and finite");
}

double truncated_l1_value(const Dataset& data, std::span<const double> w,
                          const TruncatedL1Spec& spec) {
  check_dims(data, w);
  spec.validate();
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    acc += detail::psi_nonnegative(spec.kind, spec.alpha * std::fabs(data.residual(i, w)));
  return acc / (static_cast<double>(data.size()) * spec.alpha);
}

double truncated_l1_value_and_gradient(const Dataset& data, std::span<const double> w,
                                       const TruncatedL1Spec& spec, std::span<double> gradient) {
  check_dims(data, w);
  spec.validate();
  std::fill(gradient.begin(), gradient.end(), 0.0);
  const std::size_t d = data.dim();
  const double* x = data.features().data();
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i, x += d) {
    double fit = 0.0;
    for (std::size_t j = 0; j < d; ++j) fit += x[j] * w[j];
    const double r = data.y(i) - fit;
    const double z = spec.alpha * std::fabs(r);
    acc += detail::psi_nonnegative(spec.kind, z);
    const double coef = -detail::derivative_nonnegative(spec.kind, z) * sign(r);
    if (coef == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) gradient[j] += coef * x[j];
  }
  const double n = static_cast<double>(data.size());
  for (double& g : gradient) g /= n;
  return acc / (n * spec.alpha);
}

Vector truncated_l1_gradient(const Dataset& data, std::span<const double> w,
                             const TruncatedL1Spec& spec) {
  Vector gradient(data.dim());
  truncated_l1_value_and_gradient(data, w, spec, gradient);
  return gradient;
}

Vector erm_l1_subgradient(const Dataset& data, std::span<const double> w) {
  check_dims(data, w);
  Vector g(data.dim(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double s = sign(data.residual(i, w));
    if (s == 0.0) continue;
    const auto x = data.x(i);
    for (std::size_t j = 0; j < x.size(); ++j) g[j] -= s * x[j];
  }
  for (double& v : g) v /= static_cast<double>(data.size());
  return g;
}

double minmax_l2_payoff(const Dataset& data, std::span<const double> w, std::span<const double> u,
                        const MinMaxSpec& spec) {
  check_dims(data, w);
  check_dims(data, u);
  spec.validate();
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double rw = data.residual(i, w);
    const double ru = data.residual(i, u);
    acc += psi(TruncationKind::SaturatingOdd, spec.alpha * (rw * rw) - spec.alpha * (ru * ru));
  }
  const double ridge = spec.lambda * (dot(w, w) - dot(u, u));
  return ridge + acc / (spec.alpha * static_cast<double>(data.size()));
}

PayoffGradients minmax_l2_payoff_gradients(const Dataset& data, std::span<const double> w,
                                           std::span<const double> u, const MinMaxSpec& spec) {
  check_dims(data, w);
  check_dims(data, u);
  spec.validate();
  const std::size_t d = data.dim();
  PayoffGradients g{Vector(d, 0.0), Vector(d, 0.0)};
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double rw = data.residual(i, w);
    const double ru = data.residual(i, u);
    const double slope =
        psi_derivative(TruncationKind::SaturatingOdd, spec.alpha * (rw * rw) - spec.alpha * (ru * ru));
    if (slope == 0.0) continue;
    const auto x = data.x(i);
    for (std::size_t j = 0; j < d; ++j) {
      g.w[j] -= 2.0 * slope * rw * x[j];
      g.u[j] += 2.0 * slope * ru * x[j];
    }
  }
  const double n = static_cast<double>(data.size());
  for (std::size_t j = 0; j < d; ++j) {
    g.w[j] = g.w[j] / n + 2.0 * spec.lambda * w[j];
    g.u[j] = g.u[j] / n - 2.0 * spec.lambda * u[j];
  }
  return g;
}

double saturation_fraction(const Dataset& data, std::span<const double> w, double alpha) {
  check_dims(data, w);
  std::size_t count = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (alpha * std::fabs(data.residual(i, w)) >= 1.0) ++count;
  return static_cast<double>(count) / static_cast<double>(data.size());
}

}  // namespace robustl1
