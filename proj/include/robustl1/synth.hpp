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
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>

#include "robustl1/data_model.hpp"
#include "robustl1/rng.hpp"

namespace robustl1 {

// Input distributions.
struct GaussianIso {
  double sigma_x = 1.0;
};
/// Uniform direction, Pareto(tail, scale) radius: P(r > t) = (scale / t)^tail.
struct ParetoRadial {
  double tail;
  double scale = 1.0;
};
/// Uniform on the ball of radius D.
struct UniformBall {
  double radius;
};
using InputDist = std::variant<GaussianIso, ParetoRadial, UniformBall>;

// Noise distributions; all symmetric about zero.
struct GaussianNoise {
  double sigma;
};
struct StudentTNoise {
  double dof;
  double scale = 1.0;
};
/// Random sign times a Lomax magnitude scale * (U^(-1/tail) - 1), so the
/// density is positive at 0 and P(|e| > t) ~ t^-tail.
struct SymmetricParetoNoise {
  double tail;
  double scale = 1.0;
};
/// Random sign times exp(mu + sigma_ln Z).
struct CenteredLogNormalNoise {
  double mu = 0.0;
  double sigma_ln = 1.0;
};
using NoiseDist =
    std::variant<GaussianNoise, StudentTNoise, SymmetricParetoNoise, CenteredLogNormalNoise>;

/// y = x^T w_true + noise. With symmetric noise and ||w_true|| <= B the l1
/// risk minimizer over the ball is w_true itself.
struct TaskSpec {
  std::size_t d;
  Vector w_true;
  double radius;  // B
  InputDist input;
  NoiseDist noise;

  void validate() const;
  Domain domain() const { return Domain(radius, d); }
};

/// Tails heavy enough to break the finite second-moment assumptions.
bool outside_assumption_scope(const TaskSpec& task);

struct TaskMoments {
  double mean_norm;       // E||x||
  double mean_sq_norm;    // E||x||^2 (may be +inf)
  double noise_variance;  // E e^2 (may be +inf)
  /// 2 E e^2 + 2 (2B)^2 E||x||^2, an upper bound on sup_w R_l2 over the ball.
  double sup_l2_risk;
  std::optional<double> max_input_norm;  // D, for bounded inputs

  bool finite() const;
};

TaskMoments task_moments(const TaskSpec& task);

/// Streams i.i.d. (x, noise) pairs for a task.
class SampleStream {
 public:
  SampleStream(const TaskSpec& task, std::uint64_t seed);

  /// Fills x and returns the noise term.
  double draw(std::span<double> x);

 private:
  void draw_input(std::span<double> x);
  double draw_noise();
  double random_sign();

  const TaskSpec& task_;
  Rng rng_;
  std::normal_distribution<double> gauss_;
  std::uniform_real_distribution<double> unit_;
  std::optional<std::student_t_distribution<double>> student_;
};

Dataset generate(const TaskSpec& task, std::size_t n, std::uint64_t seed);

struct RiskMethod {
  enum class Kind { Analytic, MonteCarlo };
  Kind kind = Kind::MonteCarlo;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;

  static RiskMethod analytic() { return {Kind::Analytic, 0, 0}; }
  static RiskMethod monte_carlo(std::size_t m, std::uint64_t seed) {
    return {Kind::MonteCarlo, m, seed};
  }
};

struct RiskEvaluation {
  double value;
  RiskMethod method;
  std::optional<double> std_error;  // MonteCarlo only
};

bool analytic_risk_supported(const TaskSpec& task);

/// E|y - x^T w|. Analytic only for Gaussian inputs with Gaussian noise.
RiskEvaluation true_l1_risk(const TaskSpec& task, std::span<const double> w, const RiskMethod& method);

/// R(w) - R(w_true). The Monte Carlo version evaluates both risks on the same
/// draws and reports the standard error of the paired difference.
RiskEvaluation excess_l1_risk(const TaskSpec& task, std::span<const double> w,
                              const RiskMethod& method);

}  // namespace robustl1
