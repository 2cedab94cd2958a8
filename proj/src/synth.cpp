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
#include "robustl1/synth.hpp"

#include <cmath>
#include <numbers>

#include "robustl1/error.hpp"

namespace robustl1 {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* what) {
  require(v > 0.0 && std::isfinite(v), std::string(what) + " must be positive and finite");
}

// Running mean and variance.
struct Welford {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }
  double std_error() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  }
};

double chi_mean(std::size_t d) {
  const double k = static_cast<double>(d);
  return std::sqrt(2.0) * std::exp(std::lgamma(0.5 * (k + 1.0)) - std::lgamma(0.5 * k));
}

}  // namespace

void TaskSpec::validate() const {
  require(d >= 1, "task dimension d must be positive");
  require(w_true.size() == d, "w_true must have length d");
  for (double v : w_true) require_finite(v, "w_true entry");
  require_positive(radius, "B");
  require(norm(w_true) <= radius * (1.0 + 1e-12), "||w_true|| must not exceed B");
  std::visit(Overloaded{
                 [](const GaussianIso& g) { require_positive(g.sigma_x, "GaussianIso sigma_x"); },
                 [](const ParetoRadial& p) {
                   require(p.tail > 1.0 && std::isfinite(p.tail), "ParetoRadial tail must exceed 1");
                   require_positive(p.scale, "ParetoRadial scale");
                 },
                 [](const UniformBall& u) { require_positive(u.radius, "UniformBall D"); },
             },
             input);
  std::visit(Overloaded{
                 [](const GaussianNoise& g) {
                   require(g.sigma >= 0.0 && std::isfinite(g.sigma), "Gaussian sigma must be >= 0");
                 },
                 [](const StudentTNoise& t) {
                   require_positive(t.dof, "StudentT dof");
                   require_positive(t.scale, "StudentT scale");
                 },
                 [](const SymmetricParetoNoise& p) {
                   require(p.tail > 1.0 && std::isfinite(p.tail),
                           "SymmetricPareto tail must exceed 1");
                   require_positive(p.scale, "SymmetricPareto scale");
                 },
                 [](const CenteredLogNormalNoise& l) {
                   require_finite(l.mu, "CenteredLogNormal mu");
                   require_positive(l.sigma_ln, "CenteredLogNormal sigma_ln");
                 },
             },
             noise);
}

bool outside_assumption_scope(const TaskSpec& task) {
  return !task_moments(task).finite();
}

bool TaskMoments::finite() const {
  return std::isfinite(mean_sq_norm) && std::isfinite(noise_variance);
}

TaskMoments task_moments(const TaskSpec& task) {
  TaskMoments m{};
  const double k = static_cast<double>(task.d);
  std::visit(Overloaded{
                 [&](const GaussianIso& g) {
                   m.mean_norm = g.sigma_x * chi_mean(task.d);
                   m.mean_sq_norm = k * g.sigma_x * g.sigma_x;
                 },
                 [&](const ParetoRadial& p) {
                   m.mean_norm = p.tail * p.scale / (p.tail - 1.0);
                   m.mean_sq_norm =
                       p.tail > 2.0 ? p.tail * p.scale * p.scale / (p.tail - 2.0) : INFINITY;
                 },
                 [&](const UniformBall& u) {
                   m.mean_norm = k * u.radius / (k + 1.0);
                   m.mean_sq_norm = k * u.radius * u.radius / (k + 2.0);
                   m.max_input_norm = u.radius;
                 },
             },
             task.input);
  m.noise_variance = std::visit(
      Overloaded{
          [](const GaussianNoise& g) { return g.sigma * g.sigma; },
          [](const StudentTNoise& t) {
            return t.dof > 2.0 ? t.scale * t.scale * t.dof / (t.dof - 2.0) : INFINITY;
          },
          [](const SymmetricParetoNoise& p) {
            return p.tail > 2.0 ? 2.0 * p.scale * p.scale / ((p.tail - 1.0) * (p.tail - 2.0))
                                : INFINITY;
          },
          [](const CenteredLogNormalNoise& l) {
            return std::exp(2.0 * l.mu + 2.0 * l.sigma_ln * l.sigma_ln);
          },
      },
      task.noise);
  const double diameter = 2.0 * task.radius;
  m.sup_l2_risk = 2.0 * m.noise_variance + 2.0 * diameter * diameter * m.mean_sq_norm;
  return m;
}

SampleStream::SampleStream(const TaskSpec& task, std::uint64_t seed) : task_(task), rng_(seed) {
  if (const auto* t = std::get_if<StudentTNoise>(&task.noise))
    student_.emplace(t->dof);
}

double SampleStream::random_sign() { return unit_(rng_) < 0.5 ? -1.0 : 1.0; }

void SampleStream::draw_input(std::span<double> x) {
  std::visit(Overloaded{
                 [&](const GaussianIso& g) {
                   for (double& v : x) v = g.sigma_x * gauss_(rng_);
                 },
                 [&](const ParetoRadial& p) {
                   double length = 0.0;
                   do {
                     for (double& v : x) v = gauss_(rng_);
                     length = norm(x);
                   } while (length == 0.0);
                   const double radius = p.scale * std::pow(1.0 - unit_(rng_), -1.0 / p.tail);
                   for (double& v : x) v *= radius / length;
                 },
                 [&](const UniformBall& u) {
                   double length = 0.0;
                   do {
                     for (double& v : x) v = gauss_(rng_);
                     length = norm(x);
                   } while (length == 0.0);
                   const double radius =
                       u.radius * std::pow(unit_(rng_), 1.0 / static_cast<double>(x.size()));
                   for (double& v : x) v *= radius / length;
                 },
             },
             task_.input);
}

double SampleStream::draw_noise() {
  return std::visit(
      Overloaded{
          [&](const GaussianNoise& g) { return g.sigma * gauss_(rng_); },
          [&](const StudentTNoise& t) { return t.scale * (*student_)(rng_); },
          [&](const SymmetricParetoNoise& p) {
            const double magnitude = p.scale * (std::pow(1.0 - unit_(rng_), -1.0 / p.tail) - 1.0);
            return random_sign() * magnitude;
          },
          [&](const CenteredLogNormalNoise& l) {
            const double magnitude = std::exp(l.mu + l.sigma_ln * gauss_(rng_));
            return random_sign() * magnitude;
          },
      },
      task_.noise);
}

double SampleStream::draw(std::span<double> x) {
  draw_input(x);
  return draw_noise();
}

Dataset generate(const TaskSpec& task, std::size_t n, std::uint64_t seed) {
  task.validate();
  require(n >= 1, "n must be positive");
  SampleStream stream(task, seed);
  std::vector<double> features(n * task.d);
  std::vector<double> responses(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> x(features.data() + i * task.d, task.d);
    const double noise = stream.draw(x);
    responses[i] = dot(x, task.w_true) + noise;
  }
  return Dataset(task.d, std::move(features), std::move(responses));
}

bool analytic_risk_supported(const TaskSpec& task) {
  return std::holds_alternative<GaussianIso>(task.input) &&
         std::holds_alternative<GaussianNoise>(task.noise);
}

namespace {

double analytic_risk(const TaskSpec& task, std::span<const double> w) {
  if (!analytic_risk_supported(task))
    throw Error(ErrorCode::UnsupportedMethod,
                "analytic l1 risk needs GaussianIso inputs and Gaussian noise");
  const double sx = std::get<GaussianIso>(task.input).sigma_x;
  const double s = std::get<GaussianNoise>(task.noise).sigma;
  double gap = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) gap += (task.w_true[j] - w[j]) * (task.w_true[j] - w[j]);
  return std::sqrt(2.0 / std::numbers::pi) * std::sqrt(sx * sx * gap + s * s);
}

void check_risk_args(const TaskSpec& task, std::span<const double> w, const RiskMethod& method) {
  task.validate();
  require(w.size() == task.d, "weight dimension does not match task");
  if (method.kind == RiskMethod::Kind::MonteCarlo)
    require(method.samples >= 2, "Monte Carlo risk needs at least 2 samples");
}

}  // namespace

RiskEvaluation true_l1_risk(const TaskSpec& task, std::span<const double> w, const RiskMethod& method) {
  check_risk_args(task, w, method);
  if (method.kind == RiskMethod::Kind::Analytic) return {analytic_risk(task, w), method, std::nullopt};

  Vector gap(task.d);
  for (std::size_t j = 0; j < task.d; ++j) gap[j] = task.w_true[j] - w[j];
  SampleStream stream(task, method.seed);
  Vector x(task.d);
  Welford acc;
  for (std::size_t k = 0; k < method.samples; ++k) {
    const double noise = stream.draw(x);
    acc.add(std::fabs(noise + dot(x, gap)));
  }
  return {acc.mean, method, acc.std_error()};
}

RiskEvaluation excess_l1_risk(const TaskSpec& task, std::span<const double> w,
                              const RiskMethod& method) {
  check_risk_args(task, w, method);
  if (method.kind == RiskMethod::Kind::Analytic)
    return {analytic_risk(task, w) - analytic_risk(task, task.w_true), method, std::nullopt};

  Vector gap(task.d);
  for (std::size_t j = 0; j < task.d; ++j) gap[j] = task.w_true[j] - w[j];
  SampleStream stream(task, method.seed);
  Vector x(task.d);
  Welford acc;
  for (std::size_t k = 0; k < method.samples; ++k) {
    const double noise = stream.draw(x);
    acc.add(std::fabs(noise + dot(x, gap)) - std::fabs(noise));
  }
  return {acc.mean, method, acc.std_error()};
}

}  // namespace robustl1
