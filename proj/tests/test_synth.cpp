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
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "robustl1/error.hpp"
#include "robustl1/synth.hpp"

using namespace robustl1;

namespace {
TaskSpec gaussian_task(std::size_t d, double sigma) {
  Vector w(d, 0.0);
  w[0] = 0.5;
  return {d, w, 1.0, GaussianIso{1.0}, GaussianNoise{sigma}};
}

std::vector<TaskSpec> heavy_tasks() {
  return {
      {2, {0.3, -0.2}, 1.0, GaussianIso{1.0}, StudentTNoise{2.5, 1.0}},
      {2, {0.3, -0.2}, 1.0, UniformBall{1.0}, SymmetricParetoNoise{2.1, 1.0}},
      {2, {0.3, -0.2}, 1.0, ParetoRadial{3.0, 1.0}, CenteredLogNormalNoise{0.0, 1.0}},
      {2, {0.3, -0.2}, 1.0, GaussianIso{2.0}, GaussianNoise{1.0}},
  };
}

Vector random_in_ball(std::mt19937_64& rng, std::size_t d, double radius) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  Vector w(d);
  for (double& v : w) v = g(rng);
  const double scale = radius * std::pow(u(rng), 1.0 / static_cast<double>(d)) / norm(w);
  for (double& v : w) v *= scale;
  return w;
}
}  // namespace

TEST_CASE("task validation") {
  TaskSpec t = gaussian_task(2, 1.0);
  CHECK_NOTHROW(t.validate());
  t.w_true = {2.0, 0.0};
  CHECK_THROWS_AS(t.validate(), Error);
  t = gaussian_task(2, 1.0);
  t.w_true = {0.1};
  CHECK_THROWS_AS(t.validate(), Error);
  t = gaussian_task(2, 1.0);
  t.input = ParetoRadial{0.5, 1.0};
  CHECK_THROWS_AS(generate(t, 10, 1), Error);
  t = gaussian_task(2, 1.0);
  t.noise = SymmetricParetoNoise{1.0, 1.0};
  CHECK_THROWS_AS(t.validate(), Error);
  t = gaussian_task(2, 1.0);
  t.noise = GaussianNoise{-1.0};
  CHECK_THROWS_AS(t.validate(), Error);
  CHECK_THROWS_AS(generate(gaussian_task(2, 1.0), 0, 1), Error);
}

TEST_CASE("generate") {
  const TaskSpec clean = gaussian_task(3, 0.0);
  const Dataset data = generate(clean, 200, 5);
  for (std::size_t i = 0; i < data.size(); ++i)
    CHECK(data.y(i) == dot(data.x(i), clean.w_true));

  const TaskSpec ball{3, {0.1, 0.1, 0.1}, 1.0, UniformBall{0.7}, GaussianNoise{1.0}};
  const Dataset b = generate(ball, 5000, 6);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(norm(b.x(i)) <= 0.7 + 1e-15);

  for (const TaskSpec& task : heavy_tasks()) {
    const Dataset a1 = generate(task, 100, 77);
    const Dataset a2 = generate(task, 100, 77);
    CHECK(std::equal(a1.features().begin(), a1.features().end(), a2.features().begin()));
    CHECK(std::equal(a1.responses().begin(), a1.responses().end(), a2.responses().begin()));
    const Dataset a3 = generate(task, 100, 78);
    CHECK_FALSE(std::equal(a1.responses().begin(), a1.responses().end(), a3.responses().begin()));
  }
}

TEST_CASE("analytic risk") {
  const TaskSpec t = gaussian_task(2, 1.0);
  const RiskMethod analytic = RiskMethod::analytic();
  const RiskEvaluation at_truth = true_l1_risk(t, t.w_true, analytic);
  CHECK(at_truth.value == doctest::Approx(0.797884560802865356).epsilon(1e-15));
  CHECK_FALSE(at_truth.std_error.has_value());
  const Vector off{0.5, 1.0};
  CHECK(true_l1_risk(t, off, analytic).value == doctest::Approx(1.128379167095512574).epsilon(1e-15));
  CHECK(excess_l1_risk(t, off, analytic).value ==
        doctest::Approx(0.330494606292647218).epsilon(1e-14));
  CHECK(excess_l1_risk(t, t.w_true, analytic).value == 0.0);

  const TaskSpec heavy = heavy_tasks()[0];
  try {
    true_l1_risk(heavy, heavy.w_true, analytic);
    FAIL("expected unsupported method");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedMethod);
  }
  CHECK_THROWS_AS(true_l1_risk(t, Vector{1.0}, analytic), Error);
}

TEST_CASE("monte carlo agrees with the closed form") {
  const TaskSpec t = gaussian_task(2, 1.0);
  const Vector w{0.2, 0.4};
  const RiskEvaluation mc = true_l1_risk(t, w, RiskMethod::monte_carlo(10'000'000, 3));
  REQUIRE(mc.std_error.has_value());
  const double exact = true_l1_risk(t, w, RiskMethod::analytic()).value;
  CHECK(std::fabs(mc.value - exact) <= 4 * *mc.std_error);
  const RiskEvaluation ex = excess_l1_risk(t, w, RiskMethod::monte_carlo(1'000'000, 4));
  const double exact_ex = excess_l1_risk(t, w, RiskMethod::analytic()).value;
  CHECK(std::fabs(ex.value - exact_ex) <= 4 * *ex.std_error);
  CHECK(excess_l1_risk(t, t.w_true, RiskMethod::monte_carlo(1000, 5)).value == 0.0);
}

TEST_CASE("w_true minimizes the l1 risk on every task") {
  std::mt19937_64 rng(61);
  for (const TaskSpec& task : heavy_tasks()) {
    for (int rep = 0; rep < 1000; ++rep) {
      const Vector w = random_in_ball(rng, task.d, task.radius);
      const RiskEvaluation e = excess_l1_risk(task, w, RiskMethod::monte_carlo(4000, 100 + rep));
      CHECK(e.value >= -4 * *e.std_error);
    }
  }
}

TEST_CASE("flipping the noise sign leaves the risk unchanged") {
  std::mt19937_64 rng(62);
  for (const TaskSpec& task : heavy_tasks()) {
    const Dataset data = generate(task, 200000, 9);
    for (int rep = 0; rep < 5; ++rep) {
      const Vector w = random_in_ball(rng, task.d, task.radius);
      // paired statistic |a + e| - |a - e| with a = x^T (w_true - w)
      double sum = 0, sum_sq = 0;
      const double n = static_cast<double>(data.size());
      for (std::size_t i = 0; i < data.size(); ++i) {
        const double signal = dot(data.x(i), task.w_true);
        const double noise = data.y(i) - signal;
        const double a = signal - dot(data.x(i), w);
        const double diff = std::fabs(a + noise) - std::fabs(a - noise);
        sum += diff;
        sum_sq += diff * diff;
      }
      const double mean = sum / n;
      const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
      CHECK(std::fabs(mean) <= 4 * se);
    }
  }
}

TEST_CASE("task moments") {
  const TaskSpec g5{5, Vector(5, 0.0), 1.0, GaussianIso{1.0}, GaussianNoise{2.0}};
  const TaskMoments m = task_moments(g5);
  CHECK(m.mean_norm == doctest::Approx(2.127692162140974282).epsilon(1e-14));
  CHECK(m.mean_sq_norm == 5.0);
  CHECK(m.noise_variance == 4.0);
  CHECK(m.sup_l2_risk == doctest::Approx(2 * 4.0 + 2 * 4.0 * 5.0).epsilon(1e-15));
  CHECK_FALSE(m.max_input_norm.has_value());
  CHECK(m.finite());

  const TaskSpec ball{3, Vector(3, 0.0), 1.0, UniformBall{2.0}, StudentTNoise{3.0, 2.0}};
  const TaskMoments mb = task_moments(ball);
  CHECK(mb.max_input_norm == 2.0);
  CHECK(mb.noise_variance == doctest::Approx(4.0 * 3.0).epsilon(1e-15));

  // sampled moments agree with the closed forms
  for (const TaskSpec& task : heavy_tasks()) {
    const TaskMoments tm = task_moments(task);
    SampleStream stream(task, 123);
    Vector x(task.d);
    double s1 = 0, s2 = 0, sn = 0;
    const std::size_t m_draws = 400000;
    for (std::size_t k = 0; k < m_draws; ++k) {
      const double e = stream.draw(x);
      s1 += norm(x);
      s2 += dot(x, x);
      sn += e * e;
    }
    CHECK(s1 / m_draws == doctest::Approx(tm.mean_norm).epsilon(0.02));
    CHECK(s2 / m_draws == doctest::Approx(tm.mean_sq_norm).epsilon(0.1));
    if (std::holds_alternative<GaussianNoise>(task.noise))
      CHECK(sn / m_draws == doctest::Approx(tm.noise_variance).epsilon(0.02));
  }
}

TEST_CASE("assumption scope diagnostics") {
  TaskSpec t{2, {0, 0}, 1.0, ParetoRadial{2.0, 1.0}, GaussianNoise{1.0}};
  CHECK(outside_assumption_scope(t));
  t.input = ParetoRadial{1.5, 1.0};
  CHECK(outside_assumption_scope(t));
  t.input = ParetoRadial{4.5, 1.0};
  CHECK_FALSE(outside_assumption_scope(t));
  t.noise = StudentTNoise{2.0, 1.0};
  CHECK(outside_assumption_scope(t));
  t.noise = SymmetricParetoNoise{1.8, 1.0};
  CHECK(outside_assumption_scope(t));

  // finite second moment: doubling the sample barely moves the estimate
  const TaskSpec finite{2, {0, 0}, 1.0, ParetoRadial{4.5, 1.0}, GaussianNoise{1.0}};
  auto estimate = [&](std::size_t m) {
    const Dataset d = generate(finite, m, 99);
    double s = 0, s2 = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = dot(d.x(i), d.x(i));
      s += v;
      s2 += v * v;
    }
    const double mean = s / m;
    return std::pair{mean, std::sqrt((s2 / m - mean * mean) / (m - 1))};
  };
  const auto [a, se] = estimate(200000);
  const auto [b, se2] = estimate(400000);
  CHECK(std::fabs(a - b) < 10 * se);
  (void)se2;
}
