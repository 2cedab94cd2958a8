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
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "robustl1/error.hpp"
#include "robustl1/solvers.hpp"

using namespace robustl1;

namespace {
constexpr TruncationKind kKinds[] = {TruncationKind::SaturatingOdd, TruncationKind::LogQuadratic};

Dataset heavy_dataset(std::mt19937_64& rng, std::size_t n, const Vector& w0, double noise) {
  std::normal_distribution<double> g;
  std::student_t_distribution<double> t(2.5);
  const std::size_t d = w0.size();
  std::vector<double> x(n * d), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t k = 0; k < d; ++k) {
      x[i * d + k] = g(rng);
      s += x[i * d + k] * w0[k];
    }
    y[i] = s + noise * t(rng);
  }
  return Dataset(d, std::move(x), std::move(y));
}

bool same_report(const SolveReport& a, const SolveReport& b) {
  return a.weights == b.weights && a.objective_value == b.objective_value &&
         a.best_start_index == b.best_start_index && a.starts_tried == b.starts_tried &&
         a.saturation_fraction == b.saturation_fraction;
}
}  // namespace

TEST_CASE("solver config validation") {
  const Dataset data(1, {1}, {1});
  const Domain dom(1, 1);
  SolverConfig bad;
  bad.iterations = 0;
  CHECK_THROWS_AS(solve_erm_l1(data, dom, bad), Error);
  bad = {};
  bad.restarts = 0;
  CHECK_THROWS_AS(solve_truncated_l1(data, dom, {1.0}, bad), Error);
  bad = {};
  bad.step_scale = -1.0;
  CHECK_THROWS_AS(solve_erm_l1(data, dom, bad), Error);
  CHECK_THROWS_AS(solve_erm_l1(data, Domain(1, 2), {}), Error);
  CHECK_THROWS_AS(solve_truncated_l1(data, dom, {0.0}, {}), Error);
}

TEST_CASE("erm l1 finds the sample median") {
  const Dataset data(1, {1, 1, 1}, {1, 2, 100});
  const SolveReport r = solve_erm_l1(data, Domain(200, 1));
  CHECK(std::fabs(r.weights[0] - 2.0) < 1e-3);
}

TEST_CASE("realizable data is fit exactly") {
  std::mt19937_64 rng(51);
  const Vector w0{0.6, -0.3};
  const Dataset data = heavy_dataset(rng, 80, w0, 0.0);
  const Domain dom(1, 2);
  CHECK(solve_erm_l1(data, dom).objective_value <= 1e-6);
  for (TruncationKind kind : kKinds)
    CHECK(solve_truncated_l1(data, dom, {0.7, kind}).objective_value <= 1e-6);
}

TEST_CASE("erm l1 matches the 2-d grid oracle") {
  std::mt19937_64 rng(52);
  for (int rep = 0; rep < 3; ++rep) {
    const Dataset data = heavy_dataset(rng, 25, {0.4, 0.2}, 1.0);
    const Domain dom(1, 2);
    auto objective = [&](std::span<const double> w) { return empirical_risk(data, w, LossKind::L1); };
    const double grid_min = objective(grid_search(objective, dom, 2000));
    const SolveReport r = solve_erm_l1(data, dom);
    CHECK(r.objective_value <= grid_min + 1e-3 * (1 + std::fabs(grid_min)));
  }
}

TEST_CASE("truncated l1 matches the 1-d grid oracle") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> alpha_dist(0.05, 5.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset data = heavy_dataset(rng, 60, {0.5}, 2.0);
    const Domain dom(2, 1);
    for (TruncationKind kind : kKinds) {
      const TruncatedL1Spec spec{alpha_dist(rng), kind};
      auto objective = [&](std::span<const double> w) { return truncated_l1_value(data, w, spec); };
      const double grid_min = objective(grid_search(objective, dom, 100000));
      const SolveReport r = solve_truncated_l1(data, dom, spec);
      CHECK(r.objective_value <= grid_min + 1e-3 * (1 + std::fabs(grid_min)));
    }
  }
}

TEST_CASE("tiny alpha truncated solution matches erm") {
  std::mt19937_64 rng(54);
  std::normal_distribution<double> g;
  const Vector w0{0.3, -0.2, 0.1};
  std::vector<double> x(200 * 3), y(200);
  for (std::size_t i = 0; i < 200; ++i) {
    double s = 0;
    for (int k = 0; k < 3; ++k) s += (x[i * 3 + k] = g(rng)) * w0[k];
    y[i] = s + g(rng);
  }
  const Dataset data(3, x, y);
  const Domain dom(1, 3);
  const TruncatedL1Spec spec{1e-9, TruncationKind::LogQuadratic};
  const SolveReport erm = solve_erm_l1(data, dom);
  const SolveReport trunc = solve_truncated_l1(data, dom, spec);
  CHECK(std::fabs(trunc.objective_value - truncated_l1_value(data, erm.weights, spec)) <= 1e-4);
}

TEST_CASE("solver report invariants") {
  std::mt19937_64 rng(55);
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset data = heavy_dataset(rng, 50, {1.0, -1.0, 0.5}, 3.0);
    const Domain dom(0.8, 3);
    SolverConfig cfg;
    cfg.iterations = 500;
    cfg.restarts = 6;
    cfg.seed = 1000 + rep;
    const SolveReport erm = solve_erm_l1(data, dom, cfg);
    CHECK(norm(erm.weights) <= dom.radius + 1e-9);
    CHECK(std::fabs(erm.objective_value - empirical_risk(data, erm.weights, LossKind::L1)) <= 1e-10);
    CHECK(erm.objective_value <= empirical_risk(data, Vector(3, 0.0), LossKind::L1));
    for (TruncationKind kind : kKinds) {
      const TruncatedL1Spec spec{0.6, kind};
      const SolveReport r = solve_truncated_l1(data, dom, spec, cfg);
      CHECK(norm(r.weights) <= dom.radius + 1e-9);
      CHECK(std::fabs(r.objective_value - truncated_l1_value(data, r.weights, spec)) <= 1e-10);
      CHECK(r.objective_value <= truncated_l1_value(data, Vector(3, 0.0), spec));
      CHECK(r.objective_value <= truncated_l1_value(data, erm.weights, spec));
      CHECK(r.starts_tried == cfg.restarts + 1);  // prescribed starts plus the elemental start
      CHECK(r.best_start_index >= 0);
      CHECK(r.best_start_index < r.starts_tried);
      CHECK(r.saturation_fraction == saturation_fraction(data, r.weights, spec.alpha));
      CHECK(r.saturation_warning == (r.saturation_fraction > 0.5));
      CHECK(same_report(r, solve_truncated_l1(data, dom, spec, cfg)));
    }
  }
}

TEST_CASE("elemental start") {
  std::mt19937_64 rng(59);
  const Dataset data = heavy_dataset(rng, 40, {0.3, 0.4}, 5.0);
  const Domain dom(1, 2);
  const TruncatedL1Spec spec{2.0, TruncationKind::SaturatingOdd};
  SolverConfig cfg;
  cfg.restarts = 4;
  cfg.elemental_candidates = 0;
  const SolveReport without = solve_truncated_l1(data, dom, spec, cfg);
  CHECK(without.starts_tried == 4);
  cfg.elemental_candidates = 1000;  // all 780 pairs are enumerated
  const SolveReport with = solve_truncated_l1(data, dom, spec, cfg);
  CHECK(with.starts_tried == 5);
  CHECK(with.objective_value <= without.objective_value + 1e-12);
  // never worse than any exact pair fit inside the ball
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t j = i + 1; j < data.size(); ++j) {
      const auto a = data.x(i), b = data.x(j);
      const double det = a[0] * b[1] - a[1] * b[0];
      if (std::fabs(det) < 1e-12) continue;
      const Vector w{(data.y(i) * b[1] - a[1] * data.y(j)) / det,
                     (a[0] * data.y(j) - data.y(i) * b[0]) / det};
      CHECK(with.objective_value <= truncated_l1_value(data, project_to_ball(w, dom), spec) + 1e-12);
    }
  cfg.elemental_candidates = -1;
  CHECK_THROWS_AS(solve_truncated_l1(data, dom, spec, cfg), Error);
}

TEST_CASE("trajectory recording") {
  std::mt19937_64 rng(56);
  const Dataset data = heavy_dataset(rng, 30, {0.2}, 1.0);
  SolverConfig cfg;
  cfg.iterations = 100;
  cfg.restarts = 3;
  cfg.record_trajectory = true;
  const SolveReport r = solve_truncated_l1(data, Domain(1, 1), {1.0}, cfg);
  REQUIRE_FALSE(r.trajectory.empty());
  CHECK(*std::min_element(r.trajectory.begin(), r.trajectory.end()) >= r.objective_value - 1e-12);
  cfg.record_trajectory = false;
  CHECK(solve_truncated_l1(data, Domain(1, 1), {1.0}, cfg).trajectory.empty());
}

TEST_CASE("least squares in the ball") {
  const Dataset data(2, {1, 0, 0, 1, 1, 1}, {1, 2, 3});
  const Vector free = fit_least_squares_in_ball(data, Domain(100, 2));
  CHECK(free[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(free[1] == doctest::Approx(2.0).epsilon(1e-10));
  const Vector tight = fit_least_squares_in_ball(data, Domain(1, 2));
  CHECK(norm(tight) <= 1 + 1e-9);
  auto objective = [&](std::span<const double> w) { return empirical_risk(data, w, LossKind::L2); };
  const double grid_min = objective(grid_search(objective, Domain(1, 2), 1500));
  CHECK(objective(tight) <= grid_min + 1e-9);
  const SolveReport r = solve_erm_l2(data, Domain(1, 2));
  CHECK(r.objective_value == doctest::Approx(objective(r.weights)).epsilon(1e-12));
}

TEST_CASE("minmax solver") {
  std::mt19937_64 rng(57);
  const Vector w0{0.5, -0.4};
  const Dataset data = heavy_dataset(rng, 100, w0, 0.0);
  const Domain dom(1, 2);
  const MinMaxSpec spec{0.0, 0.5};
  SolverConfig cfg;
  cfg.restarts = 8;
  const MinMaxReport r = solve_minmax_l2(data, dom, spec, cfg);
  CHECK(norm(r.w.weights) <= dom.radius + 1e-9);
  CHECK(norm(r.u) <= dom.radius + 1e-9);
  CHECK(r.w.objective_value <= 1e-3);
  CHECK(r.w.objective_value ==
        minmax_certificate(data, dom, spec, r.w.weights, r.u, cfg));
  CHECK(r.w.objective_value >= minmax_l2_payoff(data, r.w.weights, r.u, spec) - 1e-15);

  const MinMaxReport ridge = solve_minmax_l2(data, dom, {1e4, 0.5}, cfg);
  CHECK(norm(ridge.w.weights) <= 0.1 * dom.radius);

  const MinMaxReport again = solve_minmax_l2(data, dom, spec, cfg);
  CHECK(again.w.weights == r.w.weights);
  CHECK(again.u == r.u);
}

TEST_CASE("grid search") {
  auto constant = [](std::span<const double>) { return 1.0; };
  CHECK(grid_search(constant, Domain(1, 1), 5) == Vector{-1.0});
  CHECK(grid_search(constant, Domain(1, 2), 3) == Vector{-1.0, 0.0});
  CHECK(grid_search(constant, Domain(2, 2), 5) == Vector{-2.0, 0.0});

  const Vector c{0.5, -0.25};  // on the grid for B=1, resolution 9
  auto bowl = [&](std::span<const double> w) {
    return (w[0] - c[0]) * (w[0] - c[0]) + (w[1] - c[1]) * (w[1] - c[1]);
  };
  const Vector found = grid_search(bowl, Domain(1, 2), 9);
  CHECK(found[0] == doctest::Approx(c[0]).epsilon(1e-15));
  CHECK(found[1] == doctest::Approx(c[1]).epsilon(1e-15));

  CHECK_THROWS_AS(grid_search(constant, Domain(1, 3), 10), Error);
  try {
    grid_search(constant, Domain(1, 3), 10);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedDimension);
  }
  CHECK_THROWS_AS(grid_search(constant, Domain(1, 1), 1), Error);
}

TEST_CASE("1-d grid search agrees with the weighted median") {
  std::mt19937_64 rng(58);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 21;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = pos(rng) * (g(rng) < 0 ? -1 : 1);
      y[i] = g(rng);
    }
    // minimizer of sum |x_i| |y_i/x_i - w| is the |x|-weighted median of y_i/x_i
    std::vector<std::pair<double, double>> pts;
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      pts.emplace_back(y[i] / x[i], std::fabs(x[i]));
      total += std::fabs(x[i]);
    }
    std::sort(pts.begin(), pts.end());
    double acc = 0, median = 0;
    for (auto [v, wt] : pts) {
      acc += wt;
      if (acc >= total / 2) {
        median = v;
        break;
      }
    }
    const double b = 10.0;
    if (std::fabs(median) > b) continue;
    const Dataset data(1, x, y);
    auto objective = [&](std::span<const double> w) { return empirical_risk(data, w, LossKind::L1); };
    const std::size_t res = 20001;
    const Vector w = grid_search(objective, Domain(b, 1), res);
    const double cell = 2 * b / static_cast<double>(res - 1);
    CHECK(std::fabs(w[0] - median) <= cell + 1e-12);
  }
}
