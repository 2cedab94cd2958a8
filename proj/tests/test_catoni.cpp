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
#include <numeric>
#include <random>

#include "doctest.h"
#include "robustl1/catoni.hpp"
#include "robustl1/error.hpp"

using namespace robustl1;

namespace {
constexpr TruncationKind kKinds[] = {TruncationKind::SaturatingOdd, TruncationKind::LogQuadratic};

double root_sum(std::span<const double> v, TruncationKind kind, double alpha, double theta) {
  double s = 0.0;
  for (double x : v) s += psi(kind, alpha * (x - theta));
  return s;
}
}  // namespace

TEST_CASE("default_alpha_mean") {
  CHECK(default_alpha_mean(2, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(default_alpha_mean(200, 1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(default_alpha_mean(8, 4) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(default_alpha_mean(8, 0), Error);
  CHECK_THROWS_AS(default_alpha_mean(8, -1), Error);
  CHECK_THROWS_AS(default_alpha_mean(0, 1), Error);
}

TEST_CASE("catoni examples") {
  const std::vector<double> same{2.5, 2.5, 2.5};
  for (TruncationKind kind : kKinds) {
    CHECK(catoni_estimate(same, kind).value == 2.5);
    for (double alpha : {0.01, 1.0, 50.0}) {
      const std::vector<double> pair{-3.0, 3.0};
      CHECK(std::fabs(catoni_estimate(pair, kind, {.alpha = alpha}).value) < 1e-12);
    }
  }
  const std::vector<double> ramp{0, 1, 2, 3, 4};
  CHECK(catoni_estimate(ramp, TruncationKind::SaturatingOdd, {.alpha = 1e-8}).value ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK(catoni_estimate(std::vector<double>{7.0}, TruncationKind::LogQuadratic).value == 7.0);
}

TEST_CASE("catoni errors") {
  CHECK_THROWS_AS(catoni_estimate(std::vector<double>{}, TruncationKind::LogQuadratic), Error);
  CHECK_THROWS_AS(catoni_estimate(std::vector<double>{1, 2}, TruncationKind::LogQuadratic,
                                  {.alpha = -1.0}),
                  Error);
  CHECK_THROWS_AS(catoni_estimate(std::vector<double>{1, NAN}, TruncationKind::LogQuadratic), Error);
}

TEST_CASE("catoni uses the sample variance plug-in") {
  const std::vector<double> v{1, 2, 4, 8};
  const CatoniEstimate e = catoni_estimate(v, TruncationKind::LogQuadratic);
  CHECK(e.variance_plugin);
  const double mean = 3.75;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  CHECK(e.alpha == doctest::Approx(default_alpha_mean(4, ss / 3)).epsilon(1e-14));
  const CatoniEstimate known = catoni_estimate(v, TruncationKind::LogQuadratic, {.variance = 2.0});
  CHECK_FALSE(known.variance_plugin);
  CHECK(known.alpha == doctest::Approx(default_alpha_mean(4, 2.0)).epsilon(1e-14));
}

TEST_CASE("catoni properties on random data") {
  std::mt19937_64 rng(21);
  std::student_t_distribution<double> t(2.5);
  std::uniform_int_distribution<int> size(2, 300);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = size(rng);
    std::vector<double> v(n);
    for (double& x : v) x = t(rng);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double range = *hi - *lo;
    for (TruncationKind kind : kKinds) {
      const double alpha = 0.7;
      const CatoniConfig cfg{.alpha = alpha};
      const CatoniEstimate e = catoni_estimate(v, kind, cfg);
      const double tol = 1e-10 * range;
      CHECK(e.value >= *lo);
      CHECK(e.value <= *hi);
      // residual bounded by n * alpha * (bracket width) since |psi'| <= 1
      CHECK(std::fabs(root_sum(v, kind, alpha, e.value)) <= n * alpha * tol + 1e-9);

      std::vector<double> shifted(v);
      for (double& x : shifted) x += 5.25;
      CHECK(std::fabs(catoni_estimate(shifted, kind, cfg).value - (e.value + 5.25)) <=
            2 * tol + 1e-12);

      std::vector<double> grown(v);
      grown.push_back(e.value + 1.0 + std::fabs(t(rng)));
      CHECK(catoni_estimate(grown, kind, cfg).value >= e.value - 2 * tol);

      const double tiny = 1e-9 / range;
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
      CHECK(std::fabs(catoni_estimate(v, kind, {.alpha = tiny}).value - mean) <= 1e-6 * range);
    }
  }
}

TEST_CASE("catoni plateau returns the midpoint of the root set") {
  // With SaturatingOdd and large alpha, every theta in (1, 9) balances two
  // saturated terms on each side; the root set is (1+1/alpha, 9-1/alpha).
  const std::vector<double> v{0, 1, 9, 10};
  const CatoniEstimate e = catoni_estimate(v, TruncationKind::SaturatingOdd, {.alpha = 100.0});
  CHECK(e.value == doctest::Approx(5.0).epsilon(1e-8));
}
