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
#include <sstream>

#include "doctest.h"
#include "robustl1/data_model.hpp"
#include "robustl1/error.hpp"

using namespace robustl1;

namespace {
Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> g;
  std::vector<double> x(n * d), y(n);
  for (double& v : x) v = g(rng);
  for (double& v : y) v = 3.0 * g(rng);
  return Dataset(d, std::move(x), std::move(y));
}

Dataset permuted(const Dataset& data, std::mt19937_64& rng) {
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<double> x, y;
  for (std::size_t i : order) {
    auto row = data.x(i);
    x.insert(x.end(), row.begin(), row.end());
    y.push_back(data.y(i));
  }
  return Dataset(data.dim(), std::move(x), std::move(y));
}

Dataset duplicated(const Dataset& data) {
  std::vector<double> x(data.features().begin(), data.features().end());
  std::vector<double> y(data.responses().begin(), data.responses().end());
  x.insert(x.end(), data.features().begin(), data.features().end());
  y.insert(y.end(), data.responses().begin(), data.responses().end());
  return Dataset(data.dim(), std::move(x), std::move(y));
}
}  // namespace

TEST_CASE("loss") {
  CHECK(loss(LossKind::L1, 3, 5) == 2);
  CHECK(loss(LossKind::L2, 3, 5) == 4);
  CHECK(loss(LossKind::L1, 1.25, 1.25) == 0);
  CHECK_THROWS_AS(loss(LossKind::L1, NAN, 1), Error);
}

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(Dataset(0, {}, {}), Error);
  CHECK_THROWS_AS(Dataset(1, {}, {}), Error);
  CHECK_THROWS_AS(Dataset(2, {1, 2, 3}, {1, 2}), Error);
  CHECK_THROWS_AS(Dataset(1, {NAN}, {1}), Error);
  CHECK_THROWS_AS(Dataset(1, {1}, {INFINITY}), Error);
  CHECK_THROWS_AS(Domain(0.0, 1), Error);
  CHECK_THROWS_AS(Domain(INFINITY, 1), Error);
  CHECK_THROWS_AS(Domain(1.0, 0), Error);
}

TEST_CASE("empirical risk examples") {
  const Dataset data(1, {1, 1}, {0, 2});
  const Vector w{1};
  CHECK(empirical_risk(data, w, LossKind::L1) == 1);
  CHECK(empirical_risk(data, w, LossKind::L2) == 1);
  CHECK_THROWS_AS(empirical_risk(data, Vector{1, 2}, LossKind::L1), Error);
}

TEST_CASE("empirical risk is permutation and duplication invariant") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const Dataset data = random_dataset(rng, 37, 3);
    const Vector w{0.5, -1.0, 2.0};
    for (LossKind kind : {LossKind::L1, LossKind::L2}) {
      const double base = empirical_risk(data, w, kind);
      CHECK(empirical_risk(permuted(data, rng), w, kind) == doctest::Approx(base).epsilon(1e-13));
      CHECK(empirical_risk(duplicated(data), w, kind) == doctest::Approx(base).epsilon(1e-13));
    }
  }
}

TEST_CASE("empirical L1 risk is convex along segments") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 200; ++rep) {
    const Dataset data = random_dataset(rng, 20, 2);
    const Vector a{g(rng), g(rng)}, b{g(rng), g(rng)};
    const Vector mid{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2};
    const double lhs = empirical_risk(data, mid, LossKind::L1);
    const double rhs =
        0.5 * (empirical_risk(data, a, LossKind::L1) + empirical_risk(data, b, LossKind::L1));
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("project_to_ball") {
  CHECK(project_to_ball(Vector{3, 4}, Domain(10, 2)) == Vector{3, 4});
  const Vector p = project_to_ball(Vector{3, 4}, Domain(1, 2));
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(project_to_ball(Vector{0, 0}, Domain(2, 2)) == Vector{0, 0});

  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0, 5);
  const Domain dom(1.5, 3);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vector w{g(rng), g(rng), g(rng)};
    const Vector once = project_to_ball(w, dom);
    CHECK(norm(once) <= dom.radius * (1 + 1e-15));
    CHECK(norm(once) <= norm(w) * (1 + 1e-15));
    CHECK(project_to_ball(once, dom) == once);
  }
}

TEST_CASE("moment diagnostics") {
  const Dataset unit(2, {1, 0, 1, 0, 1, 0}, {0.5, -2, 3});
  const MomentDiagnostics m = moment_diagnostics(unit, Domain(1, 2));
  CHECK(m.mean_norm == 1);
  CHECK(m.mean_sq_norm == 1);

  const Dataset zeros(1, {0, 0, 0}, {1, -2, 3});
  const MomentDiagnostics z = moment_diagnostics(zeros, Domain(1, 1));
  CHECK(z.mean_norm == 0);
  CHECK(z.mean_sq_norm == 0);
  CHECK(z.sup_l2_risk_plugin == doctest::Approx(2.0 * 14.0 / 3.0).epsilon(1e-14));

  std::mt19937_64 rng(14);
  const Dataset data = random_dataset(rng, 50, 2);
  const MomentDiagnostics a = moment_diagnostics(data, Domain(1, 2));
  const MomentDiagnostics b = moment_diagnostics(duplicated(data), Domain(1, 2));
  CHECK(b.mean_norm == doctest::Approx(a.mean_norm).epsilon(1e-13));
  CHECK(b.mean_sq_norm == doctest::Approx(a.mean_sq_norm).epsilon(1e-13));
  CHECK(b.sup_l2_risk_plugin == doctest::Approx(a.sup_l2_risk_plugin).epsilon(1e-9));
}

TEST_CASE("csv round trip") {
  std::mt19937_64 rng(15);
  const Dataset data = random_dataset(rng, 25, 3);
  std::stringstream buffer;
  write_csv(buffer, data);
  const Dataset back = read_csv(buffer, false);
  CHECK(back.dim() == 3);
  CHECK(back.size() == 25);
  CHECK(std::equal(back.features().begin(), back.features().end(), data.features().begin()));
  CHECK(std::equal(back.responses().begin(), back.responses().end(), data.responses().begin()));
}

TEST_CASE("csv parsing") {
  std::istringstream with_header("x1,x2,y\n1,2,3\n4,5,6\n");
  const Dataset d = read_csv(with_header, true);
  CHECK(d.dim() == 2);
  CHECK(d.size() == 2);
  CHECK(d.y(1) == 6);

  std::istringstream ragged("1,2,3\n4,5\n");
  CHECK_THROWS_AS(read_csv(ragged, false), Error);
  std::istringstream bad("1,abc,3\n");
  try {
    read_csv(bad, false);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
  }
  std::istringstream empty("");
  CHECK_THROWS_AS(read_csv(empty, false), Error);
  std::istringstream one_column("1\n2\n");
  CHECK_THROWS_AS(read_csv(one_column, false), Error);
  CHECK_THROWS_AS(read_csv_file("/nonexistent/file.csv", false), Error);
}

TEST_CASE("read_values") {
  std::istringstream plain("1\n2.5\n-3\n");
  CHECK(read_values(plain) == std::vector<double>{1, 2.5, -3});
  std::istringstream header("value\n4\n");
  CHECK(read_values(header) == std::vector<double>{4});
  std::istringstream broken("1\nx\n");
  CHECK_THROWS_AS(read_values(broken), Error);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345678.9}) CHECK(std::stod(format_double(v)) == v);
}
