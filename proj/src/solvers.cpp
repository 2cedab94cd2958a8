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
#include "robustl1/solvers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "robustl1/rng.hpp"

namespace robustl1 {
namespace {

constexpr double kPolishShrink = 0.25;
constexpr std::uint64_t kPoolStream = 0x706f6f6cULL;
constexpr std::uint64_t kElementalStream = 0x656c656dULL;

struct DescentRun {
  Vector best;
  double best_value;
  std::vector<double> trajectory;
};

enum class StepRule { Normalized, Subgradient };

// Projected (sub)gradient descent with step scale / sqrt(t), either along
// g / ||g|| or along g / lipschitz. Tracks the best iterate. A zero gradient
// means the iterate cannot move again, so the run ends there.
template <class ValueAndGradient>
DescentRun descend(ValueAndGradient&& value_and_gradient, const Domain& domain,
                   std::span<const double> start, double scale, int iterations, StepRule rule,
                   double lipschitz, bool record) {
  Vector w(start.begin(), start.end());
  Vector g(w.size());
  double value = value_and_gradient(w, g);
  DescentRun run{w, value, {}};
  if (record) run.trajectory.push_back(value);
  for (int t = 1; t <= iterations; ++t) {
    const double gnorm = norm(g);
    if (gnorm == 0.0) break;
    const double eta = scale / std::sqrt(static_cast<double>(t));
    const double factor = rule == StepRule::Normalized ? eta / gnorm : eta / lipschitz;
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= factor * g[j];
    w = project_to_ball(w, domain);
    value = value_and_gradient(w, g);
    if (record) run.trajectory.push_back(value);
    if (value < run.best_value) {
      run.best_value = value;
      run.best = w;
    }
  }
  return run;
}

// Restarts the schedule from the best point at geometrically smaller scales.
template <class ValueAndGradient>
void polish(DescentRun& run, ValueAndGradient&& value_and_gradient, const Domain& domain,
            double scale, const SolverConfig& config, StepRule rule, double lipschitz) {
  const int round_iterations = std::max(1, config.iterations / 8);
  for (int r = 1; r <= config.polish_rounds; ++r) {
    scale *= kPolishShrink;
    DescentRun refined = descend(value_and_gradient, domain, run.best, scale, round_iterations,
                                 rule, lipschitz, config.record_trajectory);
    run.trajectory.insert(run.trajectory.end(), refined.trajectory.begin(),
                          refined.trajectory.end());
    if (refined.best_value < run.best_value) {
      run.best_value = refined.best_value;
      run.best = std::move(refined.best);
    }
  }
}

double max_input_norm(const Dataset& data) {
  double g = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) g = std::max(g, norm(data.x(i)));
  return g;
}

// Number of d-subsets of n items, saturating at `cap + 1`.
std::size_t subsets_up_to(std::size_t n, std::size_t d, std::size_t cap) {
  if (d > n) return 0;
  double count = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    count = count * static_cast<double>(n - k) / static_cast<double>(k + 1);
    if (count > static_cast<double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(std::llround(count));
}

// Exact fit through the rows in `rows`, projected to the ball; empty when the
// subsystem is singular.
Vector elemental_fit(const Dataset& data, const Domain& domain, std::span<const std::size_t> rows) {
  const std::size_t d = data.dim();
  Eigen::MatrixXd a(d, d);
  Eigen::VectorXd b(d);
  for (std::size_t r = 0; r < d; ++r) {
    const auto x = data.x(rows[r]);
    for (std::size_t c = 0; c < d; ++c) a(r, c) = x[c];
    b(r) = data.y(rows[r]);
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) return {};
  const Eigen::VectorXd w = lu.solve(b);
  if (!w.allFinite()) return {};
  return project_to_ball(std::span<const double>(w.data(), d), domain);
}

// Lowest-objective elemental fit among all d-subsets (lexicographic order) or,
// when there are more than `cap`, among `cap` seeded random subsets.
template <class Value>
Vector best_elemental_start(const Dataset& data, const Domain& domain, Value&& value,
                            std::size_t cap, std::uint64_t seed) {
  const std::size_t n = data.size(), d = data.dim();
  Vector best;
  double best_value = INFINITY;
  auto consider = [&](std::span<const std::size_t> rows) {
    Vector w = elemental_fit(data, domain, rows);
    if (w.empty()) return;
    const double v = value(w);
    if (v < best_value) {
      best_value = v;
      best = std::move(w);
    }
  };
  std::vector<std::size_t> rows(d);
  if (subsets_up_to(n, d, cap) <= cap) {
    for (std::size_t k = 0; k < d; ++k) rows[k] = k;
    while (true) {
      consider(rows);
      std::size_t k = d;
      while (k > 0 && rows[k - 1] == n - d + k - 1) --k;
      if (k == 0) break;
      ++rows[k - 1];
      for (std::size_t j = k; j < d; ++j) rows[j] = rows[j - 1] + 1;
    }
  } else {
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t c = 0; c < cap; ++c) {
      for (std::size_t k = 0; k < d; ++k) {
        do {
          rows[k] = pick(rng);
        } while (std::find(rows.begin(), rows.begin() + k, rows[k]) != rows.begin() + k);
      }
      consider(rows);
    }
  }
  return best;
}

void check_domain(const Dataset& data, const Domain& domain) {
  require(domain.d == data.dim(), "domain dimension does not match dataset");
}

}  // namespace

void SolverConfig::validate() const {
  require(iterations >= 1, "iterations must be at least 1");
  require(restarts >= 1, "restarts must be at least 1");
  require(polish_rounds >= 0, "polish_rounds must be non-negative");
  require(elemental_candidates >= 0, "elemental_candidates must be non-negative");
  if (step_scale) require(*step_scale > 0.0 && std::isfinite(*step_scale), "step_scale must be positive");
}

SolveReport solve_erm_l1(const Dataset& data, const Domain& domain, const SolverConfig& config) {
  check_domain(data, domain);
  config.validate();
  auto value_and_subgradient = [&data](std::span<const double> w, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double r = data.residual(i, w);
      acc += std::fabs(r);
      if (r == 0.0) continue;
      const double s = r > 0.0 ? -1.0 : 1.0;
      const auto x = data.x(i);
      for (std::size_t j = 0; j < x.size(); ++j) g[j] += s * x[j];
    }
    const double n = static_cast<double>(data.size());
    for (double& v : g) v /= n;
    return acc / n;
  };

  const double lipschitz = max_input_norm(data);
  const Vector origin(data.dim(), 0.0);
  const double scale = config.scale_for(domain);
  DescentRun run;
  if (lipschitz == 0.0) {
    // All inputs are zero: every w has the same risk.
    run = {origin, empirical_risk(data, origin, LossKind::L1), {}};
    if (config.record_trajectory) run.trajectory.push_back(run.best_value);
  } else {
    run = descend(value_and_subgradient, domain, origin, scale, config.iterations,
                  StepRule::Subgradient, lipschitz, config.record_trajectory);
    polish(run, value_and_subgradient, domain, scale, config, StepRule::Subgradient, lipschitz);
  }

  SolveReport report;
  report.weights = std::move(run.best);
  report.objective_value = run.best_value;
  report.starts_tried = 1;
  report.best_start_index = 0;
  report.trajectory = std::move(run.trajectory);
  return report;
}

SolveReport solve_truncated_l1(const Dataset& data, const Domain& domain,
                               const TruncatedL1Spec& spec, const SolverConfig& config) {
  check_domain(data, domain);
  config.validate();
  spec.validate();
  auto value_and_gradient = [&](std::span<const double> w, std::span<double> g) {
    return truncated_l1_value_and_gradient(data, w, spec, g);
  };

  std::vector<Vector> starts;
  starts.emplace_back(data.dim(), 0.0);
  if (config.restarts >= 2) {
    SolverConfig warm = config;
    warm.record_trajectory = false;
    starts.push_back(solve_erm_l1(data, domain, warm).weights);
  }
  for (int k = 2; k < config.restarts; ++k) {
    Rng rng(derive_seed(config.seed, {static_cast<std::uint64_t>(k)}));
    starts.push_back(uniform_in_ball(domain, rng));
  }
  if (config.elemental_candidates > 0) {
    Vector elemental = best_elemental_start(
        data, domain, [&](std::span<const double> w) { return truncated_l1_value(data, w, spec); },
        static_cast<std::size_t>(config.elemental_candidates),
        derive_seed(config.seed, {kElementalStream}));
    if (!elemental.empty()) starts.push_back(std::move(elemental));
  }

  const double scale = config.scale_for(domain);
  DescentRun best;
  int best_index = -1;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    DescentRun run = descend(value_and_gradient, domain, starts[k], scale, config.iterations,
                             StepRule::Normalized, 1.0, config.record_trajectory);
    if (best_index < 0 || run.best_value < best.best_value) {
      best = std::move(run);
      best_index = static_cast<int>(k);
    }
  }
  polish(best, value_and_gradient, domain, scale, config, StepRule::Normalized, 1.0);

  SolveReport report;
  report.weights = std::move(best.best);
  report.objective_value = best.best_value;
  report.starts_tried = static_cast<int>(starts.size());
  report.best_start_index = best_index;
  report.saturation_fraction = saturation_fraction(data, report.weights, spec.alpha);
  report.saturation_warning = report.saturation_fraction > 0.5;
  report.trajectory = std::move(best.trajectory);
  return report;
}

double minmax_certificate(const Dataset& data, const Domain& domain, const MinMaxSpec& spec,
                          std::span<const double> w, std::span<const double> u_final,
                          const SolverConfig& config) {
  double worst = minmax_l2_payoff(data, w, u_final, spec);
  const Vector origin(data.dim(), 0.0);
  worst = std::max(worst, minmax_l2_payoff(data, w, origin, spec));
  for (int k = 0; k < config.restarts; ++k) {
    Rng rng(derive_seed(config.seed, {kPoolStream, static_cast<std::uint64_t>(k)}));
    const Vector u = uniform_in_ball(domain, rng);
    worst = std::max(worst, minmax_l2_payoff(data, w, u, spec));
  }
  return worst;
}

MinMaxReport solve_minmax_l2(const Dataset& data, const Domain& domain, const MinMaxSpec& spec,
                             const SolverConfig& config) {
  check_domain(data, domain);
  config.validate();
  spec.validate();

  Vector w(data.dim(), 0.0);
  Vector u(data.dim(), 0.0);
  std::vector<double> trajectory;
  if (config.record_trajectory) trajectory.push_back(minmax_l2_payoff(data, w, u, spec));

  auto run = [&](double scale, int iterations) {
    for (int t = 1; t <= iterations; ++t) {
      const PayoffGradients g = minmax_l2_payoff_gradients(data, w, u, spec);
      const double eta = scale / std::sqrt(static_cast<double>(t));
      const double gw = norm(g.w);
      const double gu = norm(g.u);
      if (gw == 0.0 && gu == 0.0) break;
      if (gw > 0.0) {
        for (std::size_t j = 0; j < w.size(); ++j) w[j] -= eta * g.w[j] / gw;
        w = project_to_ball(w, domain);
      }
      if (gu > 0.0) {
        for (std::size_t j = 0; j < u.size(); ++j) u[j] += eta * g.u[j] / gu;
        u = project_to_ball(u, domain);
      }
      if (config.record_trajectory) trajectory.push_back(minmax_l2_payoff(data, w, u, spec));
    }
  };

  double scale = config.scale_for(domain);
  run(scale, config.iterations);
  for (int r = 1; r <= config.polish_rounds; ++r) {
    scale *= kPolishShrink;
    run(scale, std::max(1, config.iterations / 8));
  }

  MinMaxReport report;
  report.w.objective_value = minmax_certificate(data, domain, spec, w, u, config);
  report.w.starts_tried = 1;
  report.w.best_start_index = 0;
  std::size_t saturated = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double rw = data.residual(i, w);
    const double ru = data.residual(i, u);
    if (spec.alpha * std::fabs(rw * rw - ru * ru) >= 1.0) ++saturated;
  }
  report.w.saturation_fraction = static_cast<double>(saturated) / static_cast<double>(data.size());
  report.w.saturation_warning = report.w.saturation_fraction > 0.5;
  report.w.trajectory = std::move(trajectory);
  report.w.weights = std::move(w);
  report.u = std::move(u);
  return report;
}

Vector fit_least_squares_in_ball(const Dataset& data, const Domain& domain) {
  check_domain(data, domain);
  const auto d = static_cast<Eigen::Index>(data.dim());
  const auto n = static_cast<Eigen::Index>(data.size());
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
      data.features().data(), n, d);
  const Eigen::Map<const Eigen::VectorXd> y(data.responses().data(), n);
  const Eigen::MatrixXd gram = x.transpose() * x / static_cast<double>(n);
  const Eigen::VectorXd moment = x.transpose() * y / static_cast<double>(n);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  const Eigen::VectorXd c = eig.eigenvectors().transpose() * moment;
  const double cutoff = 1e-12 * std::max(1.0, lambda.maxCoeff());

  // Minimum-norm unconstrained solution first.
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(d);
  for (Eigen::Index j = 0; j < d; ++j)
    if (lambda[j] > cutoff) coef[j] = c[j] / lambda[j];

  const double b = domain.radius;
  if (coef.norm() > b) {
    // Find mu > 0 with ||(Lambda + mu)^-1 c|| = B.
    auto length = [&](double mu) { return (c.array() / (lambda.array() + mu)).matrix().norm(); };
    double lo = 0.0;
    double hi = c.norm() / b;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (length(mid) > b ? lo : hi) = mid;
    }
    coef = (c.array() / (lambda.array() + hi)).matrix();
  }
  const Eigen::VectorXd w = eig.eigenvectors() * coef;
  return project_to_ball(std::span<const double>(w.data(), w.size()), domain);
}

SolveReport solve_erm_l2(const Dataset& data, const Domain& domain) {
  SolveReport report;
  report.weights = fit_least_squares_in_ball(data, domain);
  report.objective_value = empirical_risk(data, report.weights, LossKind::L2);
  report.starts_tried = 1;
  return report;
}

}  // namespace robustl1
