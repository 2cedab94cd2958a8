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
#include "robustl1/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "robustl1/error.hpp"
#include "robustl1/json_io.hpp"
#include "robustl1/rng.hpp"
#include "robustl1/tuning.hpp"

namespace robustl1 {
namespace {

constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kSolverStream = 2;
constexpr std::uint64_t kRiskStream = 3;

std::string optional_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

struct Fit {
  Vector weights;
  std::optional<double> alpha;
};

Fit fit_estimator(const EstimatorSpec& est, const Dataset& data, const ExperimentSpec& spec,
                  const SolverConfig& solver) {
  const Domain domain = spec.task.domain();
  std::optional<double> alpha;
  if (est.uses_alpha()) {
    if (est.alpha_mode == EstimatorSpec::AlphaMode::Fixed) {
      alpha = est.alpha;
    } else {
      BoundInputs inputs{.n = data.size(), .d = data.dim(), .radius = spec.task.radius, .delta = spec.delta};
      alpha = default_alpha_regression(inputs);
    }
  }
  switch (est.type) {
    case EstimatorSpec::Type::TruncatedL1:
      return {solve_truncated_l1(data, domain, {*alpha, est.kind}, solver).weights, alpha};
    case EstimatorSpec::Type::ErmL1:
      return {solve_erm_l1(data, domain, solver).weights, alpha};
    case EstimatorSpec::Type::MinMaxL2: {
      MinMaxSpec mm;
      mm.lambda = est.lambda;
      mm.alpha = *alpha;
      return {solve_minmax_l2(data, domain, mm, solver).w.weights, alpha};
    }
    case EstimatorSpec::Type::ErmL2:
      return {fit_least_squares_in_ball(data, domain), alpha};
  }
  throw Error(ErrorCode::Internal, "unknown estimator type");
}

std::optional<double> bound_for(const EstimatorSpec& est, const ExperimentSpec& spec, std::size_t n,
                                const std::optional<double>& alpha, const TaskMoments& moments) {
  if (est.type == EstimatorSpec::Type::TruncatedL1) {
    if (!moments.finite()) return std::nullopt;
    BoundInputs inputs{.n = n, .d = spec.task.d, .radius = spec.task.radius, .delta = spec.delta};
    inputs.mean_norm = moments.mean_norm;
    inputs.mean_sq_norm = moments.mean_sq_norm;
    inputs.sup_l2_risk = moments.sup_l2_risk;
    return est.alpha_mode == EstimatorSpec::AlphaMode::Fixed ? theorem1_bound_at_alpha(inputs, *alpha)
                                                             : theorem1_bound(inputs);
  }
  if (est.type == EstimatorSpec::Type::ErmL1 && moments.max_input_norm)
    return erm_bound(spec.task.radius, *moments.max_input_norm, n, spec.delta);
  return std::nullopt;
}

std::vector<TrialResult> run_cell(const ExperimentSpec& spec, std::size_t n, int trial,
                                  const TaskMoments& moments) {
  const TrialSeeds seeds = trial_seeds(spec.base_seed, n, trial);
  const Dataset data = generate(spec.task, n, seeds.data);
  SolverConfig solver = spec.solver;
  solver.seed = seeds.solver;
  RiskMethod risk = spec.risk_method;
  risk.seed = seeds.risk;

  std::vector<TrialResult> out;
  for (const auto& est : spec.estimators) {
    const auto start = std::chrono::steady_clock::now();
    Fit fit = fit_estimator(est, data, spec, solver);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    const RiskEvaluation excess = excess_l1_risk(spec.task, fit.weights, risk);

    TrialResult r;
    r.estimator = est.resolved_id();
    r.n = n;
    r.trial = trial;
    r.weights = std::move(fit.weights);
    r.excess_risk = excess.value;
    r.excess_std_error = excess.std_error;
    r.alpha_used = fit.alpha;
    r.bound_value = bound_for(est, spec, n, fit.alpha, moments);
    if (spec.record_timing) r.wall_time = elapsed.count();
    out.push_back(std::move(r));
  }
  return out;
}

bool result_order(const TrialResult& a, const TrialResult& b) {
  return std::tie(a.estimator, a.n, a.trial) < std::tie(b.estimator, b.n, b.trial);
}

}  // namespace

std::string EstimatorSpec::resolved_id() const {
  if (!id.empty()) return id;
  std::string base;
  switch (type) {
    case Type::TruncatedL1: base = "trunc-l1-" + std::string(to_string(kind)); break;
    case Type::ErmL1: return "erm-l1";
    case Type::ErmL2: return "erm-l2";
    case Type::MinMaxL2: base = "minmax-l2-lambda" + format_double(lambda); break;
  }
  if (alpha_mode == AlphaMode::Fixed) base += "-alpha" + format_double(alpha);
  return base;
}

void ExperimentSpec::validate() const {
  task.validate();
  require(!estimators.empty(), "at least one estimator is required");
  std::set<std::string> ids;
  for (const auto& e : estimators) {
    require(ids.insert(e.resolved_id()).second, "duplicate estimator id '" + e.resolved_id() + "'");
    if (e.uses_alpha() && e.alpha_mode == EstimatorSpec::AlphaMode::Fixed)
      require(e.alpha > 0.0 && std::isfinite(e.alpha), "fixed alpha must be positive");
    require(e.lambda >= 0.0 && std::isfinite(e.lambda), "lambda must be non-negative");
  }
  require(!n_grid.empty(), "n_grid must not be empty");
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    require(n_grid[k] >= 1, "n_grid entries must be positive");
    if (k > 0) require(n_grid[k] > n_grid[k - 1], "n_grid must be strictly increasing");
  }
  require(trials >= 1, "trials must be at least 1");
  require(delta > 0.0 && delta < 0.5, "delta must lie in (0, 1/2)");
  if (risk_method.kind == RiskMethod::Kind::Analytic)
    require(analytic_risk_supported(task),
            "Analytic risk needs GaussianIso inputs and Gaussian noise");
  else
    require(risk_method.samples >= 2, "Monte Carlo risk needs m >= 2");
  solver.validate();
}

bool operator==(const TrialResult& a, const TrialResult& b) {
  return a.estimator == b.estimator && a.n == b.n && a.trial == b.trial && a.weights == b.weights &&
         a.excess_risk == b.excess_risk && a.excess_std_error == b.excess_std_error &&
         a.alpha_used == b.alpha_used && a.bound_value == b.bound_value && a.wall_time == b.wall_time;
}

TrialSeeds trial_seeds(std::uint64_t base_seed, std::size_t n, int trial) {
  const auto nn = static_cast<std::uint64_t>(n);
  const auto tt = static_cast<std::uint64_t>(trial);
  return {derive_seed(base_seed, {kDataStream, nn, tt}),
          derive_seed(base_seed, {kSolverStream, nn, tt}),
          derive_seed(base_seed, {kRiskStream, nn, tt})};
}

std::vector<TrialResult> run_trials(const ExperimentSpec& spec, unsigned jobs) {
  spec.validate();
  const TaskMoments moments = task_moments(spec.task);

  std::vector<std::pair<std::size_t, int>> cells;
  for (std::size_t n : spec.n_grid)
    for (int t = 0; t < spec.trials; ++t) cells.emplace_back(n, t);

  std::vector<std::vector<TrialResult>> per_cell(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      try {
        per_cell[k] = run_cell(spec, cells[k].first, cells[k].second, moments);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cells.size());
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < workers; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<TrialResult> results;
  for (auto& cell : per_cell)
    for (auto& r : cell) results.push_back(std::move(r));
  std::sort(results.begin(), results.end(), result_order);
  return results;
}

LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  std::vector<std::pair<double, double>> logs;
  std::size_t dropped = 0;
  for (const auto& [n, value] : points) {
    require(n > 0.0 && std::isfinite(n), "sample sizes must be positive");
    if (!(value > 0.0) || !std::isfinite(value)) {
      ++dropped;
      continue;
    }
    logs.emplace_back(std::log(n), std::log(value));
  }
  require(logs.size() >= 2, "log-log fit needs at least two positive points");
  const double k = static_cast<double>(logs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [lx, ly] : logs) {
    mx += lx;
    my += ly;
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [lx, ly] : logs) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
  }
  require(sxx > 0.0, "log-log fit needs at least two distinct sample sizes");
  const double slope = sxy / sxx;
  double stderr_slope = 0.0;
  if (logs.size() > 2) {
    double sse = 0.0;
    for (const auto& [lx, ly] : logs) {
      const double fitted = my + slope * (lx - mx);
      sse += (ly - fitted) * (ly - fitted);
    }
    stderr_slope = std::sqrt(sse / (k - 2.0) / sxx);
  }
  return {slope, stderr_slope, logs.size(), dropped};
}

double quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile of an empty sample");
  require(q >= 0.0 && q <= 1.0, "quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

ScalingResult summarize_scaling(std::span<const TrialResult> results) {
  std::map<std::string, std::map<std::size_t, std::vector<const TrialResult*>>> groups;
  for (const auto& r : results) groups[r.estimator][r.n].push_back(&r);

  ScalingResult out;
  for (const auto& [estimator, by_n] : groups) {
    std::vector<std::pair<double, double>> points;
    std::size_t clamped = 0;
    for (const auto& [n, rows] : by_n) {
      std::vector<double> excess;
      std::vector<double> errors;
      for (const auto* r : rows) {
        excess.push_back(r->excess_risk);
        if (r->excess_std_error) errors.push_back(*r->excess_std_error);
      }
      ScalingCell cell{estimator, n, rows.size(), quantile(excess, 0.5), quantile(excess, 0.05),
                       quantile(excess, 0.95), std::nullopt};
      if (!errors.empty()) cell.median_std_error = quantile(errors, 0.5);
      double value = cell.median;
      if (value <= 0.0 && cell.median_std_error && *cell.median_std_error > 0.0) {
        value = *cell.median_std_error;
        ++clamped;
      }
      points.emplace_back(static_cast<double>(n), value);
      out.cells.push_back(cell);
    }
    if (points.size() >= 4) {
      try {
        const LogLogFit fit = fit_loglog_slope(points);
        if (fit.points_used >= 4)
          out.slopes.push_back({estimator, fit.slope, fit.stderr_slope, fit.points_used, clamped});
      } catch (const Error&) {
        // Not enough positive medians; no slope for this estimator.
      }
    }
  }
  return out;
}

Coverage coverage_check(std::span<const TrialResult> results, BoundSource source, double delta) {
  require(!results.empty(), "coverage needs at least one result");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  std::size_t covered = 0;
  for (const auto& r : results) {
    require(r.bound_value.has_value(), "result for '" + r.estimator + "' carries no bound value");
    if (r.excess_risk <= *r.bound_value) ++covered;
  }
  const double required = source == BoundSource::Theorem1 ? 1.0 - 2.0 * delta : 1.0 - delta;
  return {static_cast<double>(covered) / static_cast<double>(results.size()), required};
}

void write_trials_csv(std::ostream& out, std::span<const TrialResult> results) {
  out << "estimator,n,trial,excess_risk,alpha,bound,seconds\n";
  for (const auto& r : results) {
    out << r.estimator << ',' << r.n << ',' << r.trial << ',' << format_double(r.excess_risk) << ','
        << optional_cell(r.alpha_used) << ',' << optional_cell(r.bound_value) << ','
        << optional_cell(r.wall_time) << '\n';
  }
}

ExperimentMode parse_experiment_mode(std::string_view text) {
  if (text == "scaling") return ExperimentMode::Scaling;
  if (text == "coverage") return ExperimentMode::Coverage;
  if (text == "compare") return ExperimentMode::Compare;
  throw_invalid("unknown experiment mode '" + std::string(text) + "'");
}

void run_experiment_to_dir(const ExperimentSpec& spec, ExperimentMode mode,
                           const std::string& out_dir, unsigned jobs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory '" + out_dir + "': " + ec.message());

  const std::vector<TrialResult> results = run_trials(spec, jobs);
  const fs::path csv_path = fs::path(out_dir) / "results.csv";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw Error(ErrorCode::Io, "cannot write '" + csv_path.string() + "'");
    write_trials_csv(csv, results);
    if (!csv) throw Error(ErrorCode::Io, "write failed for '" + csv_path.string() + "'");
  }

  const TaskMoments moments = task_moments(spec.task);
  const ScalingResult scaling = summarize_scaling(results);
  Json summary;
  summary["mode"] = mode == ExperimentMode::Scaling    ? "scaling"
                    : mode == ExperimentMode::Coverage ? "coverage"
                                                       : "compare";
  summary["outside_assumption_scope"] = !moments.finite();
  summary["bound_moments"] = {{"provenance", "task-analytic"},
                              {"mean_norm", moments.mean_norm},
                              {"mean_sq_norm", moments.finite() ? Json(moments.mean_sq_norm) : Json(nullptr)},
                              {"sup_l2_risk", moments.finite() ? Json(moments.sup_l2_risk) : Json(nullptr)}};
  summary["quantiles"] = scaling_to_json(scaling)["cells"];
  if (mode == ExperimentMode::Scaling) summary["slopes"] = scaling_to_json(scaling)["slopes"];
  if (mode == ExperimentMode::Coverage) {
    Json coverage = Json::array();
    for (const auto& est : spec.estimators) {
      const std::string id = est.resolved_id();
      std::vector<TrialResult> rows;
      for (const auto& r : results)
        if (r.estimator == id && r.bound_value) rows.push_back(r);
      if (rows.empty()) continue;
      const BoundSource source =
          est.type == EstimatorSpec::Type::ErmL1 ? BoundSource::Theorem2 : BoundSource::Theorem1;
      for (std::size_t n : spec.n_grid) {
        std::vector<TrialResult> at_n;
        for (const auto& r : rows)
          if (r.n == n) at_n.push_back(r);
        if (at_n.empty()) continue;
        const Coverage c = coverage_check(at_n, source, spec.delta);
        coverage.push_back({{"estimator", id},
                            {"n", n},
                            {"source", source == BoundSource::Theorem1 ? "Theorem1" : "Theorem2"},
                            {"coverage", c.coverage},
                            {"required", c.required},
                            {"trials", at_n.size()}});
      }
    }
    summary["coverage"] = coverage;
  }
  summary["spec"] = experiment_spec_to_json(spec);

  const fs::path summary_path = fs::path(out_dir) / "summary.json";
  std::ofstream out(summary_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + summary_path.string() + "'");
  out << summary.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + summary_path.string() + "'");
}

}  // namespace robustl1
