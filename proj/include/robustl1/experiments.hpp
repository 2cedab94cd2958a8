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
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robustl1/solvers.hpp"
#include "robustl1/synth.hpp"
#include "robustl1/truncation.hpp"

namespace robustl1 {

struct EstimatorSpec {
  enum class Type { TruncatedL1, ErmL1, MinMaxL2, ErmL2 };
  enum class AlphaMode { Corollary1, Fixed };

  Type type = Type::TruncatedL1;
  TruncationKind kind = TruncationKind::LogQuadratic;
  AlphaMode alpha_mode = AlphaMode::Corollary1;
  double alpha = 0.0;   // used when alpha_mode is Fixed
  double lambda = 0.0;  // MinMaxL2 only
  std::string id;       // derived from the fields when empty

  std::string resolved_id() const;
  bool uses_alpha() const { return type == Type::TruncatedL1 || type == Type::MinMaxL2; }
};

struct ExperimentSpec {
  TaskSpec task;
  std::vector<EstimatorSpec> estimators;
  std::vector<std::size_t> n_grid;
  int trials = 1;
  double delta = 0.05;
  std::uint64_t base_seed = 0;
  RiskMethod risk_method;  // the seed field is ignored; trials derive their own
  SolverConfig solver;     // the seed field is ignored; trials derive their own
  /// Wall time is non-deterministic, so it is only recorded on request.
  bool record_timing = false;

  void validate() const;
};

struct TrialResult {
  std::string estimator;
  std::size_t n = 0;
  int trial = 0;
  Vector weights;
  double excess_risk = 0.0;
  std::optional<double> excess_std_error;
  std::optional<double> alpha_used;
  std::optional<double> bound_value;
  std::optional<double> wall_time;
};

bool operator==(const TrialResult& a, const TrialResult& b);

/// Seeds used for trial (n, t). Distinct per (n, t), independent of scheduling.
struct TrialSeeds {
  std::uint64_t data;
  std::uint64_t solver;
  std::uint64_t risk;
};
TrialSeeds trial_seeds(std::uint64_t base_seed, std::size_t n, int trial);

/// Runs every (n, trial) cell on `jobs` worker threads. The output is sorted
/// by (estimator, n, trial) and does not depend on `jobs`.
std::vector<TrialResult> run_trials(const ExperimentSpec& spec, unsigned jobs = 1);

struct LogLogFit {
  double slope;
  double stderr_slope;
  std::size_t points_used;
  std::size_t points_dropped;
};

/// OLS of log(value) on log(n). Non-positive values are dropped (and
/// counted); fewer than two survivors is an error.
LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

struct ScalingCell {
  std::string estimator;
  std::size_t n;
  std::size_t trials;
  double median;
  double p05;
  double p95;
  /// Median MC standard error of the cell, when risks are Monte Carlo.
  std::optional<double> median_std_error;
};

struct ScalingSlope {
  std::string estimator;
  double slope;
  double stderr_slope;
  std::size_t points_used;
  /// Cells whose median was non-positive and got replaced by the MC error.
  std::size_t clamped_points;
};

struct ScalingResult {
  std::vector<ScalingCell> cells;
  std::vector<ScalingSlope> slopes;  // only for estimators with >= 4 grid points
};

ScalingResult summarize_scaling(std::span<const TrialResult> results);

/// Linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> values, double q);

enum class BoundSource { Theorem1, Theorem2 };

struct Coverage {
  double coverage;
  double required;
};

/// Fraction of results with excess_risk <= bound_value; required is
/// 1 - 2 delta (Theorem1) or 1 - delta (Theorem2).
Coverage coverage_check(std::span<const TrialResult> results, BoundSource source, double delta);

/// CSV columns: estimator,n,trial,excess_risk,alpha,bound,seconds
void write_trials_csv(std::ostream& out, std::span<const TrialResult> results);

enum class ExperimentMode { Scaling, Coverage, Compare };
ExperimentMode parse_experiment_mode(std::string_view text);

/// Runs the spec and writes results.csv and summary.json into `out_dir`.
void run_experiment_to_dir(const ExperimentSpec& spec, ExperimentMode mode,
                           const std::string& out_dir, unsigned jobs);

}  // namespace robustl1
