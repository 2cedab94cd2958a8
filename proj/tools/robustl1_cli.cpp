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
// Command-line front end. Everything goes through the C API in robustl1.h.
// Exit codes: 0 success, 1 runtime or check failure, 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "robustl1/robustl1.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

int fail(const std::string& what) {
  std::cerr << "error: " << what << '\n';
  return kFailure;
}

int usage_error(const std::string& what) {
  std::cerr << "usage error: " << what << '\n';
  return kUsage;
}

std::string api_error() { return rl1_last_error(); }

rl1_truncation truncation_from(const std::string& name) {
  return name == "saturating" ? RL1_SATURATING : RL1_LOGQUAD;
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary);
  out << text << '\n';
  return static_cast<bool>(out);
}

struct CheckPsiArgs {
  std::string kind = "both";
  long long grid_points = 100001;
  double range = 100.0;
};

int run_check_psi(const CheckPsiArgs& args) {
  if (args.grid_points < 2) return usage_error("--grid-points must be at least 2");
  if (!(args.range > 0.0) || !std::isfinite(args.range)) return usage_error("--range must be positive");

  Json report = Json::array();
  bool all_ok = true;
  for (const std::string kind : {"saturating", "logquad"}) {
    if (args.kind != "both" && args.kind != kind) continue;
    rl1_psi_check check{};
    if (rl1_check_psi(truncation_from(kind), static_cast<size_t>(args.grid_points), args.range,
                      &check) != RL1_OK)
      return fail(api_error());
    const auto line = [&](const char* name, int ok) {
      std::cerr << kind << ' ' << name << ": " << (ok ? "pass" : "FAIL") << '\n';
      all_ok = all_ok && ok;
    };
    line("envelope", check.envelope_ok);
    line("monotone", check.monotone_ok);
    line("odd", check.odd_ok);
    report.push_back({{"kind", kind},
                      {"grid_points", args.grid_points},
                      {"range", args.range},
                      {"envelope", check.envelope_ok != 0},
                      {"monotone", check.monotone_ok != 0},
                      {"odd", check.odd_ok != 0},
                      {"worst_envelope_slack", check.worst_envelope_slack}});
  }
  std::cout << report.dump(2) << '\n';
  return all_ok ? kOk : kFailure;
}

struct MeanArgs {
  std::string input;
  bool use_stdin = false;
  std::string kind = "logquad";
  std::optional<double> alpha;
  double delta = 0.05;
};

int run_mean(const MeanArgs& args) {
  if (args.input.empty() == !args.use_stdin) return usage_error("give exactly one of --input or --stdin");
  if (args.alpha && !(*args.alpha > 0.0)) return usage_error("--alpha must be positive");
  std::string text;
  if (args.use_stdin) {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(args.input, std::ios::binary);
    if (!in) return fail("cannot open '" + args.input + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  double* values = nullptr;
  size_t n = 0;
  if (rl1_parse_values(text.c_str(), &values, &n) != RL1_OK) return fail(api_error());
  rl1_catoni_result result{};
  const rl1_status status =
      rl1_catoni_estimate(values, n, truncation_from(args.kind), args.alpha.value_or(0.0), &result);
  rl1_doubles_free(values);
  if (status != RL1_OK) return fail(api_error());

  const Json out = {{"estimate", result.estimate},
                    {"sample_mean", result.sample_mean},
                    {"alpha", result.alpha},
                    {"variance_plugin", result.variance_plugin != 0},
                    {"kind", args.kind},
                    {"n", n},
                    {"delta", args.delta}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

struct FitArgs {
  std::string input;
  bool header = false;
  std::string estimator;
  double radius = 0.0;
  std::string alpha = "auto";
  double delta = 0.05;
  std::string kind = "logquad";
  double lambda = 0.0;
  unsigned long long seed = 0;
  int iterations = 2000;
  int restarts = 16;
  std::string out;
};

int run_fit(const FitArgs& args) {
  rl1_fit_options options;
  rl1_fit_options_init(&options);
  if (args.estimator == "trunc-l1") options.estimator = RL1_TRUNC_L1;
  else if (args.estimator == "erm-l1") options.estimator = RL1_ERM_L1;
  else if (args.estimator == "minmax-l2") options.estimator = RL1_MINMAX_L2;
  else options.estimator = RL1_ERM_L2;
  if (!(args.radius > 0.0)) return usage_error("--B must be positive");
  if (args.alpha != "auto") {
    try {
      std::size_t used = 0;
      options.alpha = std::stod(args.alpha, &used);
      if (used != args.alpha.size() || !(options.alpha > 0.0)) throw std::invalid_argument("alpha");
    } catch (const std::exception&) {
      return usage_error("--alpha must be 'auto' or a positive number");
    }
  }
  if (!(args.delta > 0.0 && args.delta < 0.5)) return usage_error("--delta must lie in (0, 1/2)");
  if (args.iterations < 1 || args.restarts < 1) return usage_error("--iters and --restarts must be positive");
  if (args.lambda < 0.0) return usage_error("--lambda must be non-negative");
  options.radius = args.radius;
  options.delta = args.delta;
  options.kind = truncation_from(args.kind);
  options.lambda = args.lambda;
  options.seed = args.seed;
  options.iterations = args.iterations;
  options.restarts = args.restarts;

  rl1_dataset* dataset = nullptr;
  if (rl1_dataset_load_csv(args.input.c_str(), args.header ? 1 : 0, &dataset) != RL1_OK)
    return fail(api_error());
  rl1_report* report = nullptr;
  const rl1_status status = rl1_fit(dataset, &options, &report);
  rl1_dataset_free(dataset);
  if (status != RL1_OK) return fail(api_error());
  char* json = nullptr;
  const rl1_status json_status = rl1_report_json(report, &json);
  rl1_report_free(report);
  if (json_status != RL1_OK) return fail(api_error());
  const bool written = write_output(args.out, json);
  rl1_string_free(json);
  if (!written) return fail("cannot write '" + args.out + "'");
  std::cerr << "fit: " << args.estimator << " done\n";
  return kOk;
}

struct BoundsArgs {
  long long n = 0;
  long long d = 0;
  double radius = 0.0;
  double delta = 0.05;
  std::optional<double> epsilon;
  double mean_norm = 0.0;
  double mean_sq_norm = 0.0;
  double sup_l2 = 0.0;
  std::optional<double> max_input_norm;
};

int run_bounds(const BoundsArgs& args) {
  if (!(args.delta > 0.0 && args.delta < 0.5)) return usage_error("--delta must lie in (0, 1/2)");
  if (args.n < 1 || args.d < 1) return usage_error("--n and --d must be positive");
  if (!(args.radius > 0.0)) return usage_error("--B must be positive");
  if (args.epsilon && !(*args.epsilon > 0.0)) return usage_error("--epsilon must be positive");
  if (args.mean_norm < 0.0 || args.mean_sq_norm < 0.0 || args.sup_l2 < 0.0)
    return usage_error("moment values must be non-negative");
  if (args.max_input_norm && !(*args.max_input_norm > 0.0)) return usage_error("--D must be positive");

  rl1_bound_inputs in{static_cast<size_t>(args.n), static_cast<size_t>(args.d), args.radius,
                      args.delta, args.epsilon.value_or(0.0), args.mean_norm, args.mean_sq_norm,
                      args.sup_l2};
  rl1_bound_result result{};
  if (rl1_bounds(&in, &result) != RL1_OK) return fail(api_error());
  Json out = {{"alpha", result.alpha},
              {"epsilon", result.epsilon},
              {"log_covering", result.log_covering},
              {"theorem1_bound", result.theorem1_bound},
              {"moment_provenance", "user"}};
  if (args.max_input_norm) {
    double bound = 0.0;
    if (rl1_erm_bound(args.radius, *args.max_input_norm, in.n, args.delta, &bound) != RL1_OK)
      return fail(api_error());
    out["erm_bound"] = bound;
  }
  std::cout << out.dump(2) << '\n';
  return kOk;
}

struct ExperimentArgs {
  std::string spec;
  std::string mode = "scaling";
  std::string out;
  unsigned jobs = 1;
};

int run_experiment(const ExperimentArgs& args) {
  if (args.jobs < 1) return usage_error("--jobs must be at least 1");
  rl1_experiment* experiment = nullptr;
  const rl1_status load = rl1_experiment_load(args.spec.c_str(), &experiment);
  if (load == RL1_PARSE_ERROR || load == RL1_INVALID_ARGUMENT) return usage_error(api_error());
  if (load != RL1_OK) return fail(api_error());
  const rl1_experiment_mode mode = args.mode == "coverage"  ? RL1_MODE_COVERAGE
                                   : args.mode == "compare" ? RL1_MODE_COMPARE
                                                            : RL1_MODE_SCALING;
  const rl1_status status = rl1_experiment_run(experiment, mode, args.out.c_str(), args.jobs);
  rl1_experiment_free(experiment);
  if (status != RL1_OK) return fail(api_error());
  std::cerr << "experiment: wrote " << args.out << "/results.csv and summary.json\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust l1 regression for heavy-tailed data"};
  app.require_subcommand(1);

  CheckPsiArgs psi_args;
  auto* check_psi = app.add_subcommand("check-psi", "Validate the truncation functions on a grid");
  check_psi->add_option("--kind", psi_args.kind)->check(CLI::IsMember({"saturating", "logquad", "both"}));
  check_psi->add_option("--grid-points", psi_args.grid_points);
  check_psi->add_option("--range", psi_args.range);

  MeanArgs mean_args;
  auto* mean = app.add_subcommand("mean", "Catoni robust mean of one numeric column");
  mean->add_option("--input", mean_args.input);
  mean->add_flag("--stdin", mean_args.use_stdin);
  mean->add_option("--kind", mean_args.kind)->check(CLI::IsMember({"saturating", "logquad"}));
  mean->add_option("--alpha", mean_args.alpha);
  mean->add_option("--delta", mean_args.delta);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Fit a linear model over a Euclidean ball");
  fit->add_option("--input", fit_args.input)->required();
  fit->add_flag("--header", fit_args.header, "Skip the first CSV row");
  fit->add_option("--estimator", fit_args.estimator)
      ->required()
      ->check(CLI::IsMember({"trunc-l1", "erm-l1", "minmax-l2", "erm-l2"}));
  fit->add_option("--B", fit_args.radius, "Ball radius")->required();
  fit->add_option("--alpha", fit_args.alpha, "'auto' or a positive value");
  fit->add_option("--delta", fit_args.delta);
  fit->add_option("--kind", fit_args.kind)->check(CLI::IsMember({"saturating", "logquad"}));
  fit->add_option("--lambda", fit_args.lambda);
  fit->add_option("--seed", fit_args.seed);
  fit->add_option("--iters", fit_args.iterations);
  fit->add_option("--restarts", fit_args.restarts);
  fit->add_option("--out", fit_args.out, "Report path (stdout when absent)");

  BoundsArgs bound_args;
  auto* bounds = app.add_subcommand("bounds", "Evaluate alpha and the excess-risk bounds");
  bounds->add_option("--n", bound_args.n)->required();
  bounds->add_option("--d", bound_args.d)->required();
  bounds->add_option("--B", bound_args.radius)->required();
  bounds->add_option("--delta", bound_args.delta);
  bounds->add_option("--epsilon", bound_args.epsilon);
  bounds->add_option("--mean-norm", bound_args.mean_norm);
  bounds->add_option("--mean-sq-norm", bound_args.mean_sq_norm);
  bounds->add_option("--sup-l2", bound_args.sup_l2);
  bounds->add_option("--D", bound_args.max_input_norm, "Input norm bound; adds erm_bound");

  ExperimentArgs exp_args;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment spec");
  experiment->add_option("--spec", exp_args.spec)->required();
  experiment->add_option("--mode", exp_args.mode)->check(CLI::IsMember({"scaling", "coverage", "compare"}));
  experiment->add_option("--out", exp_args.out)->required();
  experiment->add_option("--jobs", exp_args.jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  if (check_psi->parsed()) return run_check_psi(psi_args);
  if (mean->parsed()) return run_mean(mean_args);
  if (fit->parsed()) return run_fit(fit_args);
  if (bounds->parsed()) return run_bounds(bound_args);
  return run_experiment(exp_args);
}
