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
#include "robustl1/robustl1.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "robustl1/catoni.hpp"
#include "robustl1/error.hpp"
#include "robustl1/experiments.hpp"
#include "robustl1/json_io.hpp"
#include "robustl1/solvers.hpp"
#include "robustl1/truncation.hpp"
#include "robustl1/tuning.hpp"

struct rl1_dataset {
  robustl1::Dataset data;
};

struct rl1_report {
  robustl1::SolveReport report;
  std::string estimator;
  std::optional<robustl1::Vector> u;
  std::optional<double> alpha;
  double seconds;
  std::size_t n;
};

struct rl1_experiment {
  robustl1::ExperimentSpec spec;
};

namespace {

thread_local std::string last_error;

rl1_status to_status(robustl1::ErrorCode code) {
  switch (code) {
    case robustl1::ErrorCode::InvalidArgument: return RL1_INVALID_ARGUMENT;
    case robustl1::ErrorCode::UnsupportedDimension:
    case robustl1::ErrorCode::UnsupportedMethod: return RL1_UNSUPPORTED;
    case robustl1::ErrorCode::Io: return RL1_IO_ERROR;
    case robustl1::ErrorCode::Parse: return RL1_PARSE_ERROR;
    case robustl1::ErrorCode::Internal: return RL1_INTERNAL_ERROR;
  }
  return RL1_INTERNAL_ERROR;
}

template <class F>
rl1_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return RL1_OK;
  } catch (const robustl1::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RL1_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RL1_INTERNAL_ERROR;
  }
}

void require_out(const void* p, const char* name) {
  if (p == nullptr) robustl1::throw_invalid(std::string(name) + " must not be null");
}

robustl1::TruncationKind to_kind(rl1_truncation kind) {
  switch (kind) {
    case RL1_SATURATING: return robustl1::TruncationKind::SaturatingOdd;
    case RL1_LOGQUAD: return robustl1::TruncationKind::LogQuadratic;
  }
  robustl1::throw_invalid("unknown truncation kind");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const char* estimator_name(rl1_estimator e) {
  switch (e) {
    case RL1_TRUNC_L1: return "trunc-l1";
    case RL1_ERM_L1: return "erm-l1";
    case RL1_MINMAX_L2: return "minmax-l2";
    case RL1_ERM_L2: return "erm-l2";
  }
  robustl1::throw_invalid("unknown estimator");
}

}  // namespace

extern "C" {

uint32_t rl1_abi_version(void) { return RL1_ABI_VERSION; }

const char* rl1_last_error(void) { return last_error.c_str(); }

void rl1_string_free(char* s) { std::free(s); }

void rl1_doubles_free(double* values) { std::free(values); }

rl1_status rl1_psi(rl1_truncation kind, double x, double* out) {
  return guarded([&] {
    require_out(out, "out");
    *out = robustl1::psi(to_kind(kind), x);
  });
}

rl1_status rl1_psi_derivative(rl1_truncation kind, double x, double* out) {
  return guarded([&] {
    require_out(out, "out");
    *out = robustl1::psi_derivative(to_kind(kind), x);
  });
}

rl1_status rl1_psi_envelope(double x, double* lower, double* upper) {
  return guarded([&] {
    require_out(lower, "lower");
    require_out(upper, "upper");
    const auto env = robustl1::psi_envelope(x);
    *lower = env.lower;
    *upper = env.upper;
  });
}

rl1_status rl1_check_psi(rl1_truncation kind, size_t grid_points, double range, rl1_psi_check* out) {
  return guarded([&] {
    require_out(out, "out");
    const auto r = robustl1::check_psi(to_kind(kind), grid_points, range);
    *out = {r.envelope_ok ? 1 : 0, r.monotone_ok ? 1 : 0, r.odd_ok ? 1 : 0, r.worst_envelope_slack};
  });
}

rl1_status rl1_catoni_estimate(const double* values, size_t n, rl1_truncation kind, double alpha,
                               rl1_catoni_result* out) {
  return guarded([&] {
    require_out(out, "out");
    robustl1::require(values != nullptr || n == 0, "values must not be null");
    const std::span<const double> data(values, n);
    robustl1::CatoniConfig config;
    if (alpha > 0.0) config.alpha = alpha;
    const auto est = robustl1::catoni_estimate(data, to_kind(kind), config);
    double mean = 0.0;
    for (double v : data) mean += v;
    *out = {est.value, mean / static_cast<double>(n), est.alpha, est.variance_plugin ? 1 : 0};
  });
}

rl1_status rl1_parse_values(const char* text, double** values, size_t* n) {
  return guarded([&] {
    require_out(text, "text");
    require_out(values, "values");
    require_out(n, "n");
    std::istringstream in{std::string(text)};
    const auto parsed = robustl1::read_values(in);
    auto* buffer = static_cast<double*>(std::malloc(parsed.size() * sizeof(double)));
    if (buffer == nullptr) throw std::bad_alloc();
    std::memcpy(buffer, parsed.data(), parsed.size() * sizeof(double));
    *values = buffer;
    *n = parsed.size();
  });
}

rl1_status rl1_dataset_create(const double* features, const double* responses, size_t n, size_t d,
                              rl1_dataset** out) {
  return guarded([&] {
    require_out(out, "out");
    *out = nullptr;
    robustl1::require(n >= 1 && d >= 1, "dataset needs n >= 1 and d >= 1");
    require_out(features, "features");
    require_out(responses, "responses");
    *out = new rl1_dataset{robustl1::Dataset(d, std::vector<double>(features, features + n * d),
                                             std::vector<double>(responses, responses + n))};
  });
}

rl1_status rl1_dataset_load_csv(const char* path, int has_header, rl1_dataset** out) {
  return guarded([&] {
    require_out(path, "path");
    require_out(out, "out");
    *out = nullptr;
    *out = new rl1_dataset{robustl1::read_csv_file(path, has_header != 0)};
  });
}

void rl1_dataset_free(rl1_dataset* dataset) { delete dataset; }

size_t rl1_dataset_size(const rl1_dataset* dataset) { return dataset ? dataset->data.size() : 0; }

size_t rl1_dataset_dim(const rl1_dataset* dataset) { return dataset ? dataset->data.dim() : 0; }

void rl1_fit_options_init(rl1_fit_options* options) {
  if (options == nullptr) return;
  options->estimator = RL1_TRUNC_L1;
  options->radius = 1.0;
  options->alpha = 0.0;
  options->delta = 0.05;
  options->kind = RL1_LOGQUAD;
  options->lambda = 0.0;
  options->seed = 0;
  options->iterations = 2000;
  options->restarts = 16;
}

rl1_status rl1_fit(const rl1_dataset* dataset, const rl1_fit_options* options, rl1_report** out) {
  return guarded([&] {
    require_out(dataset, "dataset");
    require_out(options, "options");
    require_out(out, "out");
    *out = nullptr;
    const robustl1::Dataset& data = dataset->data;
    const robustl1::Domain domain(options->radius, data.dim());
    robustl1::SolverConfig config;
    config.iterations = options->iterations;
    config.restarts = options->restarts;
    config.seed = options->seed;

    auto result = std::make_unique<rl1_report>();
    result->estimator = estimator_name(options->estimator);
    result->n = data.size();
    const bool uses_alpha = options->estimator == RL1_TRUNC_L1 || options->estimator == RL1_MINMAX_L2;
    if (uses_alpha) {
      if (options->alpha > 0.0) {
        result->alpha = options->alpha;
      } else {
        robustl1::BoundInputs inputs{
            .n = data.size(), .d = data.dim(), .radius = options->radius, .delta = options->delta};
        result->alpha = robustl1::default_alpha_regression(inputs);
      }
    }

    const auto start = std::chrono::steady_clock::now();
    switch (options->estimator) {
      case RL1_TRUNC_L1:
        result->report = robustl1::solve_truncated_l1(data, domain, {*result->alpha, to_kind(options->kind)}, config);
        break;
      case RL1_ERM_L1:
        result->report = robustl1::solve_erm_l1(data, domain, config);
        break;
      case RL1_MINMAX_L2: {
        robustl1::MinMaxSpec spec;
        spec.lambda = options->lambda;
        spec.alpha = *result->alpha;
        auto mm = robustl1::solve_minmax_l2(data, domain, spec, config);
        result->report = std::move(mm.w);
        result->u = std::move(mm.u);
        break;
      }
      case RL1_ERM_L2:
        result->report = robustl1::solve_erm_l2(data, domain);
        break;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    result->seconds = elapsed.count();
    *out = result.release();
  });
}

void rl1_report_free(rl1_report* report) { delete report; }

double rl1_report_objective(const rl1_report* report) {
  return report ? report->report.objective_value : 0.0;
}

size_t rl1_report_weights(const rl1_report* report, double* weights, size_t capacity) {
  if (report == nullptr) return 0;
  const auto& w = report->report.weights;
  if (weights != nullptr)
    for (size_t j = 0; j < w.size() && j < capacity; ++j) weights[j] = w[j];
  return w.size();
}

rl1_status rl1_report_json(const rl1_report* report, char** json) {
  return guarded([&] {
    require_out(report, "report");
    require_out(json, "json");
    robustl1::Json j = {{"estimator", report->estimator}, {"n", report->n}};
    const robustl1::Json body = robustl1::solve_report_to_json(report->report);
    for (const auto& item : body.items()) j[item.key()] = item.value();
    j["alpha"] = report->alpha ? robustl1::Json(*report->alpha) : robustl1::Json(nullptr);
    if (report->u) j["u"] = *report->u;
    j["seconds"] = report->seconds;
    *json = copy_string(j.dump(2));
  });
}

rl1_status rl1_bounds(const rl1_bound_inputs* inputs, rl1_bound_result* out) {
  return guarded([&] {
    require_out(inputs, "inputs");
    require_out(out, "out");
    robustl1::BoundInputs in{.n = inputs->n, .d = inputs->d, .radius = inputs->radius, .delta = inputs->delta};
    if (inputs->epsilon > 0.0) in.epsilon = inputs->epsilon;
    in.mean_norm = inputs->mean_norm;
    in.mean_sq_norm = inputs->mean_sq_norm;
    in.sup_l2_risk = inputs->sup_l2_risk;
    in.validate();
    out->alpha = robustl1::default_alpha_regression(in);
    out->epsilon = in.net_radius();
    out->log_covering = robustl1::log_covering_ball(in.d, in.radius, out->epsilon);
    out->theorem1_bound = robustl1::theorem1_bound(in);
  });
}

rl1_status rl1_erm_bound(double radius, double max_input_norm, size_t n, double delta, double* out) {
  return guarded([&] {
    require_out(out, "out");
    *out = robustl1::erm_bound(radius, max_input_norm, n, delta);
  });
}

rl1_status rl1_experiment_load(const char* spec_path, rl1_experiment** out) {
  return guarded([&] {
    require_out(spec_path, "spec_path");
    require_out(out, "out");
    *out = nullptr;
    *out = new rl1_experiment{robustl1::read_experiment_spec(spec_path)};
  });
}

void rl1_experiment_free(rl1_experiment* experiment) { delete experiment; }

rl1_status rl1_experiment_run(const rl1_experiment* experiment, rl1_experiment_mode mode,
                              const char* out_dir, unsigned jobs) {
  return guarded([&] {
    require_out(experiment, "experiment");
    require_out(out_dir, "out_dir");
    robustl1::ExperimentMode m;
    switch (mode) {
      case RL1_MODE_SCALING: m = robustl1::ExperimentMode::Scaling; break;
      case RL1_MODE_COVERAGE: m = robustl1::ExperimentMode::Coverage; break;
      case RL1_MODE_COMPARE: m = robustl1::ExperimentMode::Compare; break;
      default: robustl1::throw_invalid("unknown experiment mode");
    }
    robustl1::run_experiment_to_dir(experiment->spec, m, out_dir, jobs);
  });
}

}  // extern "C"
