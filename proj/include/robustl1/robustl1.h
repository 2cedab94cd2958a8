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
#ifndef ROBUSTL1_ROBUSTL1_H_
#define ROBUSTL1_ROBUSTL1_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RL1_API __declspec(dllexport)
#else
#define RL1_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define RL1_ABI_VERSION 1u

typedef enum rl1_status {
  RL1_OK = 0,
  RL1_INVALID_ARGUMENT = 1,
  RL1_UNSUPPORTED = 2,
  RL1_IO_ERROR = 3,
  RL1_PARSE_ERROR = 4,
  RL1_INTERNAL_ERROR = 5
} rl1_status;

typedef enum rl1_truncation { RL1_SATURATING = 0, RL1_LOGQUAD = 1 } rl1_truncation;

typedef enum rl1_estimator {
  RL1_TRUNC_L1 = 0,
  RL1_ERM_L1 = 1,
  RL1_MINMAX_L2 = 2,
  RL1_ERM_L2 = 3
} rl1_estimator;

typedef enum rl1_experiment_mode {
  RL1_MODE_SCALING = 0,
  RL1_MODE_COVERAGE = 1,
  RL1_MODE_COMPARE = 2
} rl1_experiment_mode;

typedef struct rl1_dataset rl1_dataset;
typedef struct rl1_report rl1_report;
typedef struct rl1_experiment rl1_experiment;

RL1_API uint32_t rl1_abi_version(void);

/* Message for the last failing call on this thread ("" if none). */
RL1_API const char* rl1_last_error(void);

/* Strings returned through `char**` out-parameters are owned by the caller. */
RL1_API void rl1_string_free(char* s);
RL1_API void rl1_doubles_free(double* values);

/* --- truncation --------------------------------------------------------- */

RL1_API rl1_status rl1_psi(rl1_truncation kind, double x, double* out);
RL1_API rl1_status rl1_psi_derivative(rl1_truncation kind, double x, double* out);
RL1_API rl1_status rl1_psi_envelope(double x, double* lower, double* upper);

typedef struct rl1_psi_check {
  int envelope_ok;
  int monotone_ok;
  int odd_ok;
  double worst_envelope_slack;
} rl1_psi_check;

RL1_API rl1_status rl1_check_psi(rl1_truncation kind, size_t grid_points, double range,
                                 rl1_psi_check* out);

/* --- Catoni mean -------------------------------------------------------- */

typedef struct rl1_catoni_result {
  double estimate;
  double sample_mean;
  double alpha;
  int variance_plugin; /* 1 when alpha came from the sample variance */
} rl1_catoni_result;

/* alpha <= 0 selects sqrt(2 / (n nu)) with the sample variance as nu. */
RL1_API rl1_status rl1_catoni_estimate(const double* values, size_t n, rl1_truncation kind,
                                       double alpha, rl1_catoni_result* out);

/* Parses one numeric column (optional header line). */
RL1_API rl1_status rl1_parse_values(const char* text, double** values, size_t* n);

/* --- datasets ----------------------------------------------------------- */

/* features: n x d, row-major. */
RL1_API rl1_status rl1_dataset_create(const double* features, const double* responses, size_t n,
                                      size_t d, rl1_dataset** out);
RL1_API rl1_status rl1_dataset_load_csv(const char* path, int has_header, rl1_dataset** out);
RL1_API void rl1_dataset_free(rl1_dataset* dataset);
RL1_API size_t rl1_dataset_size(const rl1_dataset* dataset);
RL1_API size_t rl1_dataset_dim(const rl1_dataset* dataset);

/* --- fitting ------------------------------------------------------------ */

typedef struct rl1_fit_options {
  rl1_estimator estimator;
  double radius;          /* B */
  double alpha;           /* <= 0: derived from n, d, B, delta with eps = 1/n */
  double delta;           /* used for the automatic alpha */
  rl1_truncation kind;    /* TruncatedL1 only */
  double lambda;          /* MinMaxL2 only */
  uint64_t seed;
  int iterations;
  int restarts;
} rl1_fit_options;

RL1_API void rl1_fit_options_init(rl1_fit_options* options);

RL1_API rl1_status rl1_fit(const rl1_dataset* dataset, const rl1_fit_options* options,
                           rl1_report** out);
RL1_API void rl1_report_free(rl1_report* report);
RL1_API double rl1_report_objective(const rl1_report* report);
/* Copies up to `capacity` weights; returns the dimension. */
RL1_API size_t rl1_report_weights(const rl1_report* report, double* weights, size_t capacity);
/* JSON with weights, objective, alpha, saturation fraction and wall time. */
RL1_API rl1_status rl1_report_json(const rl1_report* report, char** json);

/* --- bounds ------------------------------------------------------------- */

typedef struct rl1_bound_inputs {
  size_t n;
  size_t d;
  double radius;       /* B */
  double delta;        /* in (0, 1/2) */
  double epsilon;      /* <= 0 selects 1/n */
  double mean_norm;
  double mean_sq_norm;
  double sup_l2_risk;
} rl1_bound_inputs;

typedef struct rl1_bound_result {
  double alpha;
  double log_covering;
  double epsilon;
  double theorem1_bound;
} rl1_bound_result;

RL1_API rl1_status rl1_bounds(const rl1_bound_inputs* inputs, rl1_bound_result* out);
RL1_API rl1_status rl1_erm_bound(double radius, double max_input_norm, size_t n, double delta,
                                 double* out);

/* --- experiments -------------------------------------------------------- */

/* Schema problems come back as RL1_PARSE_ERROR naming the first bad field. */
RL1_API rl1_status rl1_experiment_load(const char* spec_path, rl1_experiment** out);
RL1_API void rl1_experiment_free(rl1_experiment* experiment);
/* Writes results.csv and summary.json into out_dir. */
RL1_API rl1_status rl1_experiment_run(const rl1_experiment* experiment, rl1_experiment_mode mode,
                                      const char* out_dir, unsigned jobs);

#ifdef __cplusplus
}
#endif

#endif  // ROBUSTL1_ROBUSTL1_H_
