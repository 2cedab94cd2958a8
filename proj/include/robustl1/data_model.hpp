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
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace robustl1 {

using Vector = std::vector<double>;

enum class LossKind { L1, L2 };

/// n samples of (x in R^d, y). Features are stored row-major. Immutable once
/// built; every entry is finite.
class Dataset {
 public:
  Dataset(std::size_t d, std::vector<double> features, std::vector<double> responses);

  std::size_t size() const { return y_.size(); }
  std::size_t dim() const { return d_; }
  std::span<const double> x(std::size_t i) const { return {x_.data() + i * d_, d_}; }
  double y(std::size_t i) const { return y_[i]; }
  std::span<const double> features() const { return x_; }
  std::span<const double> responses() const { return y_; }

  /// Residual y_i - x_i^T w.
  double residual(std::size_t i, std::span<const double> w) const;

 private:
  std::size_t d_;
  std::vector<double> x_;
  std::vector<double> y_;
};

/// Euclidean ball of radius `radius` in R^d.
struct Domain {
  double radius;
  std::size_t d;

  Domain(double radius, std::size_t d);
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);

double loss(LossKind kind, double prediction, double y);

double empirical_risk(const Dataset& data, std::span<const double> w, LossKind kind);

Vector project_to_ball(std::span<const double> w, const Domain& domain);

struct MomentDiagnostics {
  double mean_norm;
  double mean_sq_norm;
  double sup_l2_risk_plugin;
};

/// Empirical plug-ins for E||x||, E||x||^2 and sup_w R_l2 over the ball. The
/// last one is 2 R_l2(w_ls) + 2 (2B)^2 mean||x||^2, with w_ls the constrained
/// least-squares fit.
MomentDiagnostics moment_diagnostics(const Dataset& data, const Domain& domain);

/// CSV: one row per sample, d feature columns then the response.
Dataset read_csv(std::istream& in, bool has_header);
Dataset read_csv_file(const std::string& path, bool has_header);
void write_csv(std::ostream& out, const Dataset& data);

/// Parses a single numeric column (blank lines ignored; a non-numeric first
/// line is treated as a header).
std::vector<double> read_values(std::istream& in);

std::string format_double(double value);

}  // namespace robustl1
