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
#include "robustl1/data_model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "robustl1/error.hpp"
#include "robustl1/solvers.hpp"

namespace robustl1 {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

Dataset::Dataset(std::size_t d, std::vector<double> features, std::vector<double> responses)
    : d_(d), x_(std::move(features)), y_(std::move(responses)) {
  require(d_ >= 1, "dataset dimension must be positive");
  require(!y_.empty(), "dataset must contain at least one sample");
  require(x_.size() == y_.size() * d_, "feature matrix size does not match n*d");
  for (double v : x_) require_finite(v, "feature");
  for (double v : y_) require_finite(v, "response");
}

double Dataset::residual(std::size_t i, std::span<const double> w) const {
  return y_[i] - dot(x(i), w);
}

Domain::Domain(double radius_, std::size_t d_) : radius(radius_), d(d_) {
  require(radius > 0.0 && std::isfinite(radius), "ball radius B must be positive and finite");
  require(d >= 1, "domain dimension must be positive");
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j];
  return acc;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double loss(LossKind kind, double prediction, double y) {
  require_finite(prediction, "prediction");
  require_finite(y, "response");
  const double r = prediction - y;
  return kind == LossKind::L1 ? std::fabs(r) : r * r;
}

double empirical_risk(const Dataset& data, std::span<const double> w, LossKind kind) {
  require(w.size() == data.dim(), "weight dimension does not match dataset");
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = data.residual(i, w);
    acc += kind == LossKind::L1 ? std::fabs(r) : r * r;
  }
  return acc / static_cast<double>(data.size());
}

Vector project_to_ball(std::span<const double> w, const Domain& domain) {
  Vector out(w.begin(), w.end());
  const double length = norm(w);
  if (length > domain.radius) {
    double scale = domain.radius / length;
    for (double& v : out) v *= scale;
    // Rounding can leave the result a few ulps outside; shrink until it is
    // inside so projecting again is a no-op.
    while (norm(out) > domain.radius) {
      scale = std::nextafter(1.0, 0.0);
      for (double& v : out) v *= scale;
    }
  }
  return out;
}

MomentDiagnostics moment_diagnostics(const Dataset& data, const Domain& domain) {
  require(domain.d == data.dim(), "domain dimension does not match dataset");
  double sum_norm = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double sq = dot(data.x(i), data.x(i));
    sum_sq += sq;
    sum_norm += std::sqrt(sq);
  }
  const double n = static_cast<double>(data.size());
  const Vector w_ls = fit_least_squares_in_ball(data, domain);
  const double l2 = empirical_risk(data, w_ls, LossKind::L2);
  const double diameter = 2.0 * domain.radius;
  return {sum_norm / n, sum_sq / n, 2.0 * l2 + 2.0 * diameter * diameter * (sum_sq / n)};
}

Dataset read_csv(std::istream& in, bool has_header) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  std::vector<double> features;
  std::vector<double> responses;
  bool skipped_header = !has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (columns == 0) {
      if (fields.size() < 2)
        throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) +
                                          ": need at least one feature column and a response");
      columns = fields.size();
    } else if (fields.size() != columns) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(columns) + " columns, found " +
                                        std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double value = 0.0;
      if (!parse_number(fields[c], value))
        throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ", column " +
                                          std::to_string(c + 1) + ": not a finite number");
      (c + 1 == columns ? responses : features).push_back(value);
    }
  }
  if (responses.empty()) throw Error(ErrorCode::Parse, "no data rows");
  return Dataset(columns - 1, std::move(features), std::move(responses));
}

Dataset read_csv_file(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return read_csv(in, has_header);
}

void write_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.x(i)) out << format_double(v) << ',';
    out << format_double(data.y(i)) << '\n';
  }
}

std::vector<double> read_values(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    double value = 0.0;
    if (parse_number(text, value)) {
      values.push_back(value);
    } else if (!first) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": not a finite number");
    }
    first = false;
  }
  if (values.empty()) throw Error(ErrorCode::Parse, "no numeric values in input");
  return values;
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw Error(ErrorCode::Internal, "number formatting failed");
  return std::string(buffer, ptr);
}

}  // namespace robustl1
