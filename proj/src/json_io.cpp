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
#include "robustl1/json_io.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

#include "robustl1/error.hpp"

namespace robustl1 {
namespace {

[[noreturn]] void violation(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Parse, "spec field '" + path + "': " + what);
}

const Json& field(const Json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) violation(path + "." + key, "missing");
  return obj.at(key);
}

void expect_object(const Json& j, const std::string& path,
                   std::initializer_list<const char*> allowed) {
  if (!j.is_object()) violation(path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : j.items())
    if (!keys.count(item.key())) violation(path + "." + item.key(), "unknown field");
}

double number(const Json& obj, const std::string& path, const char* key) {
  const Json& v = field(obj, path, key);
  if (!v.is_number()) violation(path + "." + key, "expected a number");
  return v.get<double>();
}

double number_or(const Json& obj, const std::string& path, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, path, key) : fallback;
}

std::uint64_t unsigned_integer(const Json& obj, const std::string& path, const char* key) {
  const Json& v = field(obj, path, key);
  if (!v.is_number_unsigned())
    violation(path + "." + key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string string_field(const Json& obj, const std::string& path, const char* key) {
  const Json& v = field(obj, path, key);
  if (!v.is_string()) violation(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> read_optional(const Json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return obj.at(key).get<double>();
}

// Runs a validator and re-labels its complaint as a schema violation.
template <class F>
void validated(const std::string& path, F&& check) {
  try {
    check();
  } catch (const Error& e) {
    violation(path, e.what());
  }
}

std::string type_of(const Json& j, const std::string& path) {
  return string_field(j, path, "type");
}

InputDist input_from_json(const Json& j, const std::string& path) {
  const std::string type = type_of(j, path);
  if (type == "GaussianIso") {
    expect_object(j, path, {"type", "sigma_x"});
    return GaussianIso{number_or(j, path, "sigma_x", 1.0)};
  }
  if (type == "ParetoRadial") {
    expect_object(j, path, {"type", "tail", "scale"});
    return ParetoRadial{number(j, path, "tail"), number_or(j, path, "scale", 1.0)};
  }
  if (type == "UniformBall") {
    expect_object(j, path, {"type", "D"});
    return UniformBall{number(j, path, "D")};
  }
  violation(path + ".type", "unknown input distribution '" + type + "'");
}

NoiseDist noise_from_json(const Json& j, const std::string& path) {
  const std::string type = type_of(j, path);
  if (type == "Gaussian") {
    expect_object(j, path, {"type", "sigma"});
    return GaussianNoise{number(j, path, "sigma")};
  }
  if (type == "StudentT") {
    expect_object(j, path, {"type", "dof", "scale"});
    return StudentTNoise{number(j, path, "dof"), number_or(j, path, "scale", 1.0)};
  }
  if (type == "SymmetricPareto") {
    expect_object(j, path, {"type", "tail", "scale"});
    return SymmetricParetoNoise{number(j, path, "tail"), number_or(j, path, "scale", 1.0)};
  }
  if (type == "CenteredLogNormal") {
    expect_object(j, path, {"type", "mu", "sigma_ln"});
    return CenteredLogNormalNoise{number_or(j, path, "mu", 0.0), number(j, path, "sigma_ln")};
  }
  violation(path + ".type", "unknown noise distribution '" + type + "'");
}

Json input_to_json(const InputDist& dist) {
  if (const auto* g = std::get_if<GaussianIso>(&dist)) return {{"type", "GaussianIso"}, {"sigma_x", g->sigma_x}};
  if (const auto* p = std::get_if<ParetoRadial>(&dist))
    return {{"type", "ParetoRadial"}, {"tail", p->tail}, {"scale", p->scale}};
  const auto& u = std::get<UniformBall>(dist);
  return {{"type", "UniformBall"}, {"D", u.radius}};
}

Json noise_to_json(const NoiseDist& dist) {
  if (const auto* g = std::get_if<GaussianNoise>(&dist)) return {{"type", "Gaussian"}, {"sigma", g->sigma}};
  if (const auto* t = std::get_if<StudentTNoise>(&dist))
    return {{"type", "StudentT"}, {"dof", t->dof}, {"scale", t->scale}};
  if (const auto* p = std::get_if<SymmetricParetoNoise>(&dist))
    return {{"type", "SymmetricPareto"}, {"tail", p->tail}, {"scale", p->scale}};
  const auto& l = std::get<CenteredLogNormalNoise>(dist);
  return {{"type", "CenteredLogNormal"}, {"mu", l.mu}, {"sigma_ln", l.sigma_ln}};
}

std::string estimator_type_name(EstimatorSpec::Type type) {
  switch (type) {
    case EstimatorSpec::Type::TruncatedL1: return "TruncatedL1";
    case EstimatorSpec::Type::ErmL1: return "ErmL1";
    case EstimatorSpec::Type::MinMaxL2: return "MinMaxL2";
    case EstimatorSpec::Type::ErmL2: return "ErmL2";
  }
  return "";
}

EstimatorSpec estimator_from_json(const Json& j, const std::string& path) {
  const std::string type = type_of(j, path);
  EstimatorSpec e;
  if (type == "TruncatedL1") {
    expect_object(j, path, {"type", "id", "kind", "alpha_mode", "alpha"});
    e.type = EstimatorSpec::Type::TruncatedL1;
    if (j.contains("kind")) {
      const std::string kind = string_field(j, path, "kind");
      validated(path + ".kind", [&] { e.kind = parse_truncation_kind(kind); });
    }
  } else if (type == "ErmL1") {
    expect_object(j, path, {"type", "id"});
    e.type = EstimatorSpec::Type::ErmL1;
  } else if (type == "MinMaxL2") {
    expect_object(j, path, {"type", "id", "lambda", "alpha_mode", "alpha"});
    e.type = EstimatorSpec::Type::MinMaxL2;
    e.lambda = number_or(j, path, "lambda", 0.0);
    if (e.lambda < 0.0) violation(path + ".lambda", "must be non-negative");
  } else if (type == "ErmL2") {
    expect_object(j, path, {"type", "id"});
    e.type = EstimatorSpec::Type::ErmL2;
  } else {
    violation(path + ".type", "unknown estimator '" + type + "'");
  }
  if (e.uses_alpha()) {
    const std::string mode = j.contains("alpha_mode") ? string_field(j, path, "alpha_mode")
                                                      : (j.contains("alpha") ? "fixed" : "corollary1");
    if (mode == "corollary1") {
      e.alpha_mode = EstimatorSpec::AlphaMode::Corollary1;
    } else if (mode == "fixed") {
      e.alpha_mode = EstimatorSpec::AlphaMode::Fixed;
      e.alpha = number(j, path, "alpha");
      if (!(e.alpha > 0.0)) violation(path + ".alpha", "must be positive");
    } else {
      violation(path + ".alpha_mode", "expected 'corollary1' or 'fixed'");
    }
  }
  if (j.contains("id")) e.id = string_field(j, path, "id");
  return e;
}

Json estimator_to_json(const EstimatorSpec& e) {
  Json j = {{"type", estimator_type_name(e.type)}, {"id", e.resolved_id()}};
  if (e.type == EstimatorSpec::Type::TruncatedL1) j["kind"] = std::string(to_string(e.kind));
  if (e.type == EstimatorSpec::Type::MinMaxL2) j["lambda"] = e.lambda;
  if (e.uses_alpha()) {
    j["alpha_mode"] = e.alpha_mode == EstimatorSpec::AlphaMode::Fixed ? "fixed" : "corollary1";
    if (e.alpha_mode == EstimatorSpec::AlphaMode::Fixed) j["alpha"] = e.alpha;
  }
  return j;
}

}  // namespace

Json task_to_json(const TaskSpec& task) {
  return {{"d", task.d},
          {"w_true", task.w_true},
          {"B", task.radius},
          {"input_dist", input_to_json(task.input)},
          {"noise_dist", noise_to_json(task.noise)}};
}

TaskSpec task_from_json(const Json& j) {
  const std::string path = "task";
  expect_object(j, path, {"d", "w_true", "B", "input_dist", "noise_dist"});
  TaskSpec task;
  task.d = unsigned_integer(j, path, "d");
  const Json& w = field(j, path, "w_true");
  if (!w.is_array()) violation(path + ".w_true", "expected an array of numbers");
  for (const Json& v : w) {
    if (!v.is_number()) violation(path + ".w_true", "expected an array of numbers");
    task.w_true.push_back(v.get<double>());
  }
  task.radius = number(j, path, "B");
  task.input = input_from_json(field(j, path, "input_dist"), path + ".input_dist");
  task.noise = noise_from_json(field(j, path, "noise_dist"), path + ".noise_dist");
  validated(path, [&] { task.validate(); });
  return task;
}

Json experiment_spec_to_json(const ExperimentSpec& spec) {
  Json estimators = Json::array();
  for (const auto& e : spec.estimators) estimators.push_back(estimator_to_json(e));
  Json risk = spec.risk_method.kind == RiskMethod::Kind::Analytic
                  ? Json{{"type", "Analytic"}}
                  : Json{{"type", "MonteCarlo"}, {"m", spec.risk_method.samples}};
  Json solver = {{"iterations", spec.solver.iterations},
                 {"restarts", spec.solver.restarts},
                 {"polish_rounds", spec.solver.polish_rounds},
                 {"elemental_candidates", spec.solver.elemental_candidates}};
  if (spec.solver.step_scale) solver["step_scale"] = *spec.solver.step_scale;
  return {{"task", task_to_json(spec.task)},
          {"estimators", estimators},
          {"n_grid", spec.n_grid},
          {"trials", spec.trials},
          {"delta", spec.delta},
          {"base_seed", spec.base_seed},
          {"risk_method", risk},
          {"solver", solver},
          {"record_timing", spec.record_timing}};
}

ExperimentSpec experiment_spec_from_json(const Json& j) {
  const std::string path = "spec";
  expect_object(j, path,
                {"task", "estimators", "n_grid", "trials", "delta", "base_seed", "risk_method",
                 "solver", "record_timing"});
  ExperimentSpec spec;
  spec.task = task_from_json(field(j, path, "task"));

  const Json& estimators = field(j, path, "estimators");
  if (!estimators.is_array() || estimators.empty())
    violation(path + ".estimators", "expected a non-empty array");
  for (std::size_t k = 0; k < estimators.size(); ++k)
    spec.estimators.push_back(
        estimator_from_json(estimators[k], path + ".estimators[" + std::to_string(k) + "]"));

  const Json& grid = field(j, path, "n_grid");
  if (!grid.is_array() || grid.empty()) violation(path + ".n_grid", "expected a non-empty array");
  for (const Json& v : grid) {
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
      violation(path + ".n_grid", "entries must be positive integers");
    spec.n_grid.push_back(v.get<std::size_t>());
  }
  spec.trials = static_cast<int>(unsigned_integer(j, path, "trials"));
  spec.delta = number_or(j, path, "delta", 0.05);
  spec.base_seed = j.contains("base_seed") ? unsigned_integer(j, path, "base_seed") : 0;

  if (j.contains("risk_method")) {
    const Json& risk = j.at("risk_method");
    const std::string rpath = path + ".risk_method";
    const std::string type = type_of(risk, rpath);
    if (type == "Analytic") {
      expect_object(risk, rpath, {"type"});
      spec.risk_method = RiskMethod::analytic();
    } else if (type == "MonteCarlo") {
      expect_object(risk, rpath, {"type", "m"});
      spec.risk_method = RiskMethod::monte_carlo(
          risk.contains("m") ? unsigned_integer(risk, rpath, "m") : 1'000'000, 0);
    } else {
      violation(rpath + ".type", "expected 'Analytic' or 'MonteCarlo'");
    }
  }
  if (j.contains("solver")) {
    const Json& s = j.at("solver");
    const std::string spath = path + ".solver";
    expect_object(s, spath, {"iterations", "restarts", "step_scale", "polish_rounds", "elemental_candidates"});
    if (s.contains("iterations")) spec.solver.iterations = static_cast<int>(unsigned_integer(s, spath, "iterations"));
    if (s.contains("restarts")) spec.solver.restarts = static_cast<int>(unsigned_integer(s, spath, "restarts"));
    if (s.contains("polish_rounds"))
      spec.solver.polish_rounds = static_cast<int>(unsigned_integer(s, spath, "polish_rounds"));
    if (s.contains("elemental_candidates"))
      spec.solver.elemental_candidates =
          static_cast<int>(unsigned_integer(s, spath, "elemental_candidates"));
    if (s.contains("step_scale")) spec.solver.step_scale = number(s, spath, "step_scale");
  }
  if (j.contains("record_timing")) {
    if (!j.at("record_timing").is_boolean()) violation(path + ".record_timing", "expected a boolean");
    spec.record_timing = j.at("record_timing").get<bool>();
  }
  validated(path, [&] { spec.validate(); });
  return spec;
}

ExperimentSpec read_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, "'" + path + "' is not valid JSON: " + e.what());
  }
  return experiment_spec_from_json(j);
}

Json trials_to_json(std::span<const TrialResult> results) {
  Json out = Json::array();
  for (const auto& r : results) {
    out.push_back({{"estimator", r.estimator},
                   {"n", r.n},
                   {"trial", r.trial},
                   {"weights", r.weights},
                   {"excess_risk", r.excess_risk},
                   {"excess_std_error", optional_number(r.excess_std_error)},
                   {"alpha_used", optional_number(r.alpha_used)},
                   {"bound_value", optional_number(r.bound_value)},
                   {"wall_time", optional_number(r.wall_time)}});
  }
  return out;
}

std::vector<TrialResult> trials_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, "trial results must be a JSON array");
  std::vector<TrialResult> out;
  try {
    for (const Json& item : j) {
      TrialResult r;
      r.estimator = item.at("estimator").get<std::string>();
      r.n = item.at("n").get<std::size_t>();
      r.trial = item.at("trial").get<int>();
      r.weights = item.at("weights").get<Vector>();
      r.excess_risk = item.at("excess_risk").get<double>();
      r.excess_std_error = read_optional(item, "excess_std_error");
      r.alpha_used = read_optional(item, "alpha_used");
      r.bound_value = read_optional(item, "bound_value");
      r.wall_time = read_optional(item, "wall_time");
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed trial record: ") + e.what());
  }
  return out;
}

Json scaling_to_json(const ScalingResult& scaling) {
  Json cells = Json::array();
  for (const auto& c : scaling.cells)
    cells.push_back({{"estimator", c.estimator},
                     {"n", c.n},
                     {"trials", c.trials},
                     {"median", c.median},
                     {"p05", c.p05},
                     {"p95", c.p95},
                     {"median_std_error", optional_number(c.median_std_error)}});
  Json slopes = Json::array();
  for (const auto& s : scaling.slopes)
    slopes.push_back({{"estimator", s.estimator},
                      {"slope", s.slope},
                      {"stderr", s.stderr_slope},
                      {"points_used", s.points_used},
                      {"clamped_points", s.clamped_points}});
  return {{"cells", cells}, {"slopes", slopes}};
}

Json solve_report_to_json(const SolveReport& report) {
  Json j = {{"weights", report.weights},
            {"objective", report.objective_value},
            {"starts_tried", report.starts_tried},
            {"best_start_index", report.best_start_index},
            {"saturation_fraction", report.saturation_fraction},
            {"saturation_warning", report.saturation_warning}};
  if (!report.trajectory.empty()) j["trajectory"] = report.trajectory;
  return j;
}

}  // namespace robustl1
