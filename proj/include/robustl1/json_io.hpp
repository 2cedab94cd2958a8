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

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "robustl1/experiments.hpp"
#include "robustl1/solvers.hpp"
#include "robustl1/synth.hpp"

namespace robustl1 {

using Json = nlohmann::ordered_json;

// Schema violations throw Error(ErrorCode::Parse) naming the offending field.
Json task_to_json(const TaskSpec& task);
TaskSpec task_from_json(const Json& j);

Json experiment_spec_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_spec_from_json(const Json& j);
ExperimentSpec read_experiment_spec(const std::string& path);

Json trials_to_json(std::span<const TrialResult> results);
std::vector<TrialResult> trials_from_json(const Json& j);

Json scaling_to_json(const ScalingResult& scaling);

Json solve_report_to_json(const SolveReport& report);

}  // namespace robustl1
