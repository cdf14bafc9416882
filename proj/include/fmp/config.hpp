/*
 * Copyright 2026 The fmpsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fmp/simulation.hpp"
#include "fmp/synthetic.hpp"

namespace fmp {

// JSON config files. Unknown keys are rejected so typos surface as
// validation errors rather than silently falling back to defaults.

SimulationConfig simulation_config_from_json(const nlohmann::json& j);
nlohmann::json simulation_config_to_json(const SimulationConfig& config);
SimulationConfig load_simulation_config(const std::string& path);

FleetSpec fleet_spec_from_json(const nlohmann::json& j);
nlohmann::json fleet_spec_to_json(const FleetSpec& spec);
FleetSpec load_fleet_spec(const std::string& path);

// One grid point of a sweep: the resolved config plus the axis settings that
// produced it.
struct SweepPoint {
  nlohmann::json settings;
  SimulationConfig config;
};

// Sweep axes: alpha, beta, sigma, lambda, epsilon, rounds. "mode" selects
// "grid" (cartesian product, the default) or "paired" (axes zipped; all
// listed axes must have equal length). An epsilon of null disables DP for
// that point. Every point is validated before anything runs.
std::vector<SweepPoint> expand_sweep(const SimulationConfig& base,
                                     const nlohmann::json& sweep);

nlohmann::json load_json_file(const std::string& path);

}  // namespace fmp
