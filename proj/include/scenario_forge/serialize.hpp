// Copyright 2026 The scenario_forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCENARIO_FORGE__SERIALIZE_HPP_
#define SCENARIO_FORGE__SERIALIZE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "scenario_forge/config.hpp"
#include "scenario_forge/decompose.hpp"
#include "scenario_forge/density.hpp"
#include "scenario_forge/genscen.hpp"
#include "scenario_forge/mining.hpp"
#include "scenario_forge/report.hpp"
#include "scenario_forge/scenario.hpp"
#include "scenario_forge/simulate.hpp"
#include "scenario_forge/taxonomy.hpp"

namespace scenario_forge
{

// Canonical JSON: UTF-8, keys sorted, floats as shortest round-trip decimals,
// infinities as null. Object documents carry the schema version "v": 1.
//
// Instantiated for Taxonomy, TagTree, ScenarioRecord, ScenarioClass,
// LogDecomposition, ParameterDensity, ClassModel, ClassDensities,
// ActivityPattern, RoadNetwork, TestScenario, SimulationResult, KpiReport,
// SimConfig, SensorConfig, ControllerParams, CleaningReport, PipelineConfig.

template <class T>
std::string dump_json(const T & value, bool pretty = true);

/// Throws ParseError on malformed input or a foreign schema version.
template <class T>
T load_json(std::string_view text);

template <class T>
std::string dump_json_array(const std::vector<T> & values, bool pretty = true);

template <class T>
std::vector<T> load_json_array(std::string_view text);

/// Compact canonical form without the version field; the basis of ids.
template <class T>
std::string canonical_json(const T & value);

/// Content hash of the record without its id and tags, so tagging keeps the id.
std::string record_id(const ScenarioRecord & record);

/// Versioned report document; "pass" is true, false or "undetermined".
std::string report_json(const SafetyReport & report);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__SERIALIZE_HPP_
