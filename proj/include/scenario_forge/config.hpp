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

#ifndef SCENARIO_FORGE__CONFIG_HPP_
#define SCENARIO_FORGE__CONFIG_HPP_

#include <filesystem>
#include <string>

#include "scenario_forge/decompose.hpp"
#include "scenario_forge/genscen.hpp"
#include "scenario_forge/ingest.hpp"
#include "scenario_forge/mining.hpp"
#include "scenario_forge/simulate.hpp"

namespace scenario_forge
{

/// Every tunable of the pipeline. Keys missing from a config file keep the
/// built-in defaults; command-line flags override both.
struct PipelineConfig
{
  CleaningPolicy cleaning;
  double resample_dt = 0.1;
  ModeThresholds thresholds;
  double relevance_radius = 100.0;
  double tail_c = 2.0;
  SynthesisOptions synthesis;
  VerificationCriteria verification;
  SimConfig sim;
  /// Free-text assessment copied into the report.
  std::string judgment;
};

PipelineConfig load_config(const std::filesystem::path & path);
PipelineConfig parse_config(std::string_view text);
std::string config_json(const PipelineConfig & config);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__CONFIG_HPP_
