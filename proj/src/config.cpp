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

#include "scenario_forge/config.hpp"

#include <fstream>
#include <sstream>

#include "scenario_forge/error.hpp"
#include "scenario_forge/serialize.hpp"

namespace scenario_forge
{

PipelineConfig load_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

PipelineConfig parse_config(std::string_view text)
{
  PipelineConfig cfg = load_json<PipelineConfig>(text);
  cfg.thresholds.validate();
  cfg.sim.sensor.validate();
  if (!(cfg.resample_dt > 0.0)) fail(ErrorKind::InvalidArgument, "resample_dt must be positive");
  if (!(cfg.sim.dt > 0.0)) fail(ErrorKind::InvalidArgument, "sim.dt must be positive");
  if (cfg.tail_c < 1.0) fail(ErrorKind::InvalidArgument, "tail_c must be >= 1");
  return cfg;
}

std::string config_json(const PipelineConfig & config)
{
  return dump_json(config);
}

}  // namespace scenario_forge
