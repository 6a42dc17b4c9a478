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

#ifndef SCENARIO_FORGE__REPORT_HPP_
#define SCENARIO_FORGE__REPORT_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenario_forge/simulate.hpp"

namespace scenario_forge
{

struct KpiSummary
{
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;

  bool operator==(const KpiSummary &) const = default;
};

/// Statistics over one group of results (a class, a fault kind, or all).
struct GroupSummary
{
  std::size_t scenarios = 0;
  std::size_t failures = 0;
  /// Per failed criterion (collision, ttc, speed, decel).
  std::map<std::string, std::size_t> criterion_failures;
  /// Sum w_i fail_i / sum w_i.
  double weighted_failure = 0.0;
  /// min_ttc, min_distance, max_decel.
  std::map<std::string, KpiSummary> kpis;

  bool operator==(const GroupSummary &) const = default;
};

struct SafetyReport
{
  GroupSummary pooled;
  std::map<std::string, GroupSummary> per_class;
  /// Keyed by variant ("nominal" or fault kind).
  std::map<std::string, GroupSummary> per_variant;
  /// Empty when there is nothing to judge.
  std::optional<bool> pass;
  std::vector<std::string> failed_scenarios;
  /// Assessor-authored free text; the tool never writes it.
  std::string judgment;
  /// Echo of the configuration the results were produced with.
  std::optional<SimConfig> config;

  bool operator==(const SafetyReport &) const = default;
};

/// Throws IdMismatch unless results and batch carry the same scenario ids.
SafetyReport aggregate(std::span<const SimulationResult> results,
                       std::span<const TestScenario> batch);

enum class ReportFormat { Json, Text };

std::string render(const SafetyReport & report, ReportFormat format);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__REPORT_HPP_
