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

#ifndef SCENARIO_FORGE__MINING_HPP_
#define SCENARIO_FORGE__MINING_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenario_forge/decompose.hpp"
#include "scenario_forge/ingest.hpp"
#include "scenario_forge/scenario.hpp"
#include "scenario_forge/taxonomy.hpp"

namespace scenario_forge
{

/// Relative-position condition between ego and target, evaluated at the start
/// or end of the matched activity.
enum class Predicate {
  Any,
  TargetAheadAtStart,
  TargetBehindAtStart,
  TargetAheadAtEnd,
  TargetBehindAtEnd,
  TargetAheadSameLaneAtStart,
  TargetAheadSameLaneAtEnd,
};

std::string_view to_string(Predicate predicate);
Predicate parse_predicate(std::string_view text);

struct PatternElement
{
  /// "ego" or "target".
  std::string role;
  Channel channel = Channel::Longitudinal;
  Mode mode = Mode::Cruising;
  Predicate predicate = Predicate::Any;

  bool operator==(const PatternElement &) const = default;
};

/// Declarative activity pattern. Elements match activities in non-decreasing
/// start order; the whole match must fit in `max_span` seconds.
struct ActivityPattern
{
  std::string name;
  std::vector<PatternElement> elements;
  double max_span = 20.0;
  /// Tags attached to every scenario mined with this pattern.
  TagSet tags;

  bool operator==(const ActivityPattern &) const = default;
};

/// Throws InvalidArgument for empty patterns, non-positive spans or elements
/// whose mode does not belong to their channel.
void validate_pattern(const ActivityPattern & pattern);

/// cut-in, ego-overtake, lead-braking, overtake-of-ego.
std::vector<ActivityPattern> default_patterns();

struct MiningOptions
{
  /// Actors closer than this to the ego at some instant of a scenario are relevant.
  double relevance_radius = 100.0;
  ModeThresholds thresholds;
};

/// One record per accepted pattern match; overlapping matches are resolved by
/// earliest start, then longest span. Records are untagged and carry no id.
std::vector<ScenarioRecord> mine_scenarios(const DrivingLog & log,
                                           const LogDecomposition & decomposition,
                                           std::span<const ActivityPattern> patterns,
                                           const MiningOptions & options = {});

/// Pattern tags plus road/weather tags from log metadata whose key names a
/// registered tree. Throws MutualExclusionViolation.
ScenarioRecord auto_tag(ScenarioRecord record, const DrivingLog & log,
                        std::span<const ActivityPattern> patterns, const Taxonomy & taxonomy);

struct ParamMatrix
{
  std::vector<std::string> fields;
  std::vector<std::vector<double>> rows;

  bool operator==(const ParamMatrix &) const = default;
};

/// Scenario class plus the data needed to fit and to re-synthesize it.
struct ClassModel
{
  ScenarioClass cls;
  /// One matrix per activity slot, in slot order.
  std::vector<ParamMatrix> slot_params;
  /// ego_v, gap, target_v, then the start offset of each slot after the first.
  ParamMatrix context;
  /// Majority ego lane (0 = leftmost) and target lane relative to it.
  int ego_lane = 1;
  int target_lane_offset = 0;
  std::vector<std::string> records;

  bool operator==(const ClassModel &) const = default;
};

/// Throws EmptyInput and HeterogeneousPattern.
ClassModel extract_class(std::span<const ScenarioRecord> records);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__MINING_HPP_
