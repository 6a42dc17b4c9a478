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

#ifndef SCENARIO_FORGE__SCENARIO_HPP_
#define SCENARIO_FORGE__SCENARIO_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scenario_forge/taxonomy.hpp"

namespace scenario_forge
{

using ActorId = std::string;

enum class Channel { Longitudinal, Lateral };

enum class Mode {
  Accelerating,
  Cruising,
  Braking,
  LaneFollowing,
  LaneChangeLeft,
  LaneChangeRight,
};

std::string_view to_string(Channel channel);
std::string_view to_string(Mode mode);
Channel parse_channel(std::string_view text);
Mode parse_mode(std::string_view text);
Channel channel_of(Mode mode);
bool is_lane_change(Mode mode);

/// Time instant of a mode transition of one actor on one channel.
struct Event
{
  ActorId actor;
  double time = 0.0;
  Channel channel = Channel::Longitudinal;
  Mode from_mode = Mode::Cruising;
  Mode to_mode = Mode::Cruising;

  bool operator==(const Event &) const = default;
};

/// Ordered named-field vector of activity parameters.
class ActivityParams
{
public:
  ActivityParams() = default;
  ActivityParams(std::initializer_list<std::pair<std::string, double>> fields);

  void set(std::string_view name, double value);
  bool has(std::string_view name) const;
  /// Throws InvalidArgument when missing.
  double get(std::string_view name) const;

  std::vector<std::string> names() const;
  std::vector<double> values() const;
  const std::vector<std::pair<std::string, double>> & fields() const { return fields_; }
  std::size_t size() const { return fields_.size(); }

  bool operator==(const ActivityParams &) const = default;

private:
  std::vector<std::pair<std::string, double>> fields_;
};

/// Field names a parameter vector of `mode` carries, in storage order.
std::vector<std::string> param_fields(Mode mode);

struct Activity
{
  ActorId actor;
  Channel channel = Channel::Longitudinal;
  Mode mode = Mode::Cruising;
  double t_start = 0.0;
  double t_end = 0.0;
  ActivityParams params;

  double duration() const { return t_end - t_start; }
  bool operator==(const Activity &) const = default;
};

struct StaticEnvironment
{
  std::string road_ref;
  /// friction in [0, 1], visibility in metres (>= 0).
  std::map<std::string, double> scenery{{"friction", 1.0}, {"visibility", 300.0}};
  TagSet scenery_tags;

  bool operator==(const StaticEnvironment &) const = default;
};

/// One measured, tagged and parametrized scenario.
struct ScenarioRecord
{
  std::string id;
  ActorId ego_actor;
  std::vector<ActorId> actors;
  std::vector<Activity> activities;
  std::vector<Event> events;
  TagSet tags;
  double t_start = 0.0;
  double t_end = 0.0;
  std::string source;
  StaticEnvironment static_env;

  /// Name of the activity pattern the record was mined with (empty if manual).
  std::string pattern;
  /// Role name -> actor (e.g. "ego", "target").
  std::map<std::string, ActorId> roles;
  /// Indices into `activities` of the pattern's matched elements, in pattern order.
  std::vector<std::size_t> matched;
  /// Kinematic state at t_start (ego_v, gap, target_v, ego_lane, target_lane).
  std::map<std::string, double> initial_conditions;

  bool operator==(const ScenarioRecord &) const = default;
};

struct ActivitySlot
{
  std::string role;
  Channel channel = Channel::Longitudinal;
  Mode mode = Mode::Cruising;

  bool operator==(const ActivitySlot &) const = default;
};

/// Qualitative abstraction over scenarios sharing tags and activity structure.
struct ScenarioClass
{
  std::string name;
  TagSet required_tags;
  std::vector<ActivitySlot> activity_pattern;

  bool operator==(const ScenarioClass &) const = default;
};

/// Returns the list of violated invariants (empty when valid).
std::vector<std::string> check_record(const ScenarioRecord & record, const Taxonomy & taxonomy);
std::vector<std::string> check_class(const ScenarioClass & cls, const Taxonomy & taxonomy);

/// Throws MutualExclusionViolation / UnknownTag; returns the record with
/// `tags` merged into its tag set.
ScenarioRecord assign_tags(ScenarioRecord record, const TagSet & tags, const Taxonomy & taxonomy);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__SCENARIO_HPP_
