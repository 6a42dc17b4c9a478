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

#include "scenario_forge/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "scenario_forge/error.hpp"

namespace scenario_forge
{

namespace
{

constexpr double kTimeEps = 1e-9;
// Sensor-noise allowance for the braking/accelerating sign rule on delta_v.
constexpr double kDeltaVTolerance = 0.2;

}  // namespace

std::string_view to_string(Channel channel)
{
  return channel == Channel::Longitudinal ? "longitudinal" : "lateral";
}

std::string_view to_string(Mode mode)
{
  switch (mode) {
    case Mode::Accelerating: return "accelerating";
    case Mode::Cruising: return "cruising";
    case Mode::Braking: return "braking";
    case Mode::LaneFollowing: return "lane-following";
    case Mode::LaneChangeLeft: return "lane-change-left";
    case Mode::LaneChangeRight: return "lane-change-right";
  }
  return "?";
}

Channel parse_channel(std::string_view text)
{
  if (text == "longitudinal") return Channel::Longitudinal;
  if (text == "lateral") return Channel::Lateral;
  fail(ErrorKind::ParseError, "unknown channel '" + std::string(text) + "'");
}

Mode parse_mode(std::string_view text)
{
  for (Mode m : {Mode::Accelerating, Mode::Cruising, Mode::Braking, Mode::LaneFollowing,
                 Mode::LaneChangeLeft, Mode::LaneChangeRight}) {
    if (to_string(m) == text) {
      return m;
    }
  }
  fail(ErrorKind::ParseError, "unknown mode '" + std::string(text) + "'");
}

Channel channel_of(Mode mode)
{
  switch (mode) {
    case Mode::Accelerating:
    case Mode::Cruising:
    case Mode::Braking:
      return Channel::Longitudinal;
    default:
      return Channel::Lateral;
  }
}

bool is_lane_change(Mode mode)
{
  return mode == Mode::LaneChangeLeft || mode == Mode::LaneChangeRight;
}

ActivityParams::ActivityParams(std::initializer_list<std::pair<std::string, double>> fields)
{
  for (const auto & [name, value] : fields) {
    set(name, value);
  }
}

void ActivityParams::set(std::string_view name, double value)
{
  for (auto & [n, v] : fields_) {
    if (n == name) {
      v = value;
      return;
    }
  }
  fields_.emplace_back(std::string(name), value);
}

bool ActivityParams::has(std::string_view name) const
{
  return std::any_of(fields_.begin(), fields_.end(), [&](const auto & f) { return f.first == name; });
}

double ActivityParams::get(std::string_view name) const
{
  for (const auto & [n, v] : fields_) {
    if (n == name) {
      return v;
    }
  }
  fail(ErrorKind::InvalidArgument, "activity parameter '" + std::string(name) + "' missing");
}

std::vector<std::string> ActivityParams::names() const
{
  std::vector<std::string> out;
  for (const auto & f : fields_) out.push_back(f.first);
  return out;
}

std::vector<double> ActivityParams::values() const
{
  std::vector<double> out;
  for (const auto & f : fields_) out.push_back(f.second);
  return out;
}

std::vector<std::string> param_fields(Mode mode)
{
  switch (mode) {
    case Mode::Accelerating:
    case Mode::Cruising:
    case Mode::Braking:
      return {"duration", "v_start", "delta_v"};
    case Mode::LaneChangeLeft:
    case Mode::LaneChangeRight:
      return {"duration", "lateral_displacement"};
    case Mode::LaneFollowing:
      return {"duration"};
  }
  return {};
}

std::vector<std::string> check_record(const ScenarioRecord & r, const Taxonomy & taxonomy)
{
  std::vector<std::string> bad;
  auto known = [&](const ActorId & a) {
    return std::find(r.actors.begin(), r.actors.end(), a) != r.actors.end();
  };

  if (!(r.t_end >= r.t_start)) {
    bad.push_back("t_end precedes t_start");
  }
  if (!known(r.ego_actor)) {
    bad.push_back("ego actor '" + r.ego_actor + "' not in actors");
  }
  for (std::size_t i = 0; i < r.activities.size(); ++i) {
    const Activity & a = r.activities[i];
    const std::string where = "activity " + std::to_string(i);
    if (!known(a.actor)) bad.push_back(where + ": actor '" + a.actor + "' not in actors");
    if (!(a.t_end > a.t_start)) bad.push_back(where + ": empty interval");
    if (a.t_start < r.t_start - kTimeEps || a.t_end > r.t_end + kTimeEps) {
      bad.push_back(where + ": interval outside scenario span");
    }
    if (channel_of(a.mode) != a.channel) bad.push_back(where + ": mode/channel mismatch");
    if (a.params.has("duration") && !(a.params.get("duration") > 0.0)) {
      bad.push_back(where + ": non-positive duration");
    }
    if (a.params.has("delta_v")) {
      const double dv = a.params.get("delta_v");
      if (a.mode == Mode::Braking && dv > kDeltaVTolerance) {
        bad.push_back(where + ": braking with positive delta_v");
      }
      if (a.mode == Mode::Accelerating && dv < -kDeltaVTolerance) {
        bad.push_back(where + ": accelerating with negative delta_v");
      }
    }
  }
  for (std::size_t i = 0; i < r.events.size(); ++i) {
    const Event & e = r.events[i];
    const std::string where = "event " + std::to_string(i);
    if (!known(e.actor)) bad.push_back(where + ": actor '" + e.actor + "' not in actors");
    if (e.from_mode == e.to_mode) bad.push_back(where + ": from_mode equals to_mode");
    if (e.time < r.t_start - kTimeEps || e.time > r.t_end + kTimeEps) {
      bad.push_back(where + ": time outside scenario span");
    }
  }
  for (std::size_t idx : r.matched) {
    if (idx >= r.activities.size()) bad.push_back("matched index out of range");
  }
  for (const auto & [role, actor] : r.roles) {
    if (!known(actor)) bad.push_back("role '" + role + "' actor not in actors");
  }
  try {
    taxonomy.check_exclusive(r.tags);
  } catch (const Error & e) {
    bad.push_back(e.what());
  }
  for (const auto & [key, value] : r.static_env.scenery) {
    if (!std::isfinite(value)) bad.push_back("scenery '" + key + "' not finite");
  }
  if (auto it = r.static_env.scenery.find("friction"); it != r.static_env.scenery.end()) {
    if (it->second < 0.0 || it->second > 1.0) bad.push_back("friction outside [0, 1]");
  }
  if (auto it = r.static_env.scenery.find("visibility"); it != r.static_env.scenery.end()) {
    if (it->second < 0.0) bad.push_back("negative visibility");
  }
  return bad;
}

std::vector<std::string> check_class(const ScenarioClass & cls, const Taxonomy & taxonomy)
{
  std::vector<std::string> bad;
  if (cls.activity_pattern.empty()) {
    bad.push_back("class '" + cls.name + "' has an empty activity pattern");
  }
  for (const auto & t : cls.required_tags) {
    if (!taxonomy.contains(TagRef::parse(t))) bad.push_back("unknown tag '" + t + "'");
  }
  return bad;
}

ScenarioRecord assign_tags(ScenarioRecord record, const TagSet & tags, const Taxonomy & taxonomy)
{
  TagSet merged = record.tags;
  merged.insert(tags.begin(), tags.end());
  taxonomy.check_exclusive(merged);
  record.tags = std::move(merged);
  return record;
}

}  // namespace scenario_forge
