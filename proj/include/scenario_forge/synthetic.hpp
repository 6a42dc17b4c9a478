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

#ifndef SCENARIO_FORGE__SYNTHETIC_HPP_
#define SCENARIO_FORGE__SYNTHETIC_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "scenario_forge/ingest.hpp"
#include "scenario_forge/scenario.hpp"

namespace scenario_forge
{

// Scripted multi-actor logs on a straight multi-lane road along +x. Lane 0 is
// the leftmost; lane i has its centre at y = (n_lanes - 1 - i) * lane_width.

struct AccelScript
{
  double t0 = 0.0;
  double t1 = 0.0;
  double a = 0.0;
};

struct LaneChangeScript
{
  double t0 = 0.0;
  double duration = 4.0;
  /// Positive to the left.
  double displacement = 3.5;
};

struct ActorScript
{
  ActorId actor;
  bool is_ego = false;
  double t_begin = 0.0;
  double t_end = 0.0;
  /// Position and speed at t_begin.
  double x0 = 0.0;
  double v0 = 0.0;
  int lane = 1;
  std::vector<AccelScript> accels;
  std::vector<LaneChangeScript> lane_changes;

  double speed(double t) const;
  double accel(double t) const;
  double x(double t) const;
  double y(double t, int n_lanes, double lane_width) const;
  double lateral_rate(double t) const;
};

struct LogScript
{
  std::string source_id = "synthetic";
  double dt = 0.1;
  int n_lanes = 2;
  double lane_width = 3.5;
  std::vector<ActorScript> actors;
  std::map<std::string, std::vector<std::string>> metadata;
};

DrivingLog render_log(const LogScript & script);

/// Per actor and channel, the mode intervals the script was built to produce.
std::vector<Activity> designed_activities(const LogScript & script);

/// Two consecutive overtakes: a station wagon overtakes the ego, then the ego
/// overtakes a pickup. The defaults put the first scenario's end at 16 s.
struct OvertakePairParams
{
  double duration = 30.0;
  double ego_x0 = 30.0;
  double ego_v = 20.0;
  double ego_accel_t0 = 16.0;
  double ego_accel_t1 = 20.0;
  double ego_accel = 1.5;
  double ego_lcl_t0 = 17.0;
  double ego_lcr_t0 = 25.0;
  double ego_lc_duration = 4.0;
  double wagon_x0 = 0.0;
  double wagon_v = 22.0;
  double wagon_accel_t0 = 2.0;
  double wagon_accel_t1 = 6.0;
  double wagon_accel = 2.0;
  double wagon_lcl_t0 = 4.0;
  double wagon_lcr_t0 = 12.0;
  double wagon_lc_duration = 4.0;
  double pickup_x0 = 70.0;
  double pickup_v = 20.0;
  double lc_offset = 3.5;
  std::string weather = "clear";
};

LogScript overtake_pair_script(const OvertakePairParams & params = {});
/// Randomized variant keeping the structure (and the two-scenario outcome).
OvertakePairParams jitter_overtake_pair(std::uint64_t seed);
/// Time at which the first scenario ends (end of the wagon's return lane change).
double overtake_pair_boundary(const OvertakePairParams & params);

struct PatternInstance
{
  std::string pattern;
  ActorId target;
  double t_start = 0.0;
  double t_end = 0.0;
};

/// One target per instance, instances in consecutive time windows, in the
/// given order. Supported: cut-in, ego-overtake, lead-braking, overtake-of-ego.
LogScript pattern_instances_script(std::span<const std::string> patterns, std::uint64_t seed,
                                   std::vector<PatternInstance> * truth = nullptr);

/// One to three random pattern instances, random weather/road metadata and a
/// few position spikes for the cleaner to remove.
LogScript random_log_script(std::uint64_t seed, std::vector<PatternInstance> * truth = nullptr);
DrivingLog random_log(std::uint64_t seed, std::vector<PatternInstance> * truth = nullptr);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__SYNTHETIC_HPP_
