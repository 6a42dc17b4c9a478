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

#ifndef SCENARIO_FORGE__DECOMPOSE_HPP_
#define SCENARIO_FORGE__DECOMPOSE_HPP_

#include <span>
#include <string>
#include <vector>

#include "scenario_forge/ingest.hpp"
#include "scenario_forge/scenario.hpp"

namespace scenario_forge
{

struct ModeThresholds
{
  /// Acceleration magnitude entering accelerating/braking [m/s^2].
  double a_on = 0.5;
  /// Acceleration magnitude below which the vehicle returns to cruising.
  double a_off = 0.2;
  /// Lateral speed that marks a lane change [m/s].
  double lat_rate_on = 0.3;
  /// Lateral speed below which a lane change is considered finished.
  double lat_rate_off = 0.01;
  /// How far past lat_rate_off a lane change may still extend while the
  /// lateral speed keeps decaying [s].
  double lat_settle = 0.5;
  /// Mode intervals shorter than this merge into the longer neighbour [s].
  double min_duration = 0.5;
  /// Rolling window of the road-heading fit [s].
  double heading_window = 1.0;
  /// Samples closer than this to a lane-index change are excluded from the
  /// road-heading fit [s].
  double lane_change_guard = 5.0;

  /// Throws InvalidArgument unless 0 < a_off <= a_on and all values positive.
  void validate() const;
};

/// Per-sample longitudinal mode from the hysteretic state machine. With
/// `merge` the short-interval merging is applied as well.
std::vector<Mode> longitudinal_mode_samples(const ActorTrack & track, const ModeThresholds & th,
                                            bool merge = true);
std::vector<Mode> lateral_mode_samples(const ActorTrack & track, const ModeThresholds & th,
                                       bool merge = true);

/// Road-heading estimate per sample (rad).
std::vector<double> reference_heading(const ActorTrack & track, const ModeThresholds & th);
/// Signed lateral speed per sample, positive to the left of the road heading.
std::vector<double> lateral_velocity(const ActorTrack & track, const ModeThresholds & th);

std::vector<Event> detect_longitudinal_events(const ActorTrack & track, const ModeThresholds & th);
std::vector<Event> detect_lateral_events(const ActorTrack & track, const ModeThresholds & th);

/// Activities tiling [track start, track end] for one channel. `initial` is the
/// mode before the first event. Throws InconsistentEvents.
std::vector<Activity> segment_activities(std::span<const Event> events, const ActorTrack & track,
                                         Channel channel, Mode initial,
                                         const ModeThresholds & th = {});

ActivityParams parametrize_activity(const Activity & activity, const ActorTrack & track,
                                    const ModeThresholds & th = {});

struct LogDecomposition
{
  std::string source_id;
  std::vector<Event> events;
  std::vector<Activity> activities;

  std::vector<Activity> activities_of(const ActorId & actor, Channel channel) const;
  std::vector<Event> events_of(const ActorId & actor, Channel channel) const;

  bool operator==(const LogDecomposition &) const = default;
};

LogDecomposition decompose_log(const DrivingLog & log, const ModeThresholds & th = {});

/// actor,channel,mode,t_start,t_end,params... rows for timeline plots.
std::string activity_timeline_csv(const LogDecomposition & decomposition);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__DECOMPOSE_HPP_
