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

#ifndef SCENARIO_FORGE__SIMULATE_HPP_
#define SCENARIO_FORGE__SIMULATE_HPP_

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scenario_forge/genscen.hpp"
#include "scenario_forge/rng.hpp"

namespace scenario_forge
{

struct EgoState
{
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double v = 0.0;
  double a = 0.0;

  bool operator==(const EgoState &) const = default;
};

/// Absolute (or, after to_ego_frame, ego-relative) planar kinematic state.
struct ObjectState
{
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double ax = 0.0;
  double ay = 0.0;

  bool operator==(const ObjectState &) const = default;
};

/// Translates by -(x, y) and rotates by -heading. Velocity and acceleration
/// are differences to the ego's, rotated into the frame (no yaw-rate terms).
ObjectState to_ego_frame(const EgoState & ego, const ObjectState & object);
ObjectState from_ego_frame(const EgoState & ego, const ObjectState & relative);

struct SensorConfig
{
  double range = 150.0;
  /// Half opening angle about the heading (rad).
  double fov = M_PI / 3.0;
  double pos_noise_sigma = 0.2;
  double vel_noise_sigma = 0.2;
  double dropout_prob = 0.01;
  std::vector<FaultInjection> faults;

  /// Throws InvalidArgument.
  void validate() const;
  bool operator==(const SensorConfig &) const = default;
};

struct GroundTruthObject
{
  ActorId actor;
  /// Ego-frame state.
  ObjectState rel;
  double length = 4.5;
  double width = 1.8;
};

struct Detection
{
  ActorId actor;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double length = 4.5;

  bool operator==(const Detection &) const = default;
};

/// Sensor state carried between steps (needed for the stuck fault).
struct SensorMemory
{
  std::vector<Detection> last;
  std::vector<Detection> frozen;
  bool stuck = false;
};

std::vector<Detection> sense(std::span<const GroundTruthObject> objects, const SensorConfig & cfg,
                             double t, CounterRng & rng, SensorMemory & memory);

struct ControllerParams
{
  /// Standstill gap and time gap of the following law.
  double d0 = 2.0;
  double tau = 1.5;
  double k_gap = 0.25;
  double k_rel_speed = 0.8;
  double k_speed = 0.5;
  double a_min = -8.0;
  double a_max = 2.0;
  bool aeb_enabled = true;
  double aeb_ttc = 1.2;
  double aeb_decel = -8.0;
  double lane_half_width = 1.75;
  double ego_length = 4.5;

  bool operator==(const ControllerParams &) const = default;
};

struct ControllerState
{
  double v_set = 0.0;
  std::size_t next_directive = 0;
};

ControllerState init_controller(const EgoAssignment & assignment);

struct ControlCommand
{
  double accel = 0.0;
  /// Lane change requested this step (m, positive left) and its duration.
  std::optional<double> lane_change;
  double lane_change_duration = 0.0;
  bool aeb = false;
};

/// Time-gap car following capped by the speed set-point, with emergency
/// braking below the TTC trigger. Executes directives whose time has come.
ControlCommand ego_controller(std::span<const Detection> detections,
                              const EgoAssignment & assignment, const EgoState & state,
                              const ControllerParams & params, double t, ControllerState & cs);

/// Longitudinal point-mass state along the route.
struct EgoKinematics
{
  double s = 0.0;
  double v = 0.0;
};

/// Exact step under a constant command: speed first (clamped at zero), then
/// position from the mean of old and new speed.
EgoKinematics integrate_ego(EgoKinematics state, double accel, double dt);

struct KpiThresholds
{
  double ttc_min = 2.0;
  double decel_max = 6.0;
  /// Deceleration is a comfort criterion unless made hard here.
  bool decel_is_hard = false;

  bool operator==(const KpiThresholds &) const = default;
};

struct SimConfig
{
  double dt = 0.02;
  SensorConfig sensor;
  ControllerParams controller;
  KpiThresholds kpi;
  double ego_width = 1.8;

  bool operator==(const SimConfig &) const = default;
};

struct TraceObject
{
  ActorId actor;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double length = 4.5;
  double width = 1.8;
  ObjectState rel;

  bool operator==(const TraceObject &) const = default;
};

struct TraceStep
{
  double t = 0.0;
  EgoState ego;
  std::vector<TraceObject> objects;
  std::size_t detections = 0;
  double command = 0.0;

  bool operator==(const TraceStep &) const = default;
};

struct Trace
{
  std::vector<TraceStep> steps;
  double ego_length = 4.5;
  double ego_width = 1.8;
  double lane_half_width = 1.75;
  double v_max = 0.0;

  bool operator==(const Trace &) const = default;
};

struct KpiReport
{
  std::string scenario_id;
  double min_ttc = 0.0;
  double min_distance = 0.0;
  bool collision = false;
  double max_decel = 0.0;
  bool v_max_violation = false;
  /// Per criterion: ttc, collision, decel, speed.
  std::map<std::string, bool> pass;
  bool overall_pass = false;

  bool operator==(const KpiReport &) const = default;
};

KpiReport compute_kpis(const Trace & trace, const KpiThresholds & thresholds = {});

struct SimulationResult
{
  std::string scenario_id;
  std::string class_ref;
  std::string variant = "nominal";
  double importance_weight = 1.0;
  std::uint64_t seed = 0;
  KpiReport kpis;
  SimConfig config;
  Trace trace;

  bool operator==(const SimulationResult &) const = default;
};

/// Fixed-step closed loop. Terminates at the scenario horizon or the first
/// collision. Throws NumericalDivergence on non-finite state.
SimulationResult run_scenario(const TestScenario & scenario, const SimConfig & config,
                              std::uint64_t seed);

/// Runs every scenario with seed derive_seed(seed, id) on up to `jobs`
/// threads. Results are ordered by scenario id.
std::vector<SimulationResult> run_batch(std::span<const TestScenario> batch,
                                        const SimConfig & config, std::uint64_t seed,
                                        unsigned jobs = 1);

/// t, ego state, per-object relative state, detection count and command.
std::string trace_csv(const SimulationResult & result);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__SIMULATE_HPP_
