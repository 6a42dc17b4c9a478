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

#ifndef SCENARIO_FORGE__GENSCEN_HPP_
#define SCENARIO_FORGE__GENSCEN_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenario_forge/density.hpp"
#include "scenario_forge/ingest.hpp"
#include "scenario_forge/mining.hpp"
#include "scenario_forge/road.hpp"

namespace scenario_forge
{

struct TrajectorySample
{
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double heading = 0.0;
  double a = 0.0;
  int lane_index = 0;

  bool operator==(const TrajectorySample &) const = default;
};

/// Open-loop road user replayed during simulation.
struct DynamicObject
{
  ActorId actor;
  std::string type = "car";
  double length = 4.5;
  double width = 1.8;
  std::vector<TrajectorySample> trajectory;

  bool operator==(const DynamicObject &) const = default;
};

struct EgoDirective
{
  enum class Kind { LaneChange, SetSpeed };
  Kind kind = Kind::SetSpeed;
  double t = 0.0;
  /// Lateral displacement (m, positive left) or target speed (m/s).
  double value = 0.0;
  /// Lane-change duration (s); unused for SetSpeed.
  double duration = 0.0;

  bool operator==(const EgoDirective &) const = default;
};

struct EgoAssignment
{
  std::vector<std::string> route;
  double v_max = 30.0;
  /// Initial arc length along the route and speed.
  double s0 = 0.0;
  double v0 = 0.0;
  std::vector<EgoDirective> directives;

  bool operator==(const EgoAssignment &) const = default;
};

struct FaultInjection
{
  enum class Kind { Blackout, Stuck, Bias };
  Kind kind = Kind::Blackout;
  double t_start = 0.0;
  double t_end = 0.0;
  /// Forward-range offset for Bias (m).
  double magnitude = 0.0;

  bool active(double t) const { return t >= t_start && t < t_end; }
  bool operator==(const FaultInjection &) const = default;
};

std::string_view to_string(FaultInjection::Kind kind);
FaultInjection::Kind parse_fault_kind(std::string_view text);
/// "kind:t_start:t_end[:magnitude]". Throws InvalidArgument or ParseError.
FaultInjection parse_fault(std::string_view spec);

struct TestScenario
{
  std::string id;
  std::string class_ref;
  RoadNetwork road;
  std::vector<DynamicObject> objects;
  EgoAssignment ego;
  double importance_weight = 1.0;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  std::map<std::string, double> scenery{{"friction", 1.0}, {"visibility", 300.0}};
  /// "nominal" or the fault kind of an injected variant.
  std::string variant = "nominal";
  std::vector<FaultInjection> faults;
  /// Sampled parameter vectors, one per class slot, then the context vector.
  std::vector<std::vector<double>> parameters;

  bool operator==(const TestScenario &) const = default;
};

/// Trajectories time-sorted, weight positive, ego route connected.
std::vector<std::string> check_scenario(const TestScenario & scenario);

/// Fitted class: one density per activity slot and one for the context vector.
struct ClassDensities
{
  ClassModel model;
  std::vector<ParameterDensity> slots;
  ParameterDensity context;

  bool operator==(const ClassDensities &) const = default;
};

ClassDensities fit_class(const ClassModel & model, const BandwidthRule & rule = {});

struct ScenarioDraw
{
  std::vector<WeightedSample> slots;
  WeightedSample context;

  double weight() const;
};

struct SynthesisOptions
{
  double dt = 0.02;
  /// Time before the first slot and after the last one (s).
  double lead_in = 2.0;
  double tail = 5.0;
  double ego_s0 = 150.0;
  double max_accel = 8.0;
};

/// Realizes a draw on `road`: constant-acceleration longitudinal segments,
/// quintic lane changes. Throws InfeasibleParameters and OffRoad.
TestScenario synthesize_trajectories(const ClassModel & model, const ScenarioDraw & draw,
                                     const RoadNetwork & road, const SynthesisOptions & options = {});

/// Minimum-jerk blend 10u^3 - 15u^4 + 6u^5 on [0, 1], clamped outside.
double quintic(double u);
double quintic_rate(double u);

/// n scenarios from tail-biased draws with inflation c; infeasible draws are
/// redrawn within a budget of 100 n attempts (RejectionBudgetExhausted).
std::vector<TestScenario> generate_batch(const ClassDensities & densities, std::size_t n, double c,
                                         const RoadNetwork & road, std::uint64_t seed,
                                         const SynthesisOptions & options = {});

struct VerificationCriteria
{
  /// Retain when the constant-velocity ego proxy sees a TTC below this (s).
  std::optional<double> ttc_below = 3.0;
  /// Retain when any object comes closer than this to the proxy (m).
  std::optional<double> distance_below = 2.0;
  double proxy_dt = 0.1;
  /// Each retained scenario is followed by one variant per fault.
  std::vector<FaultInjection> fault_variants;
};

struct ProxyMetrics
{
  double min_ttc = 0.0;
  double min_distance = 0.0;
};

/// Nominal metrics against an ego that keeps its initial speed and lane.
ProxyMetrics proxy_metrics(const TestScenario & scenario, double dt = 0.1);

std::vector<TestScenario> verify_scenarios(std::span<const TestScenario> batch,
                                           const VerificationCriteria & criteria);

/// Linear interpolation of the trajectory at t; nullopt outside its time span.
std::optional<TrajectorySample> sample_trajectory(const DynamicObject & object, double t);

/// Object trajectory as a log track (for decomposition of synthesized data).
ActorTrack to_track(const DynamicObject & object);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__GENSCEN_HPP_
