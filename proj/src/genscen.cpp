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

#include "scenario_forge/genscen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "scenario_forge/error.hpp"
#include "scenario_forge/format.hpp"
#include "scenario_forge/rng.hpp"

namespace scenario_forge
{

std::string_view to_string(FaultInjection::Kind kind)
{
  switch (kind) {
    case FaultInjection::Kind::Blackout:
      return "blackout";
    case FaultInjection::Kind::Stuck:
      return "stuck";
    case FaultInjection::Kind::Bias:
      return "bias";
  }
  return "blackout";
}

FaultInjection::Kind parse_fault_kind(std::string_view text)
{
  for (auto k : {FaultInjection::Kind::Blackout, FaultInjection::Kind::Stuck,
                 FaultInjection::Kind::Bias}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorKind::ParseError, "unknown fault kind '" + std::string(text) + "'");
}

FaultInjection parse_fault(std::string_view spec)
{
  std::vector<std::string_view> parts;
  for (std::size_t pos = 0;;) {
    const std::size_t colon = spec.find(':', pos);
    parts.push_back(spec.substr(pos, colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (parts.size() < 3 || parts.size() > 4) {
    fail(ErrorKind::InvalidArgument, "fault '" + std::string(spec) + "' is not kind:t_start:t_end[:magnitude]");
  }
  auto number = [&](std::string_view text) {
    const auto v = parse_double(text);
    if (!v) fail(ErrorKind::InvalidArgument, "fault '" + std::string(spec) + "': bad number");
    return *v;
  };
  FaultInjection f;
  f.kind = parse_fault_kind(parts[0]);
  f.t_start = number(parts[1]);
  f.t_end = number(parts[2]);
  if (parts.size() == 4) f.magnitude = number(parts[3]);
  if (!(f.t_end > f.t_start)) fail(ErrorKind::InvalidArgument, "fault needs t_end > t_start");
  return f;
}

std::vector<std::string> check_scenario(const TestScenario & scenario)
{
  std::vector<std::string> bad;
  if (!(scenario.importance_weight > 0.0) || !std::isfinite(scenario.importance_weight)) {
    bad.push_back("importance weight must be finite and positive");
  }
  if (!(scenario.ego.v_max > 0.0)) bad.push_back("ego v_max must be positive");
  for (const auto & msg : check_road(scenario.road)) bad.push_back(msg);
  const auto & route = scenario.ego.route;
  if (route.empty()) bad.push_back("ego route is empty");
  for (std::size_t i = 0; i < route.size(); ++i) {
    const Lane * lane = scenario.road.find(route[i]);
    if (lane == nullptr) {
      bad.push_back("route lane " + route[i] + " not in road");
      continue;
    }
    if (i + 1 < route.size() && std::find(lane->successors.begin(), lane->successors.end(),
                                          route[i + 1]) == lane->successors.end()) {
      bad.push_back("route lane " + route[i + 1] + " does not succeed " + route[i]);
    }
  }
  for (const auto & obj : scenario.objects) {
    for (std::size_t i = 1; i < obj.trajectory.size(); ++i) {
      if (!(obj.trajectory[i].t > obj.trajectory[i - 1].t)) {
        bad.push_back("trajectory of " + obj.actor + " is not time-sorted");
        break;
      }
    }
  }
  for (const auto & f : scenario.faults) {
    if (!(f.t_end > f.t_start)) bad.push_back("fault window must have t_end > t_start");
  }
  return bad;
}

ClassDensities fit_class(const ClassModel & model, const BandwidthRule & rule)
{
  ClassDensities out;
  out.model = model;
  for (const auto & m : model.slot_params) out.slots.push_back(fit_density(m.rows, m.fields, rule));
  out.context = fit_density(model.context.rows, model.context.fields, rule);
  return out;
}

double ScenarioDraw::weight() const
{
  double w = context.weight;
  for (const auto & s : slots) w *= s.weight;
  return w;
}

double quintic(double u)
{
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double quintic_rate(double u)
{
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}

namespace
{

struct Segment
{
  double t0 = 0.0;
  double duration = 0.0;
  /// Acceleration for longitudinal, displacement for lateral segments.
  double value = 0.0;
};

/// Piecewise constant-acceleration speed profile.
struct SpeedProfile
{
  double v0 = 0.0;
  std::vector<Segment> segments;

  double accel(double t) const
  {
    for (const auto & s : segments) {
      if (t >= s.t0 && t < s.t0 + s.duration) return s.value;
    }
    return 0.0;
  }

  double speed(double t) const
  {
    double v = v0;
    for (const auto & s : segments) {
      v += s.value * std::clamp(t - s.t0, 0.0, s.duration);
    }
    return v;
  }

  /// Distance travelled since t = 0.
  double distance(double t) const
  {
    double dist = 0.0;
    double v = v0;
    double cursor = 0.0;
    for (const auto & s : segments) {
      if (t <= s.t0) break;
      dist += v * (s.t0 - cursor);
      const double tau = std::min(t, s.t0 + s.duration) - s.t0;
      dist += v * tau + 0.5 * s.value * tau * tau;
      v += s.value * tau;
      cursor = s.t0 + tau;
    }
    return dist + v * std::max(0.0, t - cursor);
  }
};

struct LateralProfile
{
  std::vector<Segment> segments;

  double offset(double t) const
  {
    double d = 0.0;
    for (const auto & s : segments) d += s.value * quintic((t - s.t0) / s.duration);
    return d;
  }

  double rate(double t) const
  {
    double r = 0.0;
    for (const auto & s : segments) r += s.value / s.duration * quintic_rate((t - s.t0) / s.duration);
    return r;
  }
};

[[noreturn]] void infeasible(const std::string & msg)
{
  fail(ErrorKind::InfeasibleParameters, msg);
}

void check_disjoint(std::vector<Segment> & segs, const std::string & what)
{
  std::sort(segs.begin(), segs.end(), [](const Segment & a, const Segment & b) { return a.t0 < b.t0; });
  for (std::size_t i = 1; i < segs.size(); ++i) {
    if (segs[i].t0 < segs[i - 1].t0 + segs[i - 1].duration - 1e-9) {
      infeasible(what + " activities overlap");
    }
  }
}

double field(const std::vector<std::string> & names, const std::vector<double> & values,
             const std::string & name)
{
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  fail(ErrorKind::InvalidArgument, "parameter vector lacks field " + name);
}

}  // namespace

TestScenario synthesize_trajectories(const ClassModel & model, const ScenarioDraw & draw,
                                     const RoadNetwork & road, const SynthesisOptions & options)
{
  const auto & slots = model.cls.activity_pattern;
  if (draw.slots.size() != slots.size()) {
    fail(ErrorKind::InvalidArgument, "draw has " + std::to_string(draw.slots.size()) +
                                       " slot vectors, class " + model.cls.name + " has " +
                                       std::to_string(slots.size()));
  }
  if (draw.context.point.size() != model.context.fields.size()) {
    fail(ErrorKind::InvalidArgument, "context vector does not match class context fields");
  }
  if (!(options.dt > 0.0)) fail(ErrorKind::InvalidArgument, "dt must be positive");
  const auto & cf = model.context.fields;
  const auto & cv = draw.context.point;
  const double ego_v = field(cf, cv, "ego_v");
  const double gap = field(cf, cv, "gap");
  if (ego_v < 0.0) infeasible("negative ego speed");

  std::vector<double> starts(slots.size(), options.lead_in);
  for (std::size_t k = 1; k < slots.size(); ++k) {
    const double offset = field(cf, cv, "offset_" + std::to_string(k));
    if (offset < 0.0) infeasible("slot start offsets must be non-negative");
    starts[k] = starts[k - 1] + offset;
  }

  SpeedProfile target_speed;
  target_speed.v0 = field(cf, cv, "target_v");
  bool target_v_from_slot = false;
  LateralProfile target_lat;
  std::vector<Segment> ego_long;
  std::vector<Segment> ego_lat;
  std::vector<EgoDirective> directives;
  double horizon = 0.0;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const auto & names = model.slot_params.at(k).fields;
    const auto & p = draw.slots[k].point;
    if (p.size() != names.size()) fail(ErrorKind::InvalidArgument, "slot vector size mismatch");
    const double duration = field(names, p, "duration");
    if (!(duration > 0.0)) infeasible("activity duration must be positive");
    horizon = std::max(horizon, starts[k] + duration);
    const bool ego = slots[k].role == "ego";
    const Mode mode = slots[k].mode;
    if (slots[k].channel == Channel::Longitudinal) {
      const double v_start = field(names, p, "v_start");
      const double dv = field(names, p, "delta_v");
      const double a = dv / duration;
      if (std::abs(a) > options.max_accel) {
        infeasible("acceleration " + std::to_string(a) + " m/s^2 exceeds bound");
      }
      if ((mode == Mode::Braking && dv > 0.0) || (mode == Mode::Accelerating && dv < 0.0)) {
        infeasible("delta_v sign contradicts mode " + std::string(to_string(mode)));
      }
      if (v_start < 0.0 || v_start + dv < 0.0) infeasible("negative speed");
      if (ego) {
        ego_long.push_back({starts[k], duration, a});
        directives.push_back({EgoDirective::Kind::SetSpeed, starts[k], v_start + dv, duration});
      } else {
        if (!target_v_from_slot) {
          target_speed.v0 = v_start;
          target_v_from_slot = true;
        }
        target_speed.segments.push_back({starts[k], duration, a});
      }
    } else if (is_lane_change(mode)) {
      const double disp = field(names, p, "lateral_displacement");
      if ((mode == Mode::LaneChangeLeft) != (disp > 0.0) || disp == 0.0) {
        infeasible("lateral displacement sign contradicts mode " + std::string(to_string(mode)));
      }
      (ego ? ego_lat : target_lat.segments).push_back({starts[k], duration, disp});
      if (ego) directives.push_back({EgoDirective::Kind::LaneChange, starts[k], disp, duration});
    }
  }
  check_disjoint(target_speed.segments, "target longitudinal");
  check_disjoint(target_lat.segments, "target lateral");
  check_disjoint(ego_long, "ego longitudinal");
  check_disjoint(ego_lat, "ego lateral");
  for (const auto & s : target_speed.segments) {
    if (target_speed.speed(s.t0 + s.duration) < -1e-9) infeasible("target speed turns negative");
  }
  if (target_speed.v0 < 0.0) infeasible("negative target speed");
  horizon += options.tail;

  // Lane layout around the ego start position, left to right.
  if (road.lanes.empty()) fail(ErrorKind::OffRoad, "road " + road.id + " has no lanes");
  const ReferencePath base(road.lanes.front().centerline);
  const PathPose probe = base.at(options.ego_s0);
  const auto section = cross_section(road, {probe.x, probe.y}, probe.heading);
  if (section.empty()) fail(ErrorKind::OffRoad, "no lane at the ego start position");
  const int n_lanes = static_cast<int>(section.size());
  const int ego_lane = std::clamp(model.ego_lane, 0, n_lanes - 1);
  const int target_lane = ego_lane + model.target_lane_offset;
  if (target_lane < 0 || target_lane >= n_lanes) {
    fail(ErrorKind::OffRoad, "target lane " + std::to_string(target_lane) + " does not exist");
  }
  {
    // Every intermediate ego lane must exist as well.
    double cum = 0.0;
    std::sort(ego_lat.begin(), ego_lat.end(),
              [](const Segment & a, const Segment & b) { return a.t0 < b.t0; });
    for (const auto & s : ego_lat) {
      cum += s.value;
      const int lane = ego_lane - static_cast<int>(std::lround(cum / section[ego_lane]->width));
      if (lane < 0 || lane >= n_lanes) fail(ErrorKind::OffRoad, "ego lane change leaves the road");
    }
  }

  TestScenario ts;
  ts.id = model.cls.name;
  ts.class_ref = model.cls.name;
  ts.road = road;
  ts.horizon = horizon;
  ts.importance_weight = draw.weight();
  for (const auto & s : draw.slots) ts.parameters.push_back(s.point);
  ts.parameters.push_back(draw.context.point);

  const ReferencePath ego_path = lane_path(road, section[ego_lane]->id, &ts.ego.route);
  ts.ego.s0 = options.ego_s0;
  ts.ego.v0 = ego_v;
  ts.ego.v_max = std::max(1.0, ego_v);
  for (const auto & d : directives) {
    if (d.kind == EgoDirective::Kind::SetSpeed) ts.ego.v_max = std::max(ts.ego.v_max, d.value);
  }
  std::sort(directives.begin(), directives.end(),
            [](const EgoDirective & a, const EgoDirective & b) { return a.t < b.t; });
  ts.ego.directives = directives;
  if (options.ego_s0 + ego_v * horizon > ego_path.length()) {
    fail(ErrorKind::OffRoad, "ego route too short for the scenario horizon");
  }

  const ReferencePath target_path = lane_path(road, section[target_lane]->id);
  // The gap is measured along the road when the first slot starts.
  const double t_ref = starts.front();
  const double s_target0 = options.ego_s0 + ego_v * t_ref + gap - target_speed.distance(t_ref);

  DynamicObject obj;
  obj.actor = "target";
  const auto steps = static_cast<long long>(std::ceil(horizon / options.dt - 1e-9));
  for (long long j = 0; j <= steps; ++j) {
    const double t = static_cast<double>(j) * options.dt;
    const double s = s_target0 + target_speed.distance(t);
    if (s < 0.0 || s > target_path.length()) {
      fail(ErrorKind::OffRoad, "target leaves its lane extent at t=" + std::to_string(t));
    }
    const double v = target_speed.speed(t);
    const PathPose pose = target_path.at(s, target_lat.offset(t));
    TrajectorySample ts_sample;
    ts_sample.t = t;
    ts_sample.x = pose.x;
    ts_sample.y = pose.y;
    ts_sample.v = v;
    ts_sample.a = target_speed.accel(t);
    ts_sample.heading = pose.heading + (v > 0.0 ? std::atan2(target_lat.rate(t), v) : 0.0);
    const auto lane = lane_index_at(road, {pose.x, pose.y}, pose.heading);
    if (!lane) fail(ErrorKind::OffRoad, "target off road at t=" + std::to_string(t));
    ts_sample.lane_index = *lane;
    obj.trajectory.push_back(ts_sample);
  }
  ts.objects.push_back(std::move(obj));
  return ts;
}

std::vector<TestScenario> generate_batch(const ClassDensities & densities, std::size_t n, double c,
                                         const RoadNetwork & road, std::uint64_t seed,
                                         const SynthesisOptions & options)
{
  if (n == 0) fail(ErrorKind::InvalidArgument, "batch size must be at least 1");
  const std::size_t budget = 100 * n;
  std::size_t attempts = 0;
  std::vector<TestScenario> out;
  out.reserve(n);
  const std::size_t k_slots = densities.slots.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t sub = derive_seed(seed, i);
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempts == budget) {
        fail(ErrorKind::RejectionBudgetExhausted,
             std::to_string(budget) + " draws spent, " + std::to_string(out.size()) + " of " +
               std::to_string(n) + " scenarios feasible");
      }
      ++attempts;
      const std::uint64_t key = derive_seed(sub, attempt);
      ScenarioDraw draw;
      for (std::size_t k = 0; k < k_slots; ++k) {
        draw.slots.push_back(sample_tail_biased(densities.slots[k], 1, c, derive_seed(key, k))[0]);
      }
      draw.context = sample_tail_biased(densities.context, 1, c, derive_seed(key, k_slots))[0];
      try {
        TestScenario ts = synthesize_trajectories(densities.model, draw, road, options);
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "-%04zu", i);
        ts.id = densities.model.cls.name + suffix;
        ts.seed = sub;
        out.push_back(std::move(ts));
        break;
      } catch (const Error & e) {
        if (e.kind() != ErrorKind::InfeasibleParameters && e.kind() != ErrorKind::OffRoad) throw;
      }
    }
  }
  return out;
}

std::optional<TrajectorySample> sample_trajectory(const DynamicObject & object, double t)
{
  const auto & tr = object.trajectory;
  if (tr.empty() || t < tr.front().t - 1e-9 || t > tr.back().t + 1e-9) return std::nullopt;
  auto it = std::lower_bound(tr.begin(), tr.end(), t,
                             [](const TrajectorySample & s, double v) { return s.t < v; });
  if (it == tr.end()) return tr.back();
  if (it == tr.begin() || it->t == t) return *it;
  const TrajectorySample & b = *it;
  const TrajectorySample & a = *(it - 1);
  const double u = (t - a.t) / (b.t - a.t);
  auto lerp = [u](double p, double q) { return p + u * (q - p); };
  TrajectorySample s;
  s.t = t;
  s.x = lerp(a.x, b.x);
  s.y = lerp(a.y, b.y);
  s.v = lerp(a.v, b.v);
  s.a = lerp(a.a, b.a);
  s.heading = a.heading + u * std::remainder(b.heading - a.heading, 2.0 * M_PI);
  s.lane_index = u < 0.5 ? a.lane_index : b.lane_index;
  return s;
}

ProxyMetrics proxy_metrics(const TestScenario & scenario, double dt)
{
  ProxyMetrics m{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  if (scenario.ego.route.empty()) return m;
  const ReferencePath path = lane_path(scenario.road, scenario.ego.route.front());
  const Lane * lane = scenario.road.find(scenario.ego.route.front());
  const double half_lane = 0.5 * (lane != nullptr ? lane->width : 3.5);
  const auto steps = static_cast<long long>(std::floor(scenario.horizon / dt + 1e-9));
  for (long long j = 0; j <= steps; ++j) {
    const double t = static_cast<double>(j) * dt;
    const PathPose ego = path.at(scenario.ego.s0 + scenario.ego.v0 * t);
    const double c = std::cos(ego.heading);
    const double s = std::sin(ego.heading);
    const OrientedBox ego_box{ego.x, ego.y, ego.heading, 4.5, 1.8};
    for (const auto & obj : scenario.objects) {
      const auto o = sample_trajectory(obj, t);
      if (!o) continue;
      const OrientedBox box{o->x, o->y, o->heading, obj.length, obj.width};
      m.min_distance = std::min(m.min_distance, box_distance(ego_box, box));
      const double dx = o->x - ego.x;
      const double dy = o->y - ego.y;
      const double vx = o->v * std::cos(o->heading) - scenario.ego.v0 * c;
      const double vy = o->v * std::sin(o->heading) - scenario.ego.v0 * s;
      m.min_ttc = std::min(m.min_ttc,
                           time_to_collision(c * dx + s * dy, -s * dx + c * dy, c * vx + s * vy,
                                             half_lane, 0.5 * (4.5 + obj.length)));
    }
  }
  return m;
}

std::vector<TestScenario> verify_scenarios(std::span<const TestScenario> batch,
                                           const VerificationCriteria & criteria)
{
  std::vector<TestScenario> out;
  for (const auto & ts : batch) {
    const ProxyMetrics m = proxy_metrics(ts, criteria.proxy_dt);
    const bool critical = (criteria.ttc_below && m.min_ttc < *criteria.ttc_below) ||
                          (criteria.distance_below && m.min_distance < *criteria.distance_below);
    if (!critical) continue;
    out.push_back(ts);
    for (const auto & fault : criteria.fault_variants) {
      TestScenario variant = ts;
      variant.variant = std::string(to_string(fault.kind));
      variant.id = ts.id + "~" + variant.variant;
      variant.faults = {fault};
      out.push_back(std::move(variant));
    }
  }
  return out;
}

ActorTrack to_track(const DynamicObject & object)
{
  ActorTrack track;
  track.actor = object.actor;
  for (const auto & s : object.trajectory) {
    track.samples.push_back({s.t, s.x, s.y, s.v, s.a, s.heading, s.lane_index});
  }
  return track;
}

}  // namespace scenario_forge
