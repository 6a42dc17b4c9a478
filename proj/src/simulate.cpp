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

#include "scenario_forge/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "scenario_forge/error.hpp"
#include "scenario_forge/format.hpp"

namespace scenario_forge
{

ObjectState to_ego_frame(const EgoState & ego, const ObjectState & object)
{
  const double c = std::cos(ego.heading);
  const double s = std::sin(ego.heading);
  auto rot = [c, s](double x, double y) { return std::pair{c * x + s * y, -s * x + c * y}; };
  const auto [px, py] = rot(object.x - ego.x, object.y - ego.y);
  const auto [vx, vy] = rot(object.vx - ego.v * c, object.vy - ego.v * s);
  const auto [ax, ay] = rot(object.ax - ego.a * c, object.ay - ego.a * s);
  return {px, py, vx, vy, ax, ay};
}

ObjectState from_ego_frame(const EgoState & ego, const ObjectState & relative)
{
  const double c = std::cos(ego.heading);
  const double s = std::sin(ego.heading);
  auto rot = [c, s](double x, double y) { return std::pair{c * x - s * y, s * x + c * y}; };
  const auto [px, py] = rot(relative.x, relative.y);
  const auto [vx, vy] = rot(relative.vx, relative.vy);
  const auto [ax, ay] = rot(relative.ax, relative.ay);
  return {ego.x + px, ego.y + py, vx + ego.v * c, vy + ego.v * s, ax + ego.a * c, ay + ego.a * s};
}

void SensorConfig::validate() const
{
  if (!(range > 0.0)) fail(ErrorKind::InvalidArgument, "sensor range must be positive");
  if (!(fov > 0.0)) fail(ErrorKind::InvalidArgument, "sensor fov must be positive");
  if (pos_noise_sigma < 0.0 || vel_noise_sigma < 0.0) {
    fail(ErrorKind::InvalidArgument, "sensor noise sigmas must be non-negative");
  }
  if (dropout_prob < 0.0 || dropout_prob > 1.0) {
    fail(ErrorKind::InvalidArgument, "dropout probability must lie in [0, 1]");
  }
  for (const auto & f : faults) {
    if (!(f.t_end > f.t_start)) fail(ErrorKind::InvalidArgument, "fault needs t_end > t_start");
  }
}

std::vector<Detection> sense(std::span<const GroundTruthObject> objects, const SensorConfig & cfg,
                             double t, CounterRng & rng, SensorMemory & memory)
{
  bool blackout = false;
  bool stuck = false;
  double bias = 0.0;
  for (const auto & f : cfg.faults) {
    if (!f.active(t)) continue;
    switch (f.kind) {
      case FaultInjection::Kind::Blackout:
        blackout = true;
        break;
      case FaultInjection::Kind::Stuck:
        stuck = true;
        break;
      case FaultInjection::Kind::Bias:
        bias += f.magnitude;
        break;
    }
  }
  if (blackout) return {};
  if (stuck) {
    if (!memory.stuck) {
      memory.stuck = true;
      memory.frozen = memory.last;
    }
    return memory.frozen;
  }
  memory.stuck = false;

  std::vector<Detection> out;
  for (const auto & obj : objects) {
    const double r = std::hypot(obj.rel.x, obj.rel.y);
    if (r > cfg.range || std::abs(std::atan2(obj.rel.y, obj.rel.x)) > cfg.fov) continue;
    // Fixed draw count per visible object keeps the stream aligned across configs.
    const double u = rng.uniform();
    const double nx = rng.normal();
    const double ny = rng.normal();
    const double nvx = rng.normal();
    const double nvy = rng.normal();
    if (u < cfg.dropout_prob) continue;
    out.push_back({obj.actor, obj.rel.x + cfg.pos_noise_sigma * nx + bias,
                   obj.rel.y + cfg.pos_noise_sigma * ny, obj.rel.vx + cfg.vel_noise_sigma * nvx,
                   obj.rel.vy + cfg.vel_noise_sigma * nvy, obj.length});
  }
  memory.last = out;
  return out;
}

ControllerState init_controller(const EgoAssignment & assignment)
{
  const bool scripted_speed = std::any_of(
    assignment.directives.begin(), assignment.directives.end(),
    [](const EgoDirective & d) { return d.kind == EgoDirective::Kind::SetSpeed; });
  return {scripted_speed ? assignment.v0 : assignment.v_max, 0};
}

ControlCommand ego_controller(std::span<const Detection> detections,
                              const EgoAssignment & assignment, const EgoState & state,
                              const ControllerParams & params, double t, ControllerState & cs)
{
  ControlCommand cmd;
  while (cs.next_directive < assignment.directives.size() &&
         assignment.directives[cs.next_directive].t <= t + 1e-9) {
    const EgoDirective & d = assignment.directives[cs.next_directive++];
    if (d.kind == EgoDirective::Kind::SetSpeed) {
      cs.v_set = d.value;
    } else {
      cmd.lane_change = d.value;
      cmd.lane_change_duration = d.duration;
    }
  }
  const double v_set = std::min(cs.v_set, assignment.v_max);
  double accel = params.k_speed * (v_set - state.v);

  const Detection * lead = nullptr;
  for (const auto & det : detections) {
    if (det.x <= 0.0 || std::abs(det.y) >= params.lane_half_width) continue;
    if (lead == nullptr || det.x < lead->x) lead = &det;
  }
  if (lead != nullptr) {
    const double bumper = 0.5 * (params.ego_length + lead->length);
    const double gap = lead->x - bumper;
    const double desired = params.d0 + params.tau * state.v;
    accel = std::min(accel, params.k_gap * (gap - desired) + params.k_rel_speed * lead->vx);
  }
  accel = std::clamp(accel, params.a_min, params.a_max);
  if (params.aeb_enabled && lead != nullptr) {
    const double ttc = time_to_collision(lead->x, lead->y, lead->vx, params.lane_half_width,
                                         0.5 * (params.ego_length + lead->length));
    if (ttc < params.aeb_ttc) {
      accel = params.aeb_decel;
      cmd.aeb = true;
    }
  }
  cmd.accel = accel;
  return cmd;
}

EgoKinematics integrate_ego(EgoKinematics state, double accel, double dt)
{
  const double v1 = std::max(0.0, state.v + accel * dt);
  state.s += 0.5 * (state.v + v1) * dt;
  state.v = v1;
  return state;
}

KpiReport compute_kpis(const Trace & trace, const KpiThresholds & thresholds)
{
  if (trace.steps.empty()) fail(ErrorKind::InvalidArgument, "empty trace");
  const double inf = std::numeric_limits<double>::infinity();
  KpiReport r;
  r.min_ttc = inf;
  r.min_distance = inf;
  for (const auto & step : trace.steps) {
    const OrientedBox ego{step.ego.x, step.ego.y, step.ego.heading, trace.ego_length,
                          trace.ego_width};
    const TraceObject * lead = nullptr;
    for (const auto & obj : step.objects) {
      const OrientedBox box{obj.x, obj.y, obj.heading, obj.length, obj.width};
      if (boxes_overlap(ego, box)) r.collision = true;
      r.min_distance = std::min(r.min_distance, box_distance(ego, box));
      if (obj.rel.x > 0.0 && std::abs(obj.rel.y) < trace.lane_half_width &&
          (lead == nullptr || obj.rel.x < lead->rel.x)) {
        lead = &obj;
      }
    }
    if (lead != nullptr) {
      r.min_ttc = std::min(r.min_ttc,
                           time_to_collision(lead->rel.x, lead->rel.y, lead->rel.vx,
                                             trace.lane_half_width,
                                             0.5 * (trace.ego_length + lead->length)));
    }
    r.max_decel = std::max(r.max_decel, -step.ego.a);
    if (step.ego.v > trace.v_max + 1e-9) r.v_max_violation = true;
  }
  if (r.collision) r.min_distance = 0.0;
  r.pass = {
    {"collision", !r.collision},
    {"decel", r.max_decel <= thresholds.decel_max},
    {"speed", !r.v_max_violation},
    {"ttc", r.min_ttc >= thresholds.ttc_min},
  };
  r.overall_pass = r.pass["collision"] && r.pass["speed"] && r.pass["ttc"] &&
                   (!thresholds.decel_is_hard || r.pass["decel"]);
  return r;
}

namespace
{

bool finite(const EgoState & e)
{
  return std::isfinite(e.x) && std::isfinite(e.y) && std::isfinite(e.heading) &&
         std::isfinite(e.v) && std::isfinite(e.a);
}

double scenery(const TestScenario & ts, const std::string & key, double fallback)
{
  const auto it = ts.scenery.find(key);
  return it == ts.scenery.end() ? fallback : it->second;
}

}  // namespace

SimulationResult run_scenario(const TestScenario & scenario, const SimConfig & config,
                              std::uint64_t seed)
{
  if (!(config.dt > 0.0)) fail(ErrorKind::InvalidArgument, "simulation dt must be positive");
  config.sensor.validate();
  if (const auto bad = check_scenario(scenario); !bad.empty()) {
    fail(ErrorKind::InvalidArgument, "scenario " + scenario.id + ": " + bad.front());
  }

  SimulationResult result;
  result.scenario_id = scenario.id;
  result.class_ref = scenario.class_ref;
  result.variant = scenario.variant;
  result.importance_weight = scenario.importance_weight;
  result.seed = seed;
  result.config = config;

  SensorConfig sensor = config.sensor;
  sensor.range = std::min(sensor.range, scenery(scenario, "visibility", sensor.range));
  sensor.faults.insert(sensor.faults.end(), scenario.faults.begin(), scenario.faults.end());
  ControllerParams ctrl = config.controller;
  const Lane * lane = scenario.road.find(scenario.ego.route.front());
  ctrl.lane_half_width = 0.5 * lane->width;
  // Tyre-road friction scales the achievable deceleration.
  const double a_floor = ctrl.a_min * std::clamp(scenery(scenario, "friction", 1.0), 0.0, 1.0);

  Trace & trace = result.trace;
  trace.ego_length = ctrl.ego_length;
  trace.ego_width = config.ego_width;
  trace.lane_half_width = ctrl.lane_half_width;
  trace.v_max = scenario.ego.v_max;

  const ReferencePath path = lane_path(scenario.road, scenario.ego.route.front());
  EgoKinematics kin{scenario.ego.s0, scenario.ego.v0};
  double d = 0.0;
  struct
  {
    bool active = false;
    double t0 = 0.0;
    double from = 0.0;
    double disp = 0.0;
    double duration = 1.0;
  } lat;
  double a_applied = 0.0;
  CounterRng rng(seed);
  SensorMemory memory;
  ControllerState cs = init_controller(scenario.ego);

  const auto steps = static_cast<long long>(std::floor(scenario.horizon / config.dt + 1e-9));
  for (long long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    const double d_rate =
      lat.active ? lat.disp / lat.duration * quintic_rate((t - lat.t0) / lat.duration) : 0.0;
    const PathPose pose = path.at(kin.s, d);
    EgoState ego{pose.x, pose.y, pose.heading + (kin.v > 0.0 ? std::atan2(d_rate, kin.v) : 0.0),
                 kin.v, a_applied};

    TraceStep step;
    step.t = t;
    std::vector<GroundTruthObject> truth;
    for (const auto & obj : scenario.objects) {
      const auto s = sample_trajectory(obj, t);
      if (!s) continue;
      const double c = std::cos(s->heading);
      const double sn = std::sin(s->heading);
      const ObjectState abs{s->x, s->y, s->v * c, s->v * sn, s->a * c, s->a * sn};
      const ObjectState rel = to_ego_frame(ego, abs);
      truth.push_back({obj.actor, rel, obj.length, obj.width});
      step.objects.push_back({obj.actor, s->x, s->y, s->heading, obj.length, obj.width, rel});
    }
    const auto detections = sense(truth, sensor, t, rng, memory);
    const ControlCommand cmd = ego_controller(detections, scenario.ego, ego, ctrl, t, cs);
    step.detections = detections.size();
    step.command = cmd.accel;

    if (!finite(ego) || !std::isfinite(cmd.accel)) {
      fail(ErrorKind::NumericalDivergence,
           "non-finite state in " + scenario.id + " at t=" + format_double(t));
    }

    const OrientedBox ego_box{ego.x, ego.y, ego.heading, ctrl.ego_length, config.ego_width};
    const bool collided = std::any_of(step.objects.begin(), step.objects.end(), [&](const auto & o) {
      return boxes_overlap(ego_box, {o.x, o.y, o.heading, o.length, o.width});
    });

    const double accel = std::clamp(cmd.accel, a_floor, ctrl.a_max);
    if (cmd.lane_change && !lat.active) {
      lat = {true, t, d, *cmd.lane_change, std::max(cmd.lane_change_duration, config.dt)};
    }
    const EgoKinematics next = integrate_ego(kin, accel, config.dt);
    step.ego = ego;
    step.ego.a = (next.v - kin.v) / config.dt;
    trace.steps.push_back(std::move(step));
    if (collided || k == steps) break;

    kin = next;
    a_applied = trace.steps.back().ego.a;
    if (lat.active) {
      const double u = (t + config.dt - lat.t0) / lat.duration;
      d = lat.from + lat.disp * quintic(u);
      if (u >= 1.0) lat.active = false;
    }
  }
  result.kpis = compute_kpis(trace, config.kpi);
  result.kpis.scenario_id = scenario.id;
  return result;
}

std::vector<SimulationResult> run_batch(std::span<const TestScenario> batch,
                                        const SimConfig & config, std::uint64_t seed,
                                        unsigned jobs)
{
  std::vector<SimulationResult> results(batch.size());
  std::vector<std::exception_ptr> errors(batch.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < batch.size(); i = next++) {
      try {
        results[i] = run_scenario(batch[i], config, derive_seed(seed, batch[i].id));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, batch.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto & th : pool) th.join();
  for (const auto & e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::sort(results.begin(), results.end(),
            [](const SimulationResult & a, const SimulationResult & b) {
              return a.scenario_id < b.scenario_id;
            });
  return results;
}

std::string trace_csv(const SimulationResult & result)
{
  std::ostringstream os;
  os << "t,ego_x,ego_y,ego_heading,ego_v,ego_a,actor,rel_x,rel_y,rel_vx,rel_vy,detections,command\n";
  for (const auto & step : result.trace.steps) {
    auto prefix = [&] {
      os << format_double(step.t) << ',' << format_double(step.ego.x) << ','
         << format_double(step.ego.y) << ',' << format_double(step.ego.heading) << ','
         << format_double(step.ego.v) << ',' << format_double(step.ego.a) << ',';
    };
    auto suffix = [&] { os << ',' << step.detections << ',' << format_double(step.command) << '\n'; };
    if (step.objects.empty()) {
      prefix();
      os << ",,,,";
      suffix();
    }
    for (const auto & o : step.objects) {
      prefix();
      os << o.actor << ',' << format_double(o.rel.x) << ',' << format_double(o.rel.y) << ','
         << format_double(o.rel.vx) << ',' << format_double(o.rel.vy);
      suffix();
    }
  }
  return os.str();
}

}  // namespace scenario_forge
