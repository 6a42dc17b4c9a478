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

#include "scenario_forge/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "scenario_forge/error.hpp"
#include "scenario_forge/genscen.hpp"
#include "scenario_forge/rng.hpp"

namespace scenario_forge
{

double ActorScript::accel(double t) const
{
  for (const auto & s : accels) {
    if (t >= s.t0 && t < s.t1) return s.a;
  }
  return 0.0;
}

double ActorScript::speed(double t) const
{
  double v = v0;
  for (const auto & s : accels) v += s.a * std::clamp(t - s.t0, 0.0, s.t1 - s.t0);
  return v;
}

double ActorScript::x(double t) const
{
  // Closed form over the (sorted, disjoint) acceleration segments.
  double pos = x0;
  double v = v0;
  double cursor = t_begin;
  for (const auto & s : accels) {
    if (t <= s.t0) break;
    pos += v * (s.t0 - cursor);
    const double tau = std::min(t, s.t1) - s.t0;
    pos += v * tau + 0.5 * s.a * tau * tau;
    v += s.a * tau;
    cursor = s.t0 + tau;
  }
  return pos + v * std::max(0.0, t - cursor);
}

double ActorScript::y(double t, int n_lanes, double lane_width) const
{
  double y = (n_lanes - 1 - lane) * lane_width;
  for (const auto & lc : lane_changes) y += lc.displacement * quintic((t - lc.t0) / lc.duration);
  return y;
}

double ActorScript::lateral_rate(double t) const
{
  double r = 0.0;
  for (const auto & lc : lane_changes) {
    r += lc.displacement / lc.duration * quintic_rate((t - lc.t0) / lc.duration);
  }
  return r;
}

namespace
{

/// k * dt without accumulating representation error for rates like 10 Hz.
double grid_time(long long k, double dt)
{
  const double rate = 1.0 / dt;
  if (std::abs(rate - std::round(rate)) < 1e-9) return static_cast<double>(k) / std::round(rate);
  return static_cast<double>(k) * dt;
}

}  // namespace

DrivingLog render_log(const LogScript & script)
{
  if (!(script.dt > 0.0)) fail(ErrorKind::InvalidArgument, "script dt must be positive");
  DrivingLog log;
  log.dt = script.dt;
  log.source_id = script.source_id;
  log.metadata = script.metadata;
  const double top = (script.n_lanes - 1) * script.lane_width;
  for (const auto & a : script.actors) {
    ActorTrack tr;
    tr.actor = a.actor;
    tr.is_ego = a.is_ego;
    const auto k0 = static_cast<long long>(std::llround(a.t_begin / script.dt));
    const auto k1 = static_cast<long long>(std::llround(a.t_end / script.dt));
    for (long long k = k0; k <= k1; ++k) {
      const double t = grid_time(k, script.dt);
      Sample s;
      s.t = t;
      s.v = a.speed(t);
      s.a = a.accel(t);
      s.x = a.x(t);
      s.y = a.y(t, script.n_lanes, script.lane_width);
      s.heading = s.v > 0.0 ? std::atan2(a.lateral_rate(t), s.v) : 0.0;
      s.lane_index = std::clamp(static_cast<int>(std::lround((top - s.y) / script.lane_width)), 0,
                                script.n_lanes - 1);
      tr.samples.push_back(s);
    }
    log.actors.push_back(std::move(tr));
  }
  return log;
}

std::vector<Activity> designed_activities(const LogScript & script)
{
  std::vector<Activity> out;
  for (const auto & a : script.actors) {
    double cursor = a.t_begin;
    auto push = [&](Channel ch, Mode m, double t0, double t1) {
      t0 = std::max(t0, a.t_begin);
      t1 = std::min(t1, a.t_end);
      if (t1 > t0) out.push_back({a.actor, ch, m, t0, t1, {}});
    };
    for (const auto & s : a.accels) {
      if (s.t0 > cursor) push(Channel::Longitudinal, Mode::Cruising, cursor, s.t0);
      push(Channel::Longitudinal, s.a > 0.0 ? Mode::Accelerating : Mode::Braking, s.t0, s.t1);
      cursor = s.t1;
    }
    if (a.t_end > cursor) push(Channel::Longitudinal, Mode::Cruising, cursor, a.t_end);
    cursor = a.t_begin;
    for (const auto & lc : a.lane_changes) {
      if (lc.t0 > cursor) push(Channel::Lateral, Mode::LaneFollowing, cursor, lc.t0);
      push(Channel::Lateral, lc.displacement > 0.0 ? Mode::LaneChangeLeft : Mode::LaneChangeRight,
           lc.t0, lc.t0 + lc.duration);
      cursor = lc.t0 + lc.duration;
    }
    if (a.t_end > cursor) push(Channel::Lateral, Mode::LaneFollowing, cursor, a.t_end);
  }
  return out;
}

LogScript overtake_pair_script(const OvertakePairParams & p)
{
  LogScript s;
  s.source_id = "overtake-pair";
  s.metadata = {{"road", {"motorway-straight"}}, {"weather", {p.weather}}};
  ActorScript ego{"ego", true, 0.0, p.duration, p.ego_x0, p.ego_v, 1, {}, {}};
  ego.accels = {{p.ego_accel_t0, p.ego_accel_t1, p.ego_accel}};
  ego.lane_changes = {{p.ego_lcl_t0, p.ego_lc_duration, p.lc_offset},
                      {p.ego_lcr_t0, p.ego_lc_duration, -p.lc_offset}};
  ActorScript pickup{"pickup", false, 0.0, p.duration, p.pickup_x0, p.pickup_v, 1, {}, {}};
  ActorScript wagon{"station-wagon", false, 0.0, p.duration, p.wagon_x0, p.wagon_v, 1, {}, {}};
  wagon.accels = {{p.wagon_accel_t0, p.wagon_accel_t1, p.wagon_accel}};
  wagon.lane_changes = {{p.wagon_lcl_t0, p.wagon_lc_duration, p.lc_offset},
                        {p.wagon_lcr_t0, p.wagon_lc_duration, -p.lc_offset}};
  s.actors = {ego, pickup, wagon};
  return s;
}

double overtake_pair_boundary(const OvertakePairParams & p)
{
  return p.wagon_lcr_t0 + p.wagon_lc_duration;
}

namespace
{

/// Uniform draw on [lo, hi] snapped to the 0.1 s / 0.01 grid used by scripts.
double draw(CounterRng & rng, double lo, double hi, double step = 0.1)
{
  return std::round((lo + (hi - lo) * rng.uniform()) / step) * step;
}

bool overtake_pair_consistent(const OvertakePairParams & p)
{
  const LogScript s = overtake_pair_script(p);
  const ActorScript & ego = s.actors[0];
  const ActorScript & pickup = s.actors[1];
  const ActorScript & wagon = s.actors[2];
  const double boundary = overtake_pair_boundary(p);
  const bool wagon_passes = wagon.x(p.wagon_lcl_t0) < ego.x(p.wagon_lcl_t0) - 10.0 &&
                            wagon.x(boundary) > ego.x(boundary) + 10.0 &&
                            wagon.x(p.wagon_lcr_t0) > ego.x(p.wagon_lcr_t0) + 10.0 &&
                            wagon.x(p.wagon_lcr_t0) > pickup.x(p.wagon_lcr_t0) + 10.0;
  const double ego_end = p.ego_lcr_t0 + p.ego_lc_duration;
  const bool ego_passes = pickup.x(p.ego_lcl_t0) > ego.x(p.ego_lcl_t0) + 10.0 &&
                          ego.x(p.ego_lcr_t0) > pickup.x(p.ego_lcr_t0) + 8.0 &&
                          ego.x(ego_end) > pickup.x(ego_end) + 10.0 &&
                          wagon.x(ego_end) > ego.x(ego_end) + 10.0;
  // The wagon must stay within the relevance radius while it overtakes.
  const bool near = std::abs(wagon.x(p.wagon_lcl_t0) - ego.x(p.wagon_lcl_t0)) < 60.0;
  return wagon_passes && ego_passes && near && ego_end < p.duration;
}

}  // namespace

OvertakePairParams jitter_overtake_pair(std::uint64_t seed)
{
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    CounterRng rng(derive_seed(seed, attempt));
    OvertakePairParams p;
    p.ego_v = draw(rng, 17.0, 24.0);
    p.pickup_v = p.ego_v;
    p.lc_offset = draw(rng, 3.3, 3.7, 0.01);
    p.wagon_v = p.ego_v + draw(rng, 1.0, 4.0);
    p.wagon_accel_t0 = draw(rng, 1.0, 3.0);
    p.wagon_accel_t1 = p.wagon_accel_t0 + draw(rng, 3.0, 5.0);
    p.wagon_accel = draw(rng, 1.2, 2.5);
    p.wagon_lc_duration = draw(rng, 3.5, 5.0);
    p.wagon_lcl_t0 = p.wagon_accel_t0 + draw(rng, 1.0, 2.5);
    p.wagon_lcr_t0 = p.wagon_lcl_t0 + p.wagon_lc_duration + draw(rng, 2.0, 5.0);
    p.wagon_x0 = p.ego_x0 - draw(rng, 20.0, 40.0);
    p.ego_lc_duration = draw(rng, 3.5, 5.0);
    p.ego_accel_t0 = overtake_pair_boundary(p) + draw(rng, 0.0, 1.0);
    p.ego_accel_t1 = p.ego_accel_t0 + draw(rng, 3.0, 4.5);
    p.ego_accel = draw(rng, 1.2, 2.0);
    p.ego_lcl_t0 = p.ego_accel_t0 + draw(rng, 0.5, 1.5);
    p.ego_lcr_t0 = p.ego_lcl_t0 + p.ego_lc_duration + draw(rng, 3.0, 5.0);
    p.duration = std::ceil(p.ego_lcr_t0 + p.ego_lc_duration + draw(rng, 1.0, 3.0));
    // Pickup placed so the ego catches up during its manoeuvre.
    const LogScript probe = overtake_pair_script(p);
    const double gap = draw(rng, 15.0, 30.0);
    p.pickup_x0 = probe.actors[0].x(p.ego_accel_t0) + gap - p.pickup_v * p.ego_accel_t0;
    const char * weathers[] = {"clear", "rain", "light-rain", "fog"};
    p.weather = weathers[static_cast<int>(rng.uniform() * 4.0) % 4];
    if (overtake_pair_consistent(p)) return p;
  }
  fail(ErrorKind::InvalidArgument, "no consistent overtake variant found");
}

LogScript pattern_instances_script(std::span<const std::string> patterns, std::uint64_t seed,
                                   std::vector<PatternInstance> * truth)
{
  CounterRng rng(derive_seed(seed, "pattern-instances"));
  LogScript s;
  s.source_id = "patterns-" + std::to_string(seed);
  ActorScript ego{"ego", true, 0.0, 0.0, 0.0, draw(rng, 15.0, 22.0), 1, {}, {}};
  std::vector<ActorScript> targets;
  std::vector<PatternInstance> found;
  double t = 3.0;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const std::string & name = patterns[i];
    ActorScript tg;
    tg.actor = "target-" + std::to_string(i + 1);
    tg.t_begin = t;
    const double ve = ego.speed(t);
    double t_end = t;
    double t_first = t;
    if (name == "lead-braking") {
      tg.lane = 1;
      tg.v0 = ve;
      tg.x0 = ego.x(t) + draw(rng, 30.0, 45.0);
      const double tb = t + draw(rng, 2.0, 4.0);
      const double dur = draw(rng, 2.0, 4.0);
      tg.accels = {{tb, tb + dur, -draw(rng, 1.5, 3.0)}};
      t_first = tb;
      t_end = tb + dur + 2.0;
    } else if (name == "cut-in") {
      tg.lane = 0;
      tg.v0 = ve + draw(rng, 1.0, 3.0);
      tg.x0 = ego.x(t) + draw(rng, 10.0, 25.0);
      const double tc = t + draw(rng, 2.0, 3.0);
      const double dur = draw(rng, 3.0, 5.0);
      tg.lane_changes = {{tc, dur, -3.5}};
      t_first = tc;
      t_end = tc + dur + 3.0;
    } else if (name == "overtake-of-ego") {
      tg.lane = 1;
      const double dv = draw(rng, 5.0, 7.0);
      tg.v0 = ve + dv;
      const double g = draw(rng, 30.0, 40.0);
      tg.x0 = ego.x(t) - g;
      const double tl = t + 0.5;
      const double dur = draw(rng, 3.5, 4.5);
      const double t_pass = t + (g + 15.0) / dv;
      const double tr = std::round(std::max(tl + dur + 1.0, t_pass) * 10.0) / 10.0;
      tg.lane_changes = {{tl, dur, 3.5}, {tr, dur, -3.5}};
      t_first = tl;
      t_end = tr + dur + 2.0;
    } else if (name == "ego-overtake") {
      tg.lane = 1;
      tg.v0 = ve;
      const double g = draw(rng, 15.0, 25.0);
      tg.x0 = ego.x(t) + g;
      const double ta = t + 1.0;
      const double adur = draw(rng, 3.0, 4.0);
      const double a = draw(rng, 1.2, 2.0);
      ego.accels.push_back({ta, ta + adur, a});
      const double tl = ta + draw(rng, 0.5, 1.5);
      const double dur = draw(rng, 3.5, 4.5);
      // First 0.1 s instant after the lane change at which the ego leads by 12 m.
      double tr = tl + dur + 1.0;
      while (ego.x(tr) - tg.x(tr) < 12.0) tr = std::round((tr + 0.1) * 10.0) / 10.0;
      ego.lane_changes.push_back({tl, dur, 3.5});
      ego.lane_changes.push_back({tr, dur, -3.5});
      t_first = ta;
      t_end = tr + dur + 2.0;
    } else {
      fail(ErrorKind::InvalidArgument, "no generator for pattern " + name);
    }
    tg.t_end = t_end;
    found.push_back({name, tg.actor, t_first, t_end});
    targets.push_back(std::move(tg));
    t = std::round((t_end + 3.0) * 10.0) / 10.0;
  }
  ego.t_end = t;
  s.actors.push_back(ego);
  for (auto & tg : targets) s.actors.push_back(std::move(tg));
  if (truth != nullptr) *truth = std::move(found);
  return s;
}

LogScript random_log_script(std::uint64_t seed, std::vector<PatternInstance> * truth)
{
  CounterRng rng(derive_seed(seed, "random-log"));
  static const std::vector<std::string> names{"cut-in", "ego-overtake", "lead-braking",
                                              "overtake-of-ego"};
  const int count = 1 + static_cast<int>(rng.uniform() * 3.0);
  std::vector<std::string> chosen;
  for (int i = 0; i < count; ++i) chosen.push_back(names[static_cast<int>(rng.uniform() * 4.0) % 4]);
  LogScript s = pattern_instances_script(chosen, derive_seed(seed, 1), truth);
  s.source_id = "random-" + std::to_string(seed);
  static const std::vector<std::string> weathers{"clear",      "rain",       "light-rain",
                                                 "heavy-rain", "snow",       "light-snow",
                                                 "heavy-snow", "fog"};
  static const std::vector<std::string> roads{"motorway", "motorway-straight", "on-ramp", "urban",
                                              "rural"};
  if (rng.uniform() < 0.8) s.metadata["weather"] = {weathers[static_cast<std::size_t>(rng.uniform() * 8.0) % 8]};
  if (rng.uniform() < 0.8) s.metadata["road"] = {roads[static_cast<std::size_t>(rng.uniform() * 5.0) % 5]};
  return s;
}

DrivingLog random_log(std::uint64_t seed, std::vector<PatternInstance> * truth)
{
  DrivingLog log = render_log(random_log_script(seed, truth));
  CounterRng rng(derive_seed(seed, "spikes"));
  const int spikes = static_cast<int>(rng.uniform() * 3.0);
  for (int i = 0; i < spikes; ++i) {
    auto & track = log.actors[static_cast<std::size_t>(rng.uniform() * log.actors.size())];
    if (track.samples.size() < 20) continue;
    const std::size_t k = 5 + static_cast<std::size_t>(rng.uniform() * (track.samples.size() - 10));
    track.samples[k].x += rng.uniform() < 0.5 ? 80.0 : -80.0;
  }
  return log;
}

}  // namespace scenario_forge
