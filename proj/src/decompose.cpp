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

#include "scenario_forge/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scenario_forge/error.hpp"
#include "scenario_forge/format.hpp"

namespace scenario_forge
{

namespace
{

struct Run
{
  Mode mode;
  std::size_t begin;  // first sample
};

std::vector<Run> to_runs(const std::vector<Mode> & modes)
{
  std::vector<Run> runs;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (runs.empty() || runs.back().mode != modes[i]) runs.push_back({modes[i], i});
  }
  return runs;
}

double run_duration(const std::vector<Run> & runs, std::size_t k, const std::vector<Sample> & s)
{
  const std::size_t end = k + 1 < runs.size() ? runs[k + 1].begin : s.size() - 1;
  return s[end].t - s[runs[k].begin].t;
}

/// Merges runs shorter than min_duration (or empty) into their longer neighbour.
void merge_short_runs(std::vector<Mode> & modes, const std::vector<Sample> & s, double min_duration)
{
  if (modes.size() < 2) return;
  while (true) {
    auto runs = to_runs(modes);
    if (runs.size() < 2) return;
    std::size_t shortest = runs.size();
    double shortest_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < runs.size(); ++k) {
      const double d = run_duration(runs, k, s);
      if ((d < min_duration - 1e-9 || d <= 0.0) && d < shortest_d) {
        shortest = k;
        shortest_d = d;
      }
    }
    if (shortest == runs.size()) return;
    std::size_t target;
    if (shortest == 0) {
      target = 1;
    } else if (shortest + 1 == runs.size()) {
      target = shortest - 1;
    } else {
      target = run_duration(runs, shortest + 1, s) > run_duration(runs, shortest - 1, s)
                 ? shortest + 1 : shortest - 1;
    }
    const std::size_t end = shortest + 1 < runs.size() ? runs[shortest + 1].begin : modes.size();
    std::fill(modes.begin() + static_cast<std::ptrdiff_t>(runs[shortest].begin),
              modes.begin() + static_cast<std::ptrdiff_t>(end), runs[target].mode);
  }
}

std::vector<Event> events_from_modes(const ActorTrack & track, Channel channel,
                                     const std::vector<Mode> & modes)
{
  std::vector<Event> events;
  for (std::size_t i = 1; i < modes.size(); ++i) {
    if (modes[i] != modes[i - 1]) {
      events.push_back(Event{track.actor, track.samples[i].t, channel, modes[i - 1], modes[i]});
    }
  }
  return events;
}

double wrap(double a) { return std::remainder(a, 2.0 * M_PI); }

}  // namespace

void ModeThresholds::validate() const
{
  if (!(a_on > 0 && a_off > 0 && a_off <= a_on)) {
    fail(ErrorKind::InvalidArgument, "thresholds require 0 < a_off <= a_on");
  }
  if (!(lat_rate_on > 0 && lat_rate_off > 0 && lat_rate_off <= lat_rate_on)) {
    fail(ErrorKind::InvalidArgument, "thresholds require 0 < lat_rate_off <= lat_rate_on");
  }
  if (min_duration < 0 || !(heading_window > 0) || lane_change_guard < 0 || lat_settle < 0) {
    fail(ErrorKind::InvalidArgument, "invalid duration/window thresholds");
  }
}

std::vector<Mode> longitudinal_mode_samples(const ActorTrack & track, const ModeThresholds & th,
                                            bool merge)
{
  const auto & s = track.samples;
  std::vector<Mode> modes(s.size(), Mode::Cruising);
  Mode mode = Mode::Cruising;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = s[i].a;
    if (mode == Mode::Braking && a > -th.a_off) mode = Mode::Cruising;
    if (mode == Mode::Accelerating && a < th.a_off) mode = Mode::Cruising;
    if (mode == Mode::Cruising) {
      if (a < -th.a_on) mode = Mode::Braking;
      else if (a > th.a_on) mode = Mode::Accelerating;
    }
    modes[i] = mode;
  }
  if (merge) merge_short_runs(modes, s, th.min_duration);
  return modes;
}

std::vector<double> reference_heading(const ActorTrack & track, const ModeThresholds & th)
{
  const auto & s = track.samples;
  const std::size_t n = s.size();
  std::vector<double> tangent(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i > 0 ? i - 1 : i;
    const std::size_t b = i + 1 < n ? i + 1 : i;
    const double dx = s[b].x - s[a].x;
    const double dy = s[b].y - s[a].y;
    tangent[i] = (a != b && std::hypot(dx, dy) > 1e-6) ? std::atan2(dy, dx) : s[i].heading;
  }

  // Samples near a lane-index change belong to a manoeuvre, not the road.
  std::vector<bool> keeping(n, true);
  for (std::size_t i = 1; i < n; ++i) {
    if (s[i].lane_index == s[i - 1].lane_index) continue;
    const double tc = s[i].t;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(s[j].t - tc) <= th.lane_change_guard) keeping[j] = false;
    }
  }

  std::vector<double> ref(n, 0.0);
  std::vector<std::size_t> anchors;
  const double half = 0.5 * th.heading_window;
  for (std::size_t i = 0; i < n; ++i) {
    if (!keeping[i]) continue;
    double sx = 0.0, sy = 0.0;
    for (std::size_t j = i; j-- > 0 && s[i].t - s[j].t <= half + 1e-9;) {
      if (keeping[j]) { sx += std::cos(tangent[j]); sy += std::sin(tangent[j]); }
    }
    for (std::size_t j = i; j < n && s[j].t - s[i].t <= half + 1e-9; ++j) {
      if (keeping[j]) { sx += std::cos(tangent[j]); sy += std::sin(tangent[j]); }
    }
    ref[i] = std::atan2(sy, sx);
    anchors.push_back(i);
  }

  if (anchors.empty()) {
    double sx = 0.0, sy = 0.0;
    for (double a : tangent) { sx += std::cos(a); sy += std::sin(a); }
    std::fill(ref.begin(), ref.end(), std::atan2(sy, sx));
    return ref;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (keeping[i]) continue;
    auto it = std::lower_bound(anchors.begin(), anchors.end(), i);
    if (it == anchors.begin()) {
      ref[i] = ref[anchors.front()];
    } else if (it == anchors.end()) {
      ref[i] = ref[anchors.back()];
    } else {
      const std::size_t r = *it;
      const std::size_t l = *(it - 1);
      const double f = (s[i].t - s[l].t) / (s[r].t - s[l].t);
      ref[i] = wrap(ref[l] + f * wrap(ref[r] - ref[l]));
    }
  }
  return ref;
}

std::vector<double> lateral_velocity(const ActorTrack & track, const ModeThresholds & th)
{
  const auto & s = track.samples;
  const std::size_t n = s.size();
  std::vector<double> v(n, 0.0);
  if (n < 2) return v;
  const auto ref = reference_heading(track, th);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i > 0 ? i - 1 : i;
    const std::size_t b = i + 1 < n ? i + 1 : i;
    const double dt = s[b].t - s[a].t;
    const double vx = (s[b].x - s[a].x) / dt;
    const double vy = (s[b].y - s[a].y) / dt;
    v[i] = -std::sin(ref[i]) * vx + std::cos(ref[i]) * vy;
  }
  return v;
}

namespace
{

/// Lateral speeds below this are rounding residue of a straight path [m/s].
constexpr double kStill = 1e-9;

}  // namespace

std::vector<Mode> lateral_mode_samples(const ActorTrack & track, const ModeThresholds & th,
                                       bool merge)
{
  const auto & s = track.samples;
  const std::size_t n = s.size();
  std::vector<Mode> modes(n, Mode::LaneFollowing);
  if (n < 3) return modes;
  const auto v = lateral_velocity(track, th);

  std::size_t i = 0;
  while (i < n) {
    if (std::abs(v[i]) <= th.lat_rate_on) {
      ++i;
      continue;
    }
    const double sign = v[i] > 0 ? 1.0 : -1.0;
    std::size_t lo = i;
    while (lo > 0 && sign * v[lo - 1] > th.lat_rate_off) --lo;
    std::size_t hi = i;
    while (hi < n && sign * v[hi] > th.lat_rate_off) ++hi;
    // Follow the decaying tails down to the lateral-speed minimum.
    const double t_lo = s[lo].t;
    while (lo > 0 && t_lo - s[lo - 1].t <= th.lat_settle + 1e-9 && sign * v[lo - 1] > kStill &&
           sign * v[lo - 1] < sign * v[lo]) {
      --lo;
    }
    const double t_hi = s[std::min(hi, n - 1)].t;
    while (hi > 0 && hi < n && s[hi].t - t_hi <= th.lat_settle + 1e-9 && sign * v[hi] > kStill &&
           sign * v[hi] < sign * v[hi - 1]) {
      ++hi;
    }
    const std::size_t start = lo;
    const std::size_t stop = std::min(hi, n - 1);
    bool lane_changed = false;
    for (std::size_t j = start + 1; j <= stop; ++j) {
      if (s[j].lane_index != s[j - 1].lane_index) lane_changed = true;
    }
    if (lane_changed) {
      const Mode m = sign > 0 ? Mode::LaneChangeLeft : Mode::LaneChangeRight;
      // Central differences leave the last moving sample non-zero; it opens the next mode.
      const std::size_t end = std::max(hi - 1, start + 1);
      for (std::size_t j = start; j < end && j < n; ++j) modes[j] = m;
    }
    i = std::max(hi, i + 1);
  }
  if (merge) merge_short_runs(modes, s, th.min_duration);
  return modes;
}

std::vector<Event> detect_longitudinal_events(const ActorTrack & track, const ModeThresholds & th)
{
  return events_from_modes(track, Channel::Longitudinal, longitudinal_mode_samples(track, th));
}

std::vector<Event> detect_lateral_events(const ActorTrack & track, const ModeThresholds & th)
{
  return events_from_modes(track, Channel::Lateral, lateral_mode_samples(track, th));
}

std::vector<Activity> segment_activities(std::span<const Event> events, const ActorTrack & track,
                                         Channel channel, Mode initial, const ModeThresholds & th)
{
  if (track.samples.empty()) {
    fail(ErrorKind::EmptyTrack, "track " + track.actor + " has no samples");
  }
  Mode current = initial;
  double t_prev = track.t_begin();
  std::vector<Activity> out;
  for (const auto & e : events) {
    if (e.channel != channel || e.actor != track.actor || e.from_mode != current ||
        e.from_mode == e.to_mode || channel_of(e.to_mode) != channel) {
      fail(ErrorKind::InconsistentEvents, "event at t=" + format_double(e.time) + " for " +
                                            e.actor + " does not continue mode " +
                                            std::string(to_string(current)));
    }
    if (!(e.time > t_prev) || e.time > track.t_end()) {
      fail(ErrorKind::InconsistentEvents, "events not strictly increasing within the track");
    }
    out.push_back(Activity{track.actor, channel, current, t_prev, e.time, {}});
    current = e.to_mode;
    t_prev = e.time;
  }
  if (track.t_end() > t_prev || out.empty()) {
    out.push_back(Activity{track.actor, channel, current, t_prev, track.t_end(), {}});
  } else if (!out.empty()) {
    fail(ErrorKind::InconsistentEvents, "last event coincides with end of track");
  }
  for (auto & a : out) a.params = parametrize_activity(a, track, th);
  return out;
}

ActivityParams parametrize_activity(const Activity & activity, const ActorTrack & track,
                                    const ModeThresholds & th)
{
  ActivityParams p;
  p.set("duration", activity.t_end - activity.t_start);
  const std::size_t i0 = track.index_at(activity.t_start);
  const std::size_t i1 = track.index_at(activity.t_end);
  const auto & s = track.samples;
  if (activity.channel == Channel::Longitudinal) {
    p.set("v_start", s[i0].v);
    p.set("delta_v", s[i1].v - s[i0].v);
  } else if (is_lane_change(activity.mode)) {
    const auto ref = reference_heading(track, th);
    const double psi = ref[(i0 + i1) / 2];
    const double dx = s[i1].x - s[i0].x;
    const double dy = s[i1].y - s[i0].y;
    p.set("lateral_displacement", -std::sin(psi) * dx + std::cos(psi) * dy);
  }
  return p;
}

std::vector<Activity> LogDecomposition::activities_of(const ActorId & actor, Channel channel) const
{
  std::vector<Activity> out;
  for (const auto & a : activities) {
    if (a.actor == actor && a.channel == channel) out.push_back(a);
  }
  return out;
}

std::vector<Event> LogDecomposition::events_of(const ActorId & actor, Channel channel) const
{
  std::vector<Event> out;
  for (const auto & e : events) {
    if (e.actor == actor && e.channel == channel) out.push_back(e);
  }
  return out;
}

LogDecomposition decompose_log(const DrivingLog & log, const ModeThresholds & th)
{
  th.validate();
  LogDecomposition out;
  out.source_id = log.source_id;
  for (const auto & track : log.actors) {
    if (track.samples.empty()) continue;
    for (Channel ch : {Channel::Longitudinal, Channel::Lateral}) {
      const auto modes = ch == Channel::Longitudinal ? longitudinal_mode_samples(track, th)
                                                     : lateral_mode_samples(track, th);
      const auto events = events_from_modes(track, ch, modes);
      auto acts = segment_activities(events, track, ch, modes.front(), th);
      out.events.insert(out.events.end(), events.begin(), events.end());
      out.activities.insert(out.activities.end(), acts.begin(), acts.end());
    }
  }
  return out;
}

std::string activity_timeline_csv(const LogDecomposition & d)
{
  std::string out = "actor,channel,mode,t_start,t_end,duration,v_start,delta_v,lateral_displacement\n";
  auto field = [](const ActivityParams & p, const char * name) {
    return p.has(name) ? format_double(p.get(name)) : std::string{};
  };
  for (const auto & a : d.activities) {
    out += a.actor + ',' + std::string(to_string(a.channel)) + ',' + std::string(to_string(a.mode)) +
           ',' + format_double(a.t_start) + ',' + format_double(a.t_end) + ',' +
           field(a.params, "duration") + ',' + field(a.params, "v_start") + ',' +
           field(a.params, "delta_v") + ',' + field(a.params, "lateral_displacement") + '\n';
  }
  return out;
}

}  // namespace scenario_forge
