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

#include "scenario_forge/mining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "scenario_forge/error.hpp"
#include "scenario_forge/format.hpp"

namespace scenario_forge
{

namespace
{

constexpr double kTimeEps = 1e-9;

struct PredicateName
{
  Predicate predicate;
  std::string_view name;
};

constexpr PredicateName kPredicates[] = {
  {Predicate::Any, "any"},
  {Predicate::TargetAheadAtStart, "target-ahead-at-start"},
  {Predicate::TargetBehindAtStart, "target-behind-at-start"},
  {Predicate::TargetAheadAtEnd, "target-ahead-at-end"},
  {Predicate::TargetBehindAtEnd, "target-behind-at-end"},
  {Predicate::TargetAheadSameLaneAtStart, "target-ahead-same-lane-at-start"},
  {Predicate::TargetAheadSameLaneAtEnd, "target-ahead-same-lane-at-end"},
};

/// Sample of `track` at time t, or null when the track does not cover t.
const Sample * sample_at(const ActorTrack & track, double t, double dt)
{
  if (track.samples.empty()) return nullptr;
  if (t < track.t_begin() - 0.5 * dt || t > track.t_end() + 0.5 * dt) return nullptr;
  return &track.samples[track.index_at(t)];
}

const Sample & clamped_sample(const ActorTrack & track, double t)
{
  return track.samples[track.index_at(std::clamp(t, track.t_begin(), track.t_end()))];
}

/// Signed offset of `other` along the ego heading.
double longitudinal_offset(const Sample & ego, const Sample & other)
{
  return (other.x - ego.x) * std::cos(ego.heading) + (other.y - ego.y) * std::sin(ego.heading);
}

bool holds(Predicate predicate, const ActorTrack & ego, const ActorTrack & target,
           const Activity & act, double dt)
{
  if (predicate == Predicate::Any) return true;
  const bool at_start = predicate == Predicate::TargetAheadAtStart ||
                        predicate == Predicate::TargetBehindAtStart ||
                        predicate == Predicate::TargetAheadSameLaneAtStart;
  const double t = at_start ? act.t_start : act.t_end;
  const Sample * e = sample_at(ego, t, dt);
  const Sample * o = sample_at(target, t, dt);
  if (e == nullptr || o == nullptr) return false;
  const double lon = longitudinal_offset(*e, *o);
  switch (predicate) {
    case Predicate::TargetAheadAtStart:
    case Predicate::TargetAheadAtEnd:
      return lon > 0.0;
    case Predicate::TargetBehindAtStart:
    case Predicate::TargetBehindAtEnd:
      return lon < 0.0;
    case Predicate::TargetAheadSameLaneAtStart:
    case Predicate::TargetAheadSameLaneAtEnd:
      return lon > 0.0 && e->lane_index == o->lane_index;
    case Predicate::Any:
      break;
  }
  return true;
}

/// Smallest ego distance over [t0, t1]; infinity when the tracks never overlap.
double min_distance(const ActorTrack & ego, const ActorTrack & other, double t0, double t1, double dt)
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto & s : other.samples) {
    if (s.t < t0 - kTimeEps || s.t > t1 + kTimeEps) continue;
    const Sample * e = sample_at(ego, s.t, dt);
    if (e == nullptr) continue;
    best = std::min(best, std::hypot(s.x - e->x, s.y - e->y));
  }
  return best;
}

struct Match
{
  std::size_t pattern = 0;
  ActorId target;
  /// Indices into the decomposition's activity list, one per element.
  std::vector<std::size_t> acts;
  double t0 = 0.0;
  double t1 = 0.0;
};

std::vector<Match> match_pattern(std::size_t pattern_index, const ActivityPattern & pattern,
                                 const DrivingLog & log, const LogDecomposition & dec,
                                 const MiningOptions & options)
{
  const ActorTrack & ego = log.ego();
  std::vector<ActorId> targets;
  for (const auto & tr : log.actors) {
    if (!tr.is_ego) targets.push_back(tr.actor);
  }
  std::sort(targets.begin(), targets.end());

  std::vector<Match> out;
  for (const auto & target_id : targets) {
    const ActorTrack & target = *log.find(target_id);
    // Candidate activity indices per element, in start order.
    std::vector<std::vector<std::size_t>> cands(pattern.elements.size());
    for (std::size_t e = 0; e < pattern.elements.size(); ++e) {
      const auto & el = pattern.elements[e];
      const ActorId & actor = el.role == "ego" ? ego.actor : target_id;
      for (std::size_t i = 0; i < dec.activities.size(); ++i) {
        const Activity & a = dec.activities[i];
        if (a.actor == actor && a.channel == el.channel && a.mode == el.mode &&
            holds(el.predicate, ego, target, a, log.dt)) {
          cands[e].push_back(i);
        }
      }
      std::stable_sort(cands[e].begin(), cands[e].end(), [&](std::size_t a, std::size_t b) {
        return dec.activities[a].t_start < dec.activities[b].t_start;
      });
    }
    for (std::size_t first : cands[0]) {
      Match m{pattern_index, target_id, {first}, dec.activities[first].t_start,
              dec.activities[first].t_end};
      bool complete = true;
      for (std::size_t e = 1; e < pattern.elements.size() && complete; ++e) {
        const double prev_start = dec.activities[m.acts.back()].t_start;
        complete = false;
        for (std::size_t c : cands[e]) {
          const Activity & a = dec.activities[c];
          if (a.t_start + kTimeEps < prev_start) continue;
          if (std::find(m.acts.begin(), m.acts.end(), c) != m.acts.end()) continue;
          m.acts.push_back(c);
          m.t0 = std::min(m.t0, a.t_start);
          m.t1 = std::max(m.t1, a.t_end);
          complete = true;
          break;
        }
      }
      if (!complete || m.t1 - m.t0 > pattern.max_span + kTimeEps) continue;
      if (min_distance(ego, target, m.t0, m.t1, log.dt) > options.relevance_radius) continue;
      out.push_back(std::move(m));
    }
  }
  return out;
}

Activity clip(const Activity & act, double t0, double t1, const ActorTrack & track,
              const ModeThresholds & th)
{
  Activity out = act;
  out.t_start = std::max(act.t_start, t0);
  out.t_end = std::min(act.t_end, t1);
  if (out.t_start != act.t_start || out.t_end != act.t_end) {
    out.params = parametrize_activity(out, track, th);
  }
  return out;
}

ScenarioRecord build_record(const Match & m, const ActivityPattern & pattern, const DrivingLog & log,
                            const LogDecomposition & dec, const MiningOptions & options)
{
  const ActorTrack & ego = log.ego();
  const ActorTrack & target = *log.find(m.target);
  ScenarioRecord rec;
  rec.ego_actor = ego.actor;
  rec.t_start = m.t0;
  rec.t_end = m.t1;
  rec.source = log.source_id;
  rec.pattern = pattern.name;
  rec.roles = {{"ego", ego.actor}, {"target", target.actor}};

  std::set<ActorId> relevant{ego.actor, target.actor};
  for (const auto & tr : log.actors) {
    if (min_distance(ego, tr, m.t0, m.t1, log.dt) <= options.relevance_radius) {
      relevant.insert(tr.actor);
    }
  }
  rec.actors.assign(relevant.begin(), relevant.end());

  std::map<std::size_t, std::size_t> position;
  for (const auto & actor : rec.actors) {
    const ActorTrack & track = *log.find(actor);
    for (Channel ch : {Channel::Longitudinal, Channel::Lateral}) {
      for (std::size_t i = 0; i < dec.activities.size(); ++i) {
        const Activity & a = dec.activities[i];
        if (a.actor != actor || a.channel != ch) continue;
        if (a.t_end <= m.t0 + kTimeEps || a.t_start >= m.t1 - kTimeEps) continue;
        position[i] = rec.activities.size();
        rec.activities.push_back(clip(a, m.t0, m.t1, track, options.thresholds));
      }
    }
  }
  for (std::size_t i : m.acts) rec.matched.push_back(position.at(i));

  for (const auto & ev : dec.events) {
    if (relevant.count(ev.actor) != 0 && ev.time >= m.t0 - kTimeEps &&
        ev.time <= m.t1 + kTimeEps) {
      rec.events.push_back(ev);
    }
  }
  std::stable_sort(rec.events.begin(), rec.events.end(), [](const Event & a, const Event & b) {
    return a.actor != b.actor ? a.actor < b.actor : a.time < b.time;
  });

  const Sample & e0 = clamped_sample(ego, m.t0);
  const Sample & o0 = clamped_sample(target, m.t0);
  rec.initial_conditions = {
    {"ego_v", e0.v},
    {"target_v", o0.v},
    {"gap", longitudinal_offset(e0, o0)},
    {"ego_lane", static_cast<double>(e0.lane_index)},
    {"target_lane", static_cast<double>(o0.lane_index)},
  };

  for (const char * key : {"friction", "visibility"}) {
    const auto it = log.metadata.find(key);
    if (it == log.metadata.end() || it->second.empty()) continue;
    if (auto v = parse_double(it->second.front())) rec.static_env.scenery[key] = *v;
  }
  return rec;
}

}  // namespace

std::string_view to_string(Predicate predicate)
{
  for (const auto & p : kPredicates) {
    if (p.predicate == predicate) return p.name;
  }
  return "any";
}

Predicate parse_predicate(std::string_view text)
{
  for (const auto & p : kPredicates) {
    if (p.name == text) return p.predicate;
  }
  fail(ErrorKind::ParseError, "unknown predicate '" + std::string(text) + "'");
}

void validate_pattern(const ActivityPattern & pattern)
{
  if (pattern.name.empty()) fail(ErrorKind::InvalidArgument, "pattern needs a name");
  if (pattern.elements.empty()) {
    fail(ErrorKind::InvalidArgument, "pattern " + pattern.name + " has no elements");
  }
  if (!(pattern.max_span > 0.0)) {
    fail(ErrorKind::InvalidArgument, "pattern " + pattern.name + " needs max_span > 0");
  }
  for (const auto & el : pattern.elements) {
    if (el.role != "ego" && el.role != "target") {
      fail(ErrorKind::InvalidArgument, "pattern " + pattern.name + ": unknown role " + el.role);
    }
    if (channel_of(el.mode) != el.channel) {
      fail(ErrorKind::InvalidArgument,
           "pattern " + pattern.name + ": mode " + std::string(to_string(el.mode)) +
             " is not on channel " + std::string(to_string(el.channel)));
    }
  }
}

std::vector<ActivityPattern> default_patterns()
{
  using C = Channel;
  using M = Mode;
  using P = Predicate;
  return {
    {"cut-in",
     {{"target", C::Lateral, M::LaneChangeRight, P::TargetAheadSameLaneAtEnd}},
     20.0,
     {"target-maneuver:cut-in"}},
    {"ego-overtake",
     {{"ego", C::Longitudinal, M::Accelerating, P::Any},
      {"ego", C::Lateral, M::LaneChangeLeft, P::TargetAheadSameLaneAtStart},
      {"ego", C::Lateral, M::LaneChangeRight, P::TargetBehindAtEnd}},
     20.0,
     {"target-maneuver:overtaking"}},
    {"lead-braking",
     {{"target", C::Longitudinal, M::Braking, P::TargetAheadSameLaneAtStart}},
     20.0,
     {"target-maneuver:lead-braking"}},
    {"overtake-of-ego",
     {{"target", C::Lateral, M::LaneChangeLeft, P::TargetBehindAtStart},
      {"target", C::Lateral, M::LaneChangeRight, P::TargetAheadAtEnd}},
     20.0,
     {"target-maneuver:passing-ego"}},
  };
}

std::vector<ScenarioRecord> mine_scenarios(const DrivingLog & log,
                                           const LogDecomposition & decomposition,
                                           std::span<const ActivityPattern> patterns,
                                           const MiningOptions & options)
{
  std::vector<Match> matches;
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    validate_pattern(patterns[p]);
    auto found = match_pattern(p, patterns[p], log, decomposition, options);
    matches.insert(matches.end(), std::make_move_iterator(found.begin()),
                   std::make_move_iterator(found.end()));
  }
  std::sort(matches.begin(), matches.end(), [&](const Match & a, const Match & b) {
    if (a.t0 != b.t0) return a.t0 < b.t0;
    if (a.t1 - a.t0 != b.t1 - b.t0) return a.t1 - a.t0 > b.t1 - b.t0;
    if (patterns[a.pattern].name != patterns[b.pattern].name) {
      return patterns[a.pattern].name < patterns[b.pattern].name;
    }
    return a.target < b.target;
  });

  // Consecutive scenarios may share a boundary instant but not an interior.
  std::vector<const Match *> accepted;
  for (const auto & m : matches) {
    const bool clash = std::any_of(accepted.begin(), accepted.end(), [&](const Match * a) {
      return m.t0 < a->t1 - kTimeEps && m.t1 > a->t0 + kTimeEps;
    });
    if (!clash) accepted.push_back(&m);
  }

  std::vector<ScenarioRecord> out;
  for (const Match * m : accepted) {
    out.push_back(build_record(*m, patterns[m->pattern], log, decomposition, options));
  }
  return out;
}

ScenarioRecord auto_tag(ScenarioRecord record, const DrivingLog & log,
                        std::span<const ActivityPattern> patterns, const Taxonomy & taxonomy)
{
  TagSet tags;
  for (const auto & p : patterns) {
    if (p.name == record.pattern) tags.insert(p.tags.begin(), p.tags.end());
  }
  for (const auto & [key, values] : log.metadata) {
    if (taxonomy.find_tree(key) == nullptr) continue;
    for (const auto & v : values) tags.insert(key + ":" + v);
  }
  return assign_tags(std::move(record), tags, taxonomy);
}

namespace
{

int majority(const std::vector<int> & values)
{
  std::map<int, int> counts;
  for (int v : values) ++counts[v];
  int best = 0;
  int best_count = -1;
  for (const auto & [v, c] : counts) {
    if (c > best_count) {
      best = v;
      best_count = c;
    }
  }
  return best;
}

double initial(const ScenarioRecord & rec, const std::string & key)
{
  const auto it = rec.initial_conditions.find(key);
  if (it == rec.initial_conditions.end()) {
    fail(ErrorKind::InvalidArgument, "record " + rec.id + " lacks initial condition " + key);
  }
  return it->second;
}

}  // namespace

ClassModel extract_class(std::span<const ScenarioRecord> records)
{
  if (records.empty()) fail(ErrorKind::EmptyInput, "no records to extract a class from");
  const ScenarioRecord & first = records.front();
  ClassModel model;
  model.cls.name = first.pattern;
  model.cls.required_tags = first.tags;
  for (std::size_t idx : first.matched) {
    const Activity & a = first.activities.at(idx);
    model.cls.activity_pattern.push_back(
      {a.actor == first.ego_actor ? "ego" : "target", a.channel, a.mode});
    model.slot_params.push_back({param_fields(a.mode), {}});
  }
  model.context.fields = {"ego_v", "gap", "target_v"};
  for (std::size_t k = 1; k < first.matched.size(); ++k) {
    model.context.fields.push_back("offset_" + std::to_string(k));
  }

  std::vector<int> ego_lanes;
  std::vector<int> offsets;
  for (const auto & rec : records) {
    if (rec.pattern != first.pattern || rec.matched.size() != first.matched.size()) {
      fail(ErrorKind::HeterogeneousPattern,
           "records mix patterns '" + first.pattern + "' and '" + rec.pattern + "'");
    }
    TagSet common;
    std::set_intersection(model.cls.required_tags.begin(), model.cls.required_tags.end(),
                          rec.tags.begin(), rec.tags.end(), std::inserter(common, common.end()));
    model.cls.required_tags = std::move(common);

    std::vector<double> ctx{initial(rec, "ego_v"), initial(rec, "gap"), initial(rec, "target_v")};
    for (std::size_t k = 0; k < rec.matched.size(); ++k) {
      const Activity & a = rec.activities.at(rec.matched[k]);
      const ActivitySlot & slot = model.cls.activity_pattern[k];
      if (a.mode != slot.mode || (a.actor == rec.ego_actor) != (slot.role == "ego")) {
        fail(ErrorKind::HeterogeneousPattern, "record " + rec.id + " deviates from slot layout");
      }
      std::vector<double> row;
      for (const auto & f : model.slot_params[k].fields) row.push_back(a.params.get(f));
      model.slot_params[k].rows.push_back(std::move(row));
      if (k > 0) {
        ctx.push_back(a.t_start - rec.activities.at(rec.matched[k - 1]).t_start);
      }
    }
    model.context.rows.push_back(std::move(ctx));
    const int ego_lane = static_cast<int>(std::lround(initial(rec, "ego_lane")));
    ego_lanes.push_back(ego_lane);
    offsets.push_back(static_cast<int>(std::lround(initial(rec, "target_lane"))) - ego_lane);
    model.records.push_back(rec.id);
  }
  model.ego_lane = majority(ego_lanes);
  model.target_lane_offset = majority(offsets);
  return model;
}

}  // namespace scenario_forge
