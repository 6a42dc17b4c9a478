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

#include "scenario_forge/serialize.hpp"

#include <cmath>
#include <limits>
#include <optional>

#if __has_include(<json.hpp>)
#include <json.hpp>
#else
#include <nlohmann/json.hpp>
#endif

#include "scenario_forge/error.hpp"
#include "scenario_forge/format.hpp"

namespace nlohmann
{

template <class T>
struct adl_serializer<std::optional<T>>
{
  static void to_json(json & j, const std::optional<T> & v)
  {
    if (v) {
      j = *v;
    } else {
      j = nullptr;
    }
  }
  static void from_json(const json & j, std::optional<T> & v)
  {
    if (j.is_null()) {
      v.reset();
    } else {
      v = j.get<T>();
    }
  }
};

}  // namespace nlohmann

namespace scenario_forge
{

using Json = nlohmann::json;

// Enumerations travel as their string forms.
void to_json(Json & j, Channel v) { j = std::string(to_string(v)); }
void from_json(const Json & j, Channel & v) { v = parse_channel(j.get<std::string>()); }
void to_json(Json & j, Mode v) { j = std::string(to_string(v)); }
void from_json(const Json & j, Mode & v) { v = parse_mode(j.get<std::string>()); }
void to_json(Json & j, Predicate v) { j = std::string(to_string(v)); }
void from_json(const Json & j, Predicate & v) { v = parse_predicate(j.get<std::string>()); }
void to_json(Json & j, FaultInjection::Kind v) { j = std::string(to_string(v)); }
void from_json(const Json & j, FaultInjection::Kind & v)
{
  v = parse_fault_kind(j.get<std::string>());
}
void to_json(Json & j, EgoDirective::Kind v)
{
  j = v == EgoDirective::Kind::LaneChange ? "lane-change" : "set-speed";
}
void from_json(const Json & j, EgoDirective::Kind & v)
{
  const auto s = j.get<std::string>();
  if (s == "lane-change") {
    v = EgoDirective::Kind::LaneChange;
  } else if (s == "set-speed") {
    v = EgoDirective::Kind::SetSpeed;
  } else {
    fail(ErrorKind::ParseError, "unknown directive kind '" + s + "'");
  }
}

namespace
{

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

/// Null stands for +infinity (the only non-finite value the schema produces).
double number_or_inf(const Json & j, const char * key)
{
  if (!j.contains(key) || j.at(key).is_null()) return std::numeric_limits<double>::infinity();
  return j.at(key).get<double>();
}

}  // namespace

// Parameters are stored by name; the mode restores storage order on load.
void to_json(Json & j, const ActivityParams & p)
{
  j = Json::object();
  for (const auto & [name, value] : p.fields()) j[name] = value;
}
void from_json(const Json & j, ActivityParams & p)
{
  p = ActivityParams();
  for (const auto & [name, value] : j.items()) p.set(name, value.get<double>());
}

void to_json(Json & j, const Activity & a)
{
  j = Json{{"actor", a.actor},     {"channel", a.channel}, {"mode", a.mode},
           {"t_start", a.t_start}, {"t_end", a.t_end},     {"params", a.params}};
}
void from_json(const Json & j, Activity & a)
{
  a.actor = j.at("actor").get<std::string>();
  a.channel = j.at("channel").get<Channel>();
  a.mode = j.at("mode").get<Mode>();
  a.t_start = j.at("t_start").get<double>();
  a.t_end = j.at("t_end").get<double>();
  const Json & p = j.at("params");
  a.params = ActivityParams();
  for (const auto & name : param_fields(a.mode)) {
    if (p.contains(name)) a.params.set(name, p.at(name).get<double>());
  }
  for (const auto & [name, value] : p.items()) {
    if (!a.params.has(name)) a.params.set(name, value.get<double>());
  }
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Tag, id, label, layer, parent)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TagTree, name, nodes)

void to_json(Json & j, const Taxonomy & t)
{
  Json trees = Json::array();
  for (const auto & [name, tree] : t.trees()) trees.push_back(tree);
  j = Json{{"trees", trees}};
}
void from_json(const Json & j, Taxonomy & t)
{
  t = Taxonomy();
  for (const auto & tree : j.at("trees")) t.register_tree(tree.get<TagTree>());
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Event, actor, time, channel, from_mode, to_mode)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(StaticEnvironment, road_ref, scenery, scenery_tags)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ScenarioRecord, id, ego_actor, actors, activities,
                                                events, tags, t_start, t_end, source, static_env,
                                                pattern, roles, matched, initial_conditions)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ActivitySlot, role, channel, mode)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ScenarioClass, name, required_tags, activity_pattern)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LogDecomposition, source_id, events, activities)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ParameterDensity, field_names, samples, bandwidth)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ParamMatrix, fields, rows)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ClassModel, cls, slot_params, context, ego_lane,
                                                target_lane_offset, records)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ClassDensities, model, slots, context)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PatternElement, role, channel, mode, predicate)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ActivityPattern, name, elements, max_span, tags)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Point2, x, y)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Lane, id, centerline, width, successors)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RoadNetwork, id, lanes, tags)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TrajectorySample, t, x, y, v, heading, a, lane_index)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DynamicObject, actor, type, length, width, trajectory)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EgoDirective, kind, t, value, duration)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EgoAssignment, route, v_max, s0, v0, directives)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FaultInjection, kind, t_start, t_end, magnitude)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TestScenario, id, class_ref, road, objects, ego,
                                                importance_weight, seed, horizon, scenery, variant,
                                                faults, parameters)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SensorConfig, range, fov, pos_noise_sigma,
                                                vel_noise_sigma, dropout_prob, faults)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ControllerParams, d0, tau, k_gap, k_rel_speed,
                                                k_speed, a_min, a_max, aeb_enabled, aeb_ttc,
                                                aeb_decel, lane_half_width, ego_length)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(KpiThresholds, ttc_min, decel_max, decel_is_hard)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SimConfig, dt, sensor, controller, kpi, ego_width)

void to_json(Json & j, const KpiReport & r)
{
  j = Json{{"scenario_id", r.scenario_id},
           {"min_ttc", finite_or_null(r.min_ttc)},
           {"min_distance", finite_or_null(r.min_distance)},
           {"collision", r.collision},
           {"max_decel", r.max_decel},
           {"v_max_violation", r.v_max_violation},
           {"pass", r.pass},
           {"overall_pass", r.overall_pass}};
}
void from_json(const Json & j, KpiReport & r)
{
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.min_ttc = number_or_inf(j, "min_ttc");
  r.min_distance = number_or_inf(j, "min_distance");
  r.collision = j.at("collision").get<bool>();
  r.max_decel = j.at("max_decel").get<double>();
  r.v_max_violation = j.at("v_max_violation").get<bool>();
  r.pass = j.at("pass").get<std::map<std::string, bool>>();
  r.overall_pass = j.at("overall_pass").get<bool>();
}

// The per-step trace is exported as CSV, not embedded in the result document.
void to_json(Json & j, const SimulationResult & r)
{
  j = Json{{"scenario_id", r.scenario_id}, {"class_ref", r.class_ref},
           {"variant", r.variant},         {"importance_weight", r.importance_weight},
           {"seed", r.seed},               {"kpis", r.kpis},
           {"config", r.config},           {"steps", r.trace.steps.size()}};
}
void from_json(const Json & j, SimulationResult & r)
{
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.class_ref = j.at("class_ref").get<std::string>();
  r.variant = j.at("variant").get<std::string>();
  r.importance_weight = j.at("importance_weight").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.kpis = j.at("kpis").get<KpiReport>();
  r.config = j.at("config").get<SimConfig>();
  r.trace = Trace();
}

void to_json(Json & j, const KpiSummary & s)
{
  j = Json{{"min", finite_or_null(s.min)},
           {"median", finite_or_null(s.median)},
           {"max", finite_or_null(s.max)}};
}
void from_json(const Json & j, KpiSummary & s)
{
  s.min = number_or_inf(j, "min");
  s.median = number_or_inf(j, "median");
  s.max = number_or_inf(j, "max");
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GroupSummary, scenarios, failures,
                                                criterion_failures, weighted_failure, kpis)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CleaningPolicy, window, k_mad, max_outlier_fraction,
                                                v_min, v_max, a_abs_max, min_deviation, max_passes)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CleaningReport, replacements, per_actor)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ModeThresholds, a_on, a_off, lat_rate_on,
                                                lat_rate_off, lat_settle, min_duration,
                                                heading_window, lane_change_guard)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SynthesisOptions, dt, lead_in, tail, ego_s0,
                                                max_accel)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VerificationCriteria, ttc_below, distance_below,
                                                proxy_dt, fault_variants)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PipelineConfig, cleaning, resample_dt, thresholds,
                                                relevance_radius, tail_c, synthesis, verification,
                                                sim, judgment)

namespace
{

constexpr int kSchemaVersion = 1;

std::string dump(const Json & j, bool pretty)
{
  return pretty ? j.dump(2) + "\n" : j.dump();
}

Json parse(std::string_view text)
{
  try {
    return Json::parse(text);
  } catch (const Json::exception & e) {
    fail(ErrorKind::ParseError, e.what());
  }
}

template <class T>
T convert(const Json & j)
{
  try {
    return j.get<T>();
  } catch (const Json::exception & e) {
    fail(ErrorKind::ParseError, e.what());
  }
}

}  // namespace

template <class T>
std::string dump_json(const T & value, bool pretty)
{
  Json j = value;
  if (j.is_object()) j["v"] = kSchemaVersion;
  return dump(j, pretty);
}

template <class T>
T load_json(std::string_view text)
{
  Json j = parse(text);
  if (j.is_object() && j.contains("v")) {
    if (j.at("v") != kSchemaVersion) {
      fail(ErrorKind::ParseError, "unsupported schema version " + j.at("v").dump());
    }
    j.erase("v");
  }
  return convert<T>(j);
}

template <class T>
std::string dump_json_array(const std::vector<T> & values, bool pretty)
{
  return dump(Json(values), pretty);
}

template <class T>
std::vector<T> load_json_array(std::string_view text)
{
  Json j = parse(text);
  if (!j.is_array()) fail(ErrorKind::ParseError, "expected a JSON array");
  return convert<std::vector<T>>(j);
}

template <class T>
std::string canonical_json(const T & value)
{
  return Json(value).dump();
}

std::string record_id(const ScenarioRecord & record)
{
  Json j = record;
  j.erase("id");
  j.erase("tags");
  return sha256_hex(j.dump()).substr(0, 16);
}

std::string report_json(const SafetyReport & report)
{
  Json j{{"v", kSchemaVersion},
         {"pooled", report.pooled},
         {"per_class", report.per_class},
         {"per_variant", report.per_variant},
         {"failed_scenarios", report.failed_scenarios},
         {"judgment", report.judgment},
         {"config", report.config ? Json(*report.config) : Json(nullptr)}};
  if (report.pass) {
    j["pass"] = *report.pass;
  } else {
    j["pass"] = "undetermined";
  }
  return dump(j, true);
}

#define SF_INSTANTIATE(T)                                              \
  template std::string dump_json<T>(const T &, bool);                  \
  template T load_json<T>(std::string_view);                           \
  template std::string dump_json_array<T>(const std::vector<T> &, bool); \
  template std::vector<T> load_json_array<T>(std::string_view);        \
  template std::string canonical_json<T>(const T &);

SF_INSTANTIATE(Taxonomy)
SF_INSTANTIATE(TagTree)
SF_INSTANTIATE(ScenarioRecord)
SF_INSTANTIATE(ScenarioClass)
SF_INSTANTIATE(LogDecomposition)
SF_INSTANTIATE(ParameterDensity)
SF_INSTANTIATE(ClassModel)
SF_INSTANTIATE(ClassDensities)
SF_INSTANTIATE(ActivityPattern)
SF_INSTANTIATE(RoadNetwork)
SF_INSTANTIATE(TestScenario)
SF_INSTANTIATE(SimulationResult)
SF_INSTANTIATE(KpiReport)
SF_INSTANTIATE(SimConfig)
SF_INSTANTIATE(SensorConfig)
SF_INSTANTIATE(ControllerParams)
SF_INSTANTIATE(CleaningReport)
SF_INSTANTIATE(PipelineConfig)

#undef SF_INSTANTIATE

}  // namespace scenario_forge
