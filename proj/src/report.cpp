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

#include "scenario_forge/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "scenario_forge/error.hpp"
#include "scenario_forge/format.hpp"
#include "scenario_forge/serialize.hpp"

namespace scenario_forge
{

namespace
{

KpiSummary summarize(std::vector<double> values)
{
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return {values.front(), median, values.back()};
}

GroupSummary summarize_group(const std::vector<const SimulationResult *> & group)
{
  GroupSummary g;
  g.scenarios = group.size();
  if (group.empty()) return g;
  std::vector<double> ttc, dist, decel;
  double w_fail = 0.0;
  double w_sum = 0.0;
  for (const auto * r : group) {
    const bool failed = !r->kpis.overall_pass;
    if (failed) ++g.failures;
    for (const auto & [name, ok] : r->kpis.pass) {
      if (!ok) ++g.criterion_failures[name];
    }
    w_sum += r->importance_weight;
    if (failed) w_fail += r->importance_weight;
    ttc.push_back(r->kpis.min_ttc);
    dist.push_back(r->kpis.min_distance);
    decel.push_back(r->kpis.max_decel);
  }
  g.weighted_failure = w_sum > 0.0 ? w_fail / w_sum : 0.0;
  g.kpis = {{"max_decel", summarize(decel)},
            {"min_distance", summarize(dist)},
            {"min_ttc", summarize(ttc)}};
  return g;
}

}  // namespace

SafetyReport aggregate(std::span<const SimulationResult> results,
                       std::span<const TestScenario> batch)
{
  std::vector<const SimulationResult *> sorted;
  for (const auto & r : results) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto * a, const auto * b) {
    return a->scenario_id < b->scenario_id;
  });

  std::multiset<std::string> result_ids;
  std::multiset<std::string> batch_ids;
  for (const auto * r : sorted) result_ids.insert(r->scenario_id);
  for (const auto & ts : batch) batch_ids.insert(ts.id);
  if (result_ids != batch_ids) {
    std::vector<std::string> diff;
    std::set_symmetric_difference(result_ids.begin(), result_ids.end(), batch_ids.begin(),
                                  batch_ids.end(), std::back_inserter(diff));
    fail(ErrorKind::IdMismatch, "results and batch differ in " + std::to_string(diff.size()) +
                                  " scenario ids" + (diff.empty() ? "" : ", e.g. " + diff.front()));
  }

  SafetyReport report;
  report.pooled = summarize_group(sorted);
  std::map<std::string, std::vector<const SimulationResult *>> by_class;
  std::map<std::string, std::vector<const SimulationResult *>> by_variant;
  for (const auto * r : sorted) {
    by_class[r->class_ref].push_back(r);
    by_variant[r->variant].push_back(r);
    if (!r->kpis.overall_pass) report.failed_scenarios.push_back(r->scenario_id);
  }
  for (const auto & [name, group] : by_class) report.per_class[name] = summarize_group(group);
  for (const auto & [name, group] : by_variant) report.per_variant[name] = summarize_group(group);
  if (!sorted.empty()) {
    report.pass = report.pooled.failures == 0;
    report.config = sorted.front()->config;
  }
  return report;
}

namespace
{

std::string fmt(double v)
{
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void group_table(std::ostringstream & os, const std::string & title, const GroupSummary & g)
{
  os << title << '\n' << std::string(std::min<std::size_t>(title.size(), 80), '-') << '\n';
  char line[96];
  std::snprintf(line, sizeof line, "scenarios %zu   failures %zu   weighted failure estimate %s\n",
                g.scenarios, g.failures, fmt(g.weighted_failure).c_str());
  os << line;
  if (g.scenarios == 0) {
    os << '\n';
    return;
  }
  std::snprintf(line, sizeof line, "%-16s %14s %14s %14s\n", "KPI", "min", "median", "max");
  os << line;
  for (const auto & [name, s] : g.kpis) {
    std::snprintf(line, sizeof line, "%-16s %14s %14s %14s\n", name.c_str(), fmt(s.min).c_str(),
                  fmt(s.median).c_str(), fmt(s.max).c_str());
    os << line;
  }
  for (const auto & [name, count] : g.criterion_failures) {
    std::snprintf(line, sizeof line, "failed criterion %-12s %zu\n", name.c_str(), count);
    os << line;
  }
  os << '\n';
}

std::string render_text(const SafetyReport & report)
{
  std::ostringstream os;
  os << "SAFETY REPORT\n=============\n\n";
  group_table(os, "All scenarios", report.pooled);
  for (const auto & [name, g] : report.per_class) group_table(os, "Class " + name, g);
  for (const auto & [name, g] : report.per_variant) {
    group_table(os, name == "nominal" ? std::string("Nominal runs") : "Fault variant " + name, g);
  }
  if (!report.failed_scenarios.empty()) {
    os << "Failed scenarios\n----------------\n";
    for (const auto & id : report.failed_scenarios) os << "  " << id.substr(0, 76) << '\n';
    os << '\n';
  }
  if (!report.judgment.empty()) os << "Assessor judgment: " << report.judgment << "\n\n";
  if (!report.pass) {
    os << "Recommendation: UNDETERMINED (zero scenarios)\n";
  } else {
    os << "Recommendation: " << (*report.pass ? "PASS" : "FAIL") << " ("
       << report.pooled.failures << " hard-criterion failures in " << report.pooled.scenarios
       << " scenarios)\n";
  }
  return os.str();
}

}  // namespace

std::string render(const SafetyReport & report, ReportFormat format)
{
  return format == ReportFormat::Json ? report_json(report) : render_text(report);
}

}  // namespace scenario_forge
