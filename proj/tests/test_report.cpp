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

#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "scenario_forge/error.hpp"
#include "scenario_forge/report.hpp"
#include "scenario_forge/serialize.hpp"

using namespace scenario_forge;

namespace
{

SimulationResult result(const std::string & id, bool pass, double weight,
                        const std::string & cls = "c", const std::string & variant = "nominal")
{
  SimulationResult r;
  r.scenario_id = id;
  r.class_ref = cls;
  r.variant = variant;
  r.importance_weight = weight;
  r.kpis.scenario_id = id;
  r.kpis.min_ttc = pass ? 3.0 : 0.4;
  r.kpis.min_distance = pass ? 5.0 : 0.0;
  r.kpis.collision = !pass;
  r.kpis.max_decel = pass ? 2.0 : 8.0;
  r.kpis.pass = {{"collision", pass}, {"decel", pass}, {"speed", true}, {"ttc", pass}};
  r.kpis.overall_pass = pass;
  return r;
}

std::vector<TestScenario> batch_for(const std::vector<SimulationResult> & results)
{
  std::vector<TestScenario> batch;
  for (const auto & r : results) {
    TestScenario ts;
    ts.id = r.scenario_id;
    batch.push_back(ts);
  }
  return batch;
}

}  // namespace

TEST_CASE("all passing")
{
  const std::vector<SimulationResult> rs{result("a", true, 1.0), result("b", true, 2.0)};
  const SafetyReport rep = aggregate(rs, batch_for(rs));
  REQUIRE(rep.pass);
  CHECK(*rep.pass);
  CHECK(rep.pooled.weighted_failure == 0.0);
  CHECK(rep.pooled.scenarios == 2);
  CHECK(rep.failed_scenarios.empty());
}

TEST_CASE("weighted failure estimate")
{
  const std::vector<SimulationResult> rs{result("a", true, 0.5), result("b", false, 2.0),
                                         result("c", true, 1.5)};
  const SafetyReport rep = aggregate(rs, batch_for(rs));
  CHECK_FALSE(*rep.pass);
  CHECK(rep.pooled.weighted_failure == doctest::Approx(2.0 / 4.0));
  CHECK(rep.pooled.failures == 1);
  CHECK(rep.pooled.criterion_failures.at("collision") == 1);
  CHECK(rep.failed_scenarios == std::vector<std::string>{"b"});
  CHECK(rep.pooled.kpis.at("min_ttc").min == 0.4);
  CHECK(rep.pooled.kpis.at("min_ttc").median == 3.0);

  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 30);
    std::vector<SimulationResult> uniform;
    int k = 0;
    for (int i = 0; i < n; ++i) {
      const bool pass = gen() % 3 != 0;
      k += pass ? 0 : 1;
      uniform.push_back(result("s" + std::to_string(i), pass, 0.7));
    }
    const SafetyReport r = aggregate(uniform, batch_for(uniform));
    CHECK(r.pooled.weighted_failure == doctest::Approx(static_cast<double>(k) / n));
    CHECK(r.pooled.weighted_failure >= 0.0);
    CHECK(r.pooled.weighted_failure <= 1.0);
    std::shuffle(uniform.begin(), uniform.end(), gen);
    CHECK(aggregate(uniform, batch_for(uniform)) == r);
  }
}

TEST_CASE("comfort criteria do not fail the run")
{
  SimulationResult r = result("a", true, 1.0);
  r.kpis.pass["decel"] = false;
  const std::vector<SimulationResult> rs{r};
  const SafetyReport rep = aggregate(rs, batch_for(rs));
  CHECK(*rep.pass);
  CHECK(rep.pooled.criterion_failures.at("decel") == 1);
}

TEST_CASE("id mismatch")
{
  const std::vector<SimulationResult> rs{result("a", true, 1.0), result("b", true, 1.0)};
  std::vector<TestScenario> batch = batch_for(rs);
  batch[1].id = "z";
  try {
    aggregate(rs, batch);
    FAIL("expected IdMismatch");
  } catch (const Error & e) {
    CHECK(e.kind() == ErrorKind::IdMismatch);
  }
  batch.pop_back();
  CHECK_THROWS_AS(aggregate(rs, batch), Error);
}

TEST_CASE("empty batch is undetermined")
{
  const SafetyReport rep = aggregate({}, {});
  CHECK_FALSE(rep.pass.has_value());
  CHECK(rep.pooled.scenarios == 0);
  const std::string json = render(rep, ReportFormat::Json);
  CHECK(json.find("\"undetermined\"") != std::string::npos);
  CHECK(json.find("\"v\": 1") != std::string::npos);
  const std::string text = render(rep, ReportFormat::Text);
  CHECK(text.find("UNDETERMINED") != std::string::npos);
  CHECK(text.find("zero scenarios") != std::string::npos);
}

TEST_CASE("rendering")
{
  const std::vector<SimulationResult> rs{
    result("a", true, 1.0, "cut-in"), result("a~blackout", false, 1.0, "cut-in", "blackout"),
    result("b", true, 1.0, "lead-braking"), result("b~stuck", true, 1.0, "lead-braking", "stuck")};
  SafetyReport rep = aggregate(rs, batch_for(rs));
  rep.judgment = "acceptable pending review";
  CHECK(rep.per_variant.size() == 3);
  CHECK(rep.per_class.size() == 2);
  CHECK(rep.per_variant.at("blackout").failures == 1);
  CHECK(render(rep, ReportFormat::Json) == render(rep, ReportFormat::Json));
  const std::string text = render(rep, ReportFormat::Text);
  CHECK(text == render(rep, ReportFormat::Text));
  CHECK(text.find("Fault variant blackout") != std::string::npos);
  CHECK(text.find("Fault variant stuck") != std::string::npos);
  CHECK(text.find("Class cut-in") != std::string::npos);
  CHECK(text.find("Recommendation: FAIL") != std::string::npos);
  CHECK(text.find("acceptable pending review") != std::string::npos);
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    CHECK(end - start <= 80);
    start = end + 1;
  }
  CHECK(render(rep, ReportFormat::Json).find("\"pass\": false") != std::string::npos);
}
