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
#include <functional>

#include "scenario_forge/decompose.hpp"
#include "scenario_forge/error.hpp"
#include "scenario_forge/mining.hpp"
#include "scenario_forge/rng.hpp"
#include "scenario_forge/synthetic.hpp"

using namespace scenario_forge;

namespace
{

std::vector<ScenarioRecord> mine(const DrivingLog & log)
{
  const auto patterns = default_patterns();
  return mine_scenarios(log, decompose_log(log), patterns);
}

ErrorKind kind_of(const std::function<void()> & f)
{
  try {
    f();
  } catch (const Error & e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

std::vector<ScenarioRecord> ego_overtakes(int n)
{
  std::vector<ScenarioRecord> out;
  for (int k = 1; out.size() < static_cast<std::size_t>(n); ++k) {
    for (auto & r : mine(render_log(overtake_pair_script(jitter_overtake_pair(k))))) {
      if (r.pattern == "ego-overtake") out.push_back(r);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("overtaking log yields two scenarios split at 16 s")
{
  const DrivingLog log = render_log(overtake_pair_script());
  const auto recs = mine(log);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].pattern == "overtake-of-ego");
  CHECK(recs[0].roles.at("target") == "station-wagon");
  CHECK(recs[1].pattern == "ego-overtake");
  CHECK(recs[1].roles.at("target") == "pickup");
  CHECK(recs[0].t_end == doctest::Approx(16.0));
  CHECK(recs[1].t_start == doctest::Approx(16.0));
  CHECK(recs[1].t_end == doctest::Approx(29.0));

  const Taxonomy tax = default_taxonomy();
  for (const auto & r : recs) {
    CHECK(check_record(r, tax).empty());
    CHECK(r.id.empty());
    CHECK(r.matched.size() == default_patterns()[r.pattern == "ego-overtake" ? 1 : 3].elements.size());
  }
  // The wagon's LCL/LCR and the ego's acceleration/LCL/LCR are the matched slots.
  const auto & second = recs[1];
  std::vector<Mode> matched;
  for (auto i : second.matched) matched.push_back(second.activities[i].mode);
  CHECK(matched == std::vector<Mode>{Mode::Accelerating, Mode::LaneChangeLeft, Mode::LaneChangeRight});
  CHECK(second.initial_conditions.at("ego_v") == doctest::Approx(20.0));
}

TEST_CASE("jittered overtaking logs split at their designed boundary")
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const OvertakePairParams p = jitter_overtake_pair(seed);
    const auto recs = mine(render_log(overtake_pair_script(p)));
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].t_end == doctest::Approx(overtake_pair_boundary(p)));
    CHECK(recs[1].t_start >= recs[0].t_end);
  }
}

TEST_CASE("a lone vehicle yields nothing")
{
  LogScript s;
  s.actors.push_back({"ego", true, 0.0, 20.0, 0.0, 25.0, 1, {}, {}});
  CHECK(mine(render_log(s)).empty());
}

TEST_CASE("seeded pattern instances are recovered")
{
  const std::vector<std::string> names{"cut-in", "ego-overtake", "lead-braking", "overtake-of-ego"};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CounterRng rng(seed);
    std::vector<std::string> chosen;
    for (int i = 0; i < 3; ++i) chosen.push_back(names[static_cast<std::size_t>(rng.uniform() * 4) % 4]);
    std::vector<PatternInstance> truth;
    const DrivingLog log = render_log(pattern_instances_script(chosen, seed, &truth));
    const auto recs = mine(log);
    REQUIRE(recs.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(recs[i].pattern == chosen[i]);
      CHECK(recs[i].roles.at("target") == truth[i].target);
    }
  }
}

TEST_CASE("mining ignores actor order")
{
  DrivingLog log = render_log(overtake_pair_script());
  const auto before = mine(log);
  std::reverse(log.actors.begin(), log.actors.end());
  CHECK(mine(log) == before);
}

TEST_CASE("actors beyond the relevance radius are left out")
{
  LogScript s = overtake_pair_script();
  s.actors.push_back({"far-away", false, 0.0, 30.0, 900.0, 20.0, 0, {}, {}});
  const auto recs = mine(render_log(s));
  REQUIRE(recs.size() == 2);
  for (const auto & r : recs) {
    CHECK(std::find(r.actors.begin(), r.actors.end(), "far-away") == r.actors.end());
  }
}

TEST_CASE("auto tagging")
{
  const Taxonomy tax = default_taxonomy();
  const auto patterns = default_patterns();
  DrivingLog log = render_log(overtake_pair_script());
  const auto recs = mine(log);
  const ScenarioRecord tagged = auto_tag(recs[1], log, patterns, tax);
  CHECK(tagged.tags.count("target-maneuver:overtaking") == 1);
  CHECK(tagged.tags.count("weather:clear") == 1);
  CHECK(tagged.tags.count("road:motorway-straight") == 1);

  log.metadata["weather"] = {"rain"};
  CHECK(auto_tag(recs[1], log, patterns, tax).tags.count("weather:rain") == 1);

  log.metadata.erase("weather");
  log.metadata.erase("road");
  CHECK(auto_tag(recs[1], log, patterns, tax).tags == TagSet{"target-maneuver:overtaking"});

  log.metadata["weather"] = {"rain", "snow"};
  CHECK(kind_of([&] { auto_tag(recs[1], log, patterns, tax); }) == ErrorKind::MutualExclusionViolation);
}

TEST_CASE("class extraction")
{
  const auto recs = ego_overtakes(5);
  const ClassModel m = extract_class(recs);
  CHECK(m.cls.name == "ego-overtake");
  REQUIRE(m.cls.activity_pattern.size() == 3);
  CHECK(m.cls.activity_pattern[0].role == "ego");
  CHECK(m.cls.activity_pattern[0].mode == Mode::Accelerating);
  CHECK(m.cls.activity_pattern[1].mode == Mode::LaneChangeLeft);
  CHECK(m.cls.activity_pattern[2].mode == Mode::LaneChangeRight);
  REQUIRE(m.slot_params.size() == 3);
  for (const auto & sp : m.slot_params) CHECK(sp.rows.size() == 5);
  CHECK(m.slot_params[0].fields == std::vector<std::string>{"duration", "v_start", "delta_v"});
  CHECK(m.slot_params[1].fields == std::vector<std::string>{"duration", "lateral_displacement"});
  CHECK(m.context.rows.size() == 5);
  CHECK(m.records.size() == 5);

  const std::vector<ScenarioRecord> one(recs.begin(), recs.begin() + 1);
  for (const auto & sp : extract_class(one).slot_params) CHECK(sp.rows.size() == 1);

  CHECK(kind_of([] { extract_class(std::span<const ScenarioRecord>{}); }) == ErrorKind::EmptyInput);
  auto mixed = recs;
  mixed.push_back(mine(render_log(overtake_pair_script()))[0]);
  CHECK(kind_of([&] { extract_class(mixed); }) == ErrorKind::HeterogeneousPattern);
}

TEST_CASE("pattern validation and names")
{
  for (const auto & p : default_patterns()) CHECK_NOTHROW(validate_pattern(p));
  ActivityPattern bad{"broken", {{"ego", Channel::Lateral, Mode::Braking, Predicate::Any}}, 10.0, {}};
  CHECK_THROWS_AS(validate_pattern(bad), Error);
  bad.elements.clear();
  CHECK_THROWS_AS(validate_pattern(bad), Error);
  for (Predicate p : {Predicate::Any, Predicate::TargetAheadAtStart, Predicate::TargetBehindAtEnd,
                      Predicate::TargetAheadSameLaneAtEnd}) {
    CHECK(parse_predicate(to_string(p)) == p);
  }
}
