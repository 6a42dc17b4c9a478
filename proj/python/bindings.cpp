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

// Python bindings. Documents cross the boundary as canonical JSON text and
// logs as CSV text; the Python package turns them into plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "scenario_forge/config.hpp"
#include "scenario_forge/database.hpp"
#include "scenario_forge/decompose.hpp"
#include "scenario_forge/density.hpp"
#include "scenario_forge/error.hpp"
#include "scenario_forge/genscen.hpp"
#include "scenario_forge/ingest.hpp"
#include "scenario_forge/mining.hpp"
#include "scenario_forge/report.hpp"
#include "scenario_forge/road.hpp"
#include "scenario_forge/serialize.hpp"
#include "scenario_forge/simulate.hpp"
#include "scenario_forge/synthetic.hpp"

namespace py = pybind11;
using namespace scenario_forge;

namespace
{

PipelineConfig config_of(const std::optional<std::string> & text)
{
  return text ? parse_config(*text) : PipelineConfig{};
}

std::vector<ActivityPattern> patterns_of(const std::optional<std::string> & text)
{
  if (!text) return default_patterns();
  auto patterns = load_json_array<ActivityPattern>(*text);
  for (const auto & p : patterns) validate_pattern(p);
  return patterns;
}

py::tuple ingest_csv(const std::string & text, const std::string & source_id,
                     std::optional<double> resample_dt, const std::optional<std::string> & config)
{
  const PipelineConfig cfg = config_of(config);
  auto [clean, report] = clean_log(parse_log_text(text, source_id), cfg.cleaning);
  const DrivingLog log = resample_log(clean, resample_dt.value_or(cfg.resample_dt));
  return py::make_tuple(write_log_csv(log), dump_json(report, false));
}

std::string decompose_csv(const std::string & log_csv, const std::optional<std::string> & config)
{
  const DrivingLog log = parse_log_text(log_csv, "log");
  return dump_json(decompose_log(log, config_of(config).thresholds), false);
}

std::string mine_csv(const std::string & log_csv, const std::string & source_id,
                     const std::optional<std::string> & patterns_json,
                     const std::optional<std::string> & config)
{
  const PipelineConfig cfg = config_of(config);
  const DrivingLog log = parse_log_text(log_csv, source_id);
  const auto patterns = patterns_of(patterns_json);
  MiningOptions mo;
  mo.relevance_radius = cfg.relevance_radius;
  mo.thresholds = cfg.thresholds;
  const Taxonomy taxonomy = default_taxonomy();
  std::vector<ScenarioRecord> out;
  for (ScenarioRecord r : mine_scenarios(log, decompose_log(log, cfg.thresholds), patterns, mo)) {
    r = auto_tag(std::move(r), log, patterns, taxonomy);
    r.id = record_id(r);
    out.push_back(std::move(r));
  }
  return dump_json_array(out, false);
}

std::string fit_records(const std::string & records_json)
{
  return dump_json(fit_class(extract_class(load_json_array<ScenarioRecord>(records_json))), false);
}

std::string generate(const std::string & densities_json, std::size_t n, double tail_c,
                     std::uint64_t seed, const std::string & road_query,
                     const std::optional<std::string> & config)
{
  const auto dens = load_json<ClassDensities>(densities_json);
  const auto roads = road_library();
  const RoadNetwork & road = select_road(TagQuery::parse(road_query), roads, default_taxonomy());
  return dump_json_array(generate_batch(dens, n, tail_c, road, seed, config_of(config).synthesis),
                         false);
}

std::string verify(const std::string & batch_json, const std::vector<std::string> & faults,
                   const std::optional<std::string> & config)
{
  VerificationCriteria crit = config_of(config).verification;
  for (const auto & f : faults) crit.fault_variants.push_back(parse_fault(f));
  return dump_json_array(verify_scenarios(load_json_array<TestScenario>(batch_json), crit), false);
}

std::string simulate(const std::string & batch_json, std::uint64_t seed, unsigned jobs,
                     const std::optional<std::string> & config)
{
  const auto batch = load_json_array<TestScenario>(batch_json);
  const SimConfig sim = config_of(config).sim;
  std::vector<SimulationResult> results;
  {
    py::gil_scoped_release release;
    results = run_batch(batch, sim, seed, jobs);
  }
  return dump_json_array(results, false);
}

std::string report(const std::string & results_json, const std::string & batch_json,
                   const std::string & format, const std::optional<std::string> & config)
{
  if (format != "json" && format != "text") {
    fail(ErrorKind::InvalidArgument, "format must be json or text");
  }
  const auto results = load_json_array<SimulationResult>(results_json);
  const auto batch = load_json_array<TestScenario>(batch_json);
  SafetyReport rep = aggregate(results, batch);
  rep.judgment = config_of(config).judgment;
  return render(rep, format == "json" ? ReportFormat::Json : ReportFormat::Text);
}

std::string density_fit(const std::vector<std::vector<double>> & points)
{
  return dump_json(fit_density(points), false);
}

double density_eval(const std::string & density_json, const std::vector<double> & x)
{
  return eval_density(load_json<ParameterDensity>(density_json), x);
}

}  // namespace

PYBIND11_MODULE(_scenario_forge, m)
{
  m.doc() = "Scenario extraction, generation and virtual safety validation";

  static py::exception<Error> error(m, "ScenarioForgeError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error & e) {
      py::object exc = py::handle(error.ptr())(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def("overtake_pair_csv", [] { return write_log_csv(render_log(overtake_pair_script())); });
  m.def("jittered_overtake_pair_csv", [](std::uint64_t seed) {
    return write_log_csv(render_log(overtake_pair_script(jitter_overtake_pair(seed))));
  });
  m.def("random_log_csv", [](std::uint64_t seed) { return write_log_csv(random_log(seed)); });
  m.def("default_config", [] { return config_json(PipelineConfig{}); });
  m.def("default_patterns", [] { return dump_json_array(default_patterns()); });

  m.def("ingest_csv", &ingest_csv, py::arg("text"), py::arg("source_id"),
        py::arg("resample_dt") = py::none(), py::arg("config") = py::none());
  m.def("decompose_csv", &decompose_csv, py::arg("log_csv"), py::arg("config") = py::none());
  m.def("mine_csv", &mine_csv, py::arg("log_csv"), py::arg("source_id"),
        py::arg("patterns") = py::none(), py::arg("config") = py::none());
  m.def("fit_records", &fit_records, py::arg("records"));
  m.def("generate", &generate, py::arg("densities"), py::arg("n"), py::arg("tail_c"),
        py::arg("seed"), py::arg("road_query") = "road:motorway", py::arg("config") = py::none());
  m.def("verify", &verify, py::arg("batch"), py::arg("faults") = std::vector<std::string>{},
        py::arg("config") = py::none());
  m.def("simulate", &simulate, py::arg("batch"), py::arg("seed"), py::arg("jobs") = 1,
        py::arg("config") = py::none());
  m.def("report", &report, py::arg("results"), py::arg("batch"), py::arg("format") = "json",
        py::arg("config") = py::none());
  m.def("density_fit", &density_fit, py::arg("points"));
  m.def("density_eval", &density_eval, py::arg("density"), py::arg("x"));

  py::class_<ScenarioDatabase>(m, "Database")
    .def(py::init([](const std::string & root) { return new ScenarioDatabase(root); }),
         py::arg("root"))
    .def("store_log", [](ScenarioDatabase & db, const std::string & id, const std::string & csv) {
      db.store_log(id, parse_log_text(csv, id));
    })
    .def("store_scenario", [](ScenarioDatabase & db, const std::string & record_json) {
      return db.store_scenario(load_json<ScenarioRecord>(record_json));
    })
    .def("fetch_scenario", [](const ScenarioDatabase & db, const std::string & id) {
      return dump_json(db.fetch_scenario(id), false);
    })
    .def("scenario_ids", &ScenarioDatabase::scenario_ids)
    .def("log_ids", &ScenarioDatabase::log_ids)
    .def("query", [](const ScenarioDatabase & db, const std::string & expr) {
      return db.query_scenarios(std::string_view(expr));
    })
    .def("audit", [](const ScenarioDatabase & db) { return db.audit().violations; });
}
