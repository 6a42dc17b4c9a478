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

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "scenario_forge/config.hpp"
#include "scenario_forge/database.hpp"
#include "scenario_forge/decompose.hpp"
#include "scenario_forge/error.hpp"
#include "scenario_forge/format.hpp"
#include "scenario_forge/genscen.hpp"
#include "scenario_forge/ingest.hpp"
#include "scenario_forge/mining.hpp"
#include "scenario_forge/report.hpp"
#include "scenario_forge/road.hpp"
#include "scenario_forge/serialize.hpp"
#include "scenario_forge/simulate.hpp"
#include "scenario_forge/synthetic.hpp"

namespace fs = std::filesystem;
using namespace scenario_forge;

namespace
{

std::string read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path & path, const std::string & content)
{
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::StorageFailure, "cannot write " + path.string());
  out << content;
}

struct Options
{
  std::string db;
  std::string config;
  bool quiet = false;
};

ScenarioDatabase open_db(const Options & o)
{
  if (o.db.empty()) fail(ErrorKind::InvalidArgument, "no database: pass --db or set SCENARIO_FORGE_DB");
  return ScenarioDatabase(o.db);
}

PipelineConfig config_of(const Options & o)
{
  return o.config.empty() ? PipelineConfig{} : load_config(o.config);
}

std::vector<TestScenario> load_batch(const fs::path & path)
{
  return load_json_array<TestScenario>(read_file(path));
}

/// A class is the set of records mined with the same pattern.
std::vector<ScenarioRecord> records_of_class(const ScenarioDatabase & db, const std::string & cls)
{
  std::vector<ScenarioRecord> out;
  for (const auto & id : db.scenario_ids()) {
    ScenarioRecord r = db.fetch_scenario(id);
    if (r.pattern == cls) out.push_back(std::move(r));
  }
  return out;
}

int report_error(ErrorKind kind, const std::string & message)
{
  std::cerr << "{\"error\":\"" << to_string(kind) << "\",\"message\":";
  std::string escaped;
  for (char c : message) {
    if (c == '"' || c == '\\') escaped += '\\';
    if (static_cast<unsigned char>(c) >= 0x20) escaped += c;
  }
  std::cerr << '"' << escaped << "\"}\n";
  return is_usage_error(kind) ? 2 : 1;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Scenario-based safety assessment pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  if (const char * env = std::getenv("SCENARIO_FORGE_DB")) o.db = env;
  app.add_option("--db", o.db, "Scenario database directory (default: $SCENARIO_FORGE_DB)");
  app.add_option("--config", o.config, "Pipeline configuration JSON");
  app.add_flag("-q,--quiet", o.quiet, "Suppress informational output");

  // ingest
  auto * ingest = app.add_subcommand("ingest", "Parse, clean, resample and store a log");
  std::string log_path, log_id;
  std::optional<double> resample_dt;
  ingest->add_option("log", log_path, "Log CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--id", log_id, "Log id (default: file stem)");
  ingest->add_option("--resample-dt", resample_dt, "Resampling step (s)");

  // decompose
  auto * decompose = app.add_subcommand("decompose", "Detect events and activities of a log");
  std::string timeline_path;
  decompose->add_option("log-id", log_id)->required();
  decompose->add_option("--dump-timeline", timeline_path, "Write the activity timeline CSV");

  // mine
  auto * mine = app.add_subcommand("mine", "Mine and tag scenarios from a decomposed log");
  std::string patterns_path;
  std::optional<double> radius;
  mine->add_option("log-id", log_id)->required();
  mine->add_option("--patterns", patterns_path, "Activity pattern JSON (default: built-in)");
  mine->add_option("--relevance-radius", radius, "Actor relevance radius (m)");

  // fit
  auto * fit = app.add_subcommand("fit", "Fit per-slot densities of a scenario class");
  std::string cls;
  fit->add_option("class", cls)->required();

  // generate
  auto * generate = app.add_subcommand("generate", "Draw a batch of test scenarios");
  std::size_t count = 100;
  std::optional<double> tail_c;
  std::string road_query, out_path, roads_path;
  std::uint64_t seed = 0;
  generate->add_option("class", cls)->required();
  generate->add_option("-n", count, "Number of scenarios")->check(CLI::PositiveNumber);
  generate->add_option("--tail-c", tail_c, "Bandwidth inflation factor (>= 1)");
  generate->add_option("--road-query", road_query, "Tag query selecting the road");
  generate->add_option("--roads", roads_path, "Road library JSON (default: built-in)");
  generate->add_option("--seed", seed);
  generate->add_option("--out", out_path)->required();

  // verify
  auto * verify = app.add_subcommand("verify", "Keep critical scenarios and add fault variants");
  std::string batch_path;
  std::vector<std::string> faults;
  verify->add_option("batch", batch_path)->required()->check(CLI::ExistingFile);
  verify->add_option("--fault", faults, "kind:t_start:t_end[:magnitude], repeatable");
  verify->add_option("--out", out_path)->required();

  // simulate
  auto * simulate = app.add_subcommand("simulate", "Run a batch in closed loop");
  unsigned jobs = 0;
  bool traces = false;
  simulate->add_option("batch", batch_path)->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed);
  simulate->add_option("--jobs", jobs, "Worker threads (default: hardware)");
  simulate->add_flag("--traces", traces, "Also write per-scenario trace CSVs");
  simulate->add_option("--out", out_path)->required();

  // report
  auto * report = app.add_subcommand("report", "Aggregate results into a safety report");
  std::string results_dir, format;
  report->add_option("results", results_dir)->required()->check(CLI::ExistingDirectory);
  report->add_option("batch", batch_path)->required()->check(CLI::ExistingFile);
  report->add_option("--out", out_path, "Output file (.json or .txt); stdout when omitted");
  report->add_option("--format", format, "json or text (default: from --out extension)")
    ->check(CLI::IsMember({"json", "text"}));

  // audit
  auto * audit = app.add_subcommand("audit", "Check every database invariant");

  // synth
  auto * synth = app.add_subcommand("synth", "Write synthetic driving logs");
  std::size_t variants = 0, randoms = 0;
  synth->add_option("--variants", variants, "Jittered overtaking logs besides the reference");
  synth->add_option("--random", randoms, "Randomized multi-pattern logs");
  synth->add_option("--seed", seed);
  synth->add_option("--out", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig cfg = config_of(o);
    auto info = [&](const std::string & line) {
      if (!o.quiet) std::cout << line << '\n';
    };

    if (*ingest) {
      ScenarioDatabase db = open_db(o);
      DrivingLog raw = parse_log(log_path);
      const std::string id = sanitize_id(log_id.empty() ? fs::path(log_path).stem().string() : log_id);
      auto [clean, cleaning] = clean_log(raw, cfg.cleaning);
      DrivingLog log = resample_log(clean, resample_dt.value_or(cfg.resample_dt));
      log.source_id = id;
      db.store_log(id, log);
      info(dump_json(cleaning));
    } else if (*decompose) {
      ScenarioDatabase db = open_db(o);
      const LogDecomposition d = decompose_log(db.fetch_log(log_id), cfg.thresholds);
      db.store_decomposition(log_id, d);
      if (!timeline_path.empty()) write_file(timeline_path, activity_timeline_csv(d));
      info(std::to_string(d.events.size()) + " events, " + std::to_string(d.activities.size()) +
           " activities");
    } else if (*mine) {
      ScenarioDatabase db = open_db(o);
      const DrivingLog log = db.fetch_log(log_id);
      const std::vector<ActivityPattern> patterns = patterns_path.empty()
                                                      ? default_patterns()
                                                      : load_json_array<ActivityPattern>(read_file(patterns_path));
      for (const auto & p : patterns) validate_pattern(p);
      MiningOptions mo;
      mo.relevance_radius = radius.value_or(cfg.relevance_radius);
      mo.thresholds = cfg.thresholds;
      const Taxonomy taxonomy = db.taxonomy();
      for (ScenarioRecord r : mine_scenarios(log, db.fetch_decomposition(log_id), patterns, mo)) {
        r = auto_tag(std::move(r), log, patterns, taxonomy);
        const std::string pattern = r.pattern;
        info(db.store_scenario(std::move(r)) + " " + pattern);
      }
    } else if (*fit) {
      ScenarioDatabase db = open_db(o);
      const std::vector<ScenarioRecord> records = records_of_class(db, cls);
      if (records.empty()) fail(ErrorKind::UnknownClass, "no records of class " + cls);
      const ClassModel model = extract_class(records);
      const ClassDensities dens = fit_class(model);
      db.store_class(model);
      db.store_densities(dens);
      info(cls + ": " + std::to_string(records.size()) + " records, " +
           std::to_string(dens.slots.size()) + " slots");
    } else if (*generate) {
      ScenarioDatabase db = open_db(o);
      const ClassDensities dens = db.fetch_densities(cls);
      const std::vector<RoadNetwork> roads = roads_path.empty()
                                               ? road_library()
                                               : load_json_array<RoadNetwork>(read_file(roads_path));
      std::string query = road_query;
      if (query.empty()) {
        for (const auto & t : dens.model.cls.required_tags) {
          if (t.rfind("road:", 0) == 0) query = t;
        }
      }
      if (query.empty()) query = "road:motorway";
      const RoadNetwork & road = select_road(TagQuery::parse(query), roads, db.taxonomy());
      const auto batch = generate_batch(dens, count, tail_c.value_or(cfg.tail_c), road, seed, cfg.synthesis);
      write_file(out_path, dump_json_array(batch));
      info(std::to_string(batch.size()) + " scenarios on " + road.id);
    } else if (*verify) {
      VerificationCriteria criteria = cfg.verification;
      for (const auto & f : faults) criteria.fault_variants.push_back(parse_fault(f));
      const auto batch = load_batch(batch_path);
      const auto kept = verify_scenarios(batch, criteria);
      write_file(out_path, dump_json_array(kept));
      info(std::to_string(kept.size()) + " of " + std::to_string(batch.size()) + " scenarios kept");
    } else if (*simulate) {
      const auto batch = load_batch(batch_path);
      if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
      const auto results = run_batch(batch, cfg.sim, seed, jobs);
      const fs::path dir(out_path);
      fs::create_directories(dir);
      for (const auto & entry : fs::directory_iterator(dir)) {
        const auto ext = entry.path().extension();
        if (ext == ".json" || ext == ".csv") fs::remove(entry.path());
      }
      std::size_t failures = 0;
      for (const auto & r : results) {
        const std::string stem = sanitize_id(r.scenario_id);
        write_file(dir / (stem + ".json"), dump_json(r));
        if (traces) write_file(dir / (stem + ".trace.csv"), trace_csv(r));
        if (!r.kpis.overall_pass) ++failures;
      }
      info(std::to_string(results.size()) + " simulated, " + std::to_string(failures) + " failed");
    } else if (*report) {
      std::vector<fs::path> files;
      for (const auto & entry : fs::directory_iterator(results_dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      std::vector<SimulationResult> results;
      for (const auto & f : files) results.push_back(load_json<SimulationResult>(read_file(f)));
      const auto batch = load_batch(batch_path);
      SafetyReport rep = aggregate(results, batch);
      rep.judgment = cfg.judgment;
      rep.config = cfg.sim;
      if (format.empty()) format = fs::path(out_path).extension() == ".txt" ? "text" : "json";
      const std::string doc = render(rep, format == "text" ? ReportFormat::Text : ReportFormat::Json);
      if (out_path.empty()) {
        std::cout << doc;
      } else {
        write_file(out_path, doc);
      }
    } else if (*audit) {
      const ScenarioDatabase db = open_db(o);
      const AuditReport a = db.audit();
      for (const auto & v : a.violations) std::cout << v << '\n';
      info(std::to_string(a.records) + " records, " + std::to_string(a.violations.size()) + " violations");
      return a.ok() ? 0 : 1;
    } else if (*synth) {
      const fs::path dir(out_path);
      write_file(dir / "overtake-pair.csv", write_log_csv(render_log(overtake_pair_script())));
      for (std::size_t k = 1; k <= variants; ++k) {
        const LogScript s = overtake_pair_script(jitter_overtake_pair(derive_seed(seed, k)));
        write_file(dir / ("overtake-pair-" + std::to_string(k) + ".csv"), write_log_csv(render_log(s)));
      }
      for (std::size_t k = 1; k <= randoms; ++k) {
        write_file(dir / ("random-" + std::to_string(k) + ".csv"),
                   write_log_csv(random_log(derive_seed(seed + 1, k))));
      }
      info(std::to_string(1 + variants + randoms) + " logs written to " + dir.string());
    }
  } catch (const Error & e) {
    return report_error(e.kind(), e.what());
  } catch (const std::exception & e) {
    return report_error(ErrorKind::StorageFailure, e.what());
  }
  return 0;
}
