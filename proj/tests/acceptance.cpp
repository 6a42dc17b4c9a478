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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria. Pass `--cli <path>` to also drive the
// command-line tool through the determinism check.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "query_oracle.hpp"
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
#include "support.hpp"

using namespace scenario_forge;
namespace fs = std::filesystem;

namespace
{

struct Outcome
{
  bool pass = false;
  std::string detail;
};

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_file(const fs::path & p, const std::string & content)
{
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << content;
}

std::string read_file(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RoadNetwork road(const std::string & id)
{
  for (const auto & r : road_library()) {
    if (r.id == id) return r;
  }
  throw std::runtime_error("missing road " + id);
}

// --- 1 ----------------------------------------------------------------------

Outcome overtake_pair_reproduction()
{
  const auto t0 = std::chrono::steady_clock::now();
  const LogScript script = overtake_pair_script();
  const DrivingLog raw = parse_log_text(write_log_csv(render_log(script)), "overtake-pair");
  auto [clean, cleaning] = clean_log(raw, CleaningPolicy{});
  const DrivingLog log = resample_log(clean, 0.1);
  const LogDecomposition dec = decompose_log(log);
  const auto records = mine_scenarios(log, dec, default_patterns());
  const double elapsed =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<std::string> problems;
  if (log.actors.size() != 3) problems.push_back("expected 3 actors");
  if (std::abs(log.t_end() - log.t_begin() - 30.0) > 1e-9) problems.push_back("log is not 30 s");
  if (cleaning.total() != 0) problems.push_back("cleaning altered the clean log");
  if (records.size() != 2) {
    problems.push_back("mined " + std::to_string(records.size()) + " scenarios");
  } else {
    const double boundary = overtake_pair_boundary(OvertakePairParams{});
    if (std::abs(boundary - 16.0) > 1e-12) problems.push_back("designed boundary moved");
    if (std::abs(records[0].t_end - boundary) > 1e-9) {
      problems.push_back("first scenario ends at " + fmt(records[0].t_end));
    }
    if (records[1].t_start < records[0].t_end - 1e-9) problems.push_back("scenarios overlap");
  }

  // Designed versus detected mode sequences, per actor and channel.
  std::map<std::pair<std::string, Channel>, std::vector<Mode>> designed, detected;
  for (const auto & a : designed_activities(script)) designed[{a.actor, a.channel}].push_back(a.mode);
  for (const auto & a : dec.activities) detected[{a.actor, a.channel}].push_back(a.mode);
  if (designed != detected) problems.push_back("activity sequences differ from the design");
  if (elapsed >= 5.0) problems.push_back("took " + fmt(elapsed) + " s");

  std::string detail = "2 scenarios split at 16 s, sequences match, " + fmt(elapsed) + " s";
  if (!problems.empty()) {
    detail.clear();
    for (const auto & p : problems) detail += (detail.empty() ? "" : "; ") + p;
  }
  return {problems.empty(), detail};
}

// --- 2 ----------------------------------------------------------------------

Outcome decompose_synthesize_closure()
{
  const RoadNetwork r = road("motorway-3lane");
  const SynthesisOptions opts;
  CounterRng rng(2024);
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  std::size_t total = 0, passed = 0;
  double worst_duration = 0.0, worst_v = 0.0, worst_dv = 0.0, worst_disp = 0.0;
  for (Mode mode : {Mode::Braking, Mode::Accelerating, Mode::LaneChangeLeft, Mode::LaneChangeRight}) {
    ClassModel m;
    m.cls.name = "closure";
    m.cls.activity_pattern = {{"target", channel_of(mode), mode}};
    m.slot_params = {{param_fields(mode), {}}};
    m.context.fields = {"ego_v", "gap", "target_v"};
    m.ego_lane = 1;
    for (int i = 0; i < 200; ++i) {
      ++total;
      std::vector<double> p;
      double v = u(8.0, 35.0);
      if (mode == Mode::Braking) {
        const double d = u(1.0, 8.0);
        p = {d, v, -std::min(v - 1.0, d * u(0.8, 6.0))};
      } else if (mode == Mode::Accelerating) {
        const double d = u(1.0, 8.0);
        p = {d, v, d * u(0.8, 3.0)};
      } else {
        p = {u(2.5, 8.0), (mode == Mode::LaneChangeLeft ? 1.0 : -1.0) * u(3.0, 3.8)};
      }
      ScenarioDraw draw;
      draw.slots = {{p, 1.0}};
      draw.context = {{v, 40.0, v}, 1.0};
      const TestScenario ts = synthesize_trajectories(m, draw, r, opts);
      const ActorTrack track = to_track(ts.objects[0]);
      const Channel ch = channel_of(mode);
      const auto events = ch == Channel::Longitudinal ? detect_longitudinal_events(track, {})
                                                      : detect_lateral_events(track, {});
      const auto acts = segment_activities(
        events, track, ch, ch == Channel::Longitudinal ? Mode::Cruising : Mode::LaneFollowing);
      const Activity * hit = nullptr;
      int hits = 0;
      for (const auto & a : acts) {
        if (a.mode == mode) {
          hit = &a;
          ++hits;
        }
      }
      if (hits != 1) continue;
      const double e_dur = std::abs(hit->params.get("duration") - p[0]);
      worst_duration = std::max(worst_duration, e_dur);
      bool ok = e_dur <= 2.0 * opts.dt;
      if (ch == Channel::Longitudinal) {
        const double e_v = std::abs(hit->params.get("v_start") - p[1]);
        const double e_dv = std::abs(hit->params.get("delta_v") - p[2]);
        worst_v = std::max(worst_v, e_v);
        worst_dv = std::max(worst_dv, e_dv);
        ok = ok && e_v <= 0.1 && e_dv <= 0.1;
      } else {
        const double e_w = std::abs(hit->params.get("lateral_displacement") - p[1]);
        worst_disp = std::max(worst_disp, e_w);
        ok = ok && e_w <= 0.05;
      }
      passed += ok ? 1 : 0;
    }
  }
  return {passed == total,
          std::to_string(passed) + "/" + std::to_string(total) + " draws recovered; worst errors: duration " +
            fmt(worst_duration) + " s, v_start " + fmt(worst_v) + ", delta_v " + fmt(worst_dv) +
            ", displacement " + fmt(worst_disp)};
}

// --- 3 ----------------------------------------------------------------------

std::vector<std::vector<double>> normal_points(std::size_t n, std::size_t dim, std::uint64_t seed)
{
  CounterRng rng(seed);
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (auto & p : pts) {
    for (auto & v : p) v = rng.normal();
  }
  return pts;
}

Outcome density_correctness()
{
  std::vector<std::string> problems;
  double worst_rel = 0.0;
  for (std::size_t dim : {1u, 2u, 3u}) {
    const auto pts = normal_points(250, dim, 30 + dim);
    const ParameterDensity d = fit_density(pts);
    CounterRng rng(300 + dim);
    for (int probe = 0; probe < 1000; ++probe) {
      std::vector<double> x(dim);
      for (auto & v : x) v = 3.0 * rng.normal();
      const double want = sf_test::kde_oracle(pts, d.bandwidth, x);
      worst_rel = std::max(worst_rel, std::abs(eval_density(d, x) - want) / want);
    }
  }
  if (worst_rel > 1e-12) problems.push_back("oracle mismatch " + fmt(worst_rel));

  // Integrals over the +-8 bandwidth box around the data.
  const auto pts1 = normal_points(500, 1, 41);
  const ParameterDensity d1 = fit_density(pts1);
  double lo = 1e300, hi = -1e300;
  for (const auto & p : pts1) {
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  lo -= 8.0 * d1.bandwidth[0];
  hi += 8.0 * d1.bandwidth[0];
  const int n1 = 20000;
  double int1 = 0.0;
  for (int i = 0; i <= n1; ++i) {
    const double x = lo + (hi - lo) * i / n1;
    int1 += (i == 0 || i == n1 ? 0.5 : 1.0) * eval_density(d1, std::span<const double>(&x, 1));
  }
  int1 *= (hi - lo) / n1;

  const auto pts2 = normal_points(200, 2, 42);
  const ParameterDensity d2 = fit_density(pts2);
  double lo2[2] = {1e300, 1e300}, hi2[2] = {-1e300, -1e300};
  for (const auto & p : pts2) {
    for (int k = 0; k < 2; ++k) {
      lo2[k] = std::min(lo2[k], p[k] - 8.0 * d2.bandwidth[k]);
      hi2[k] = std::max(hi2[k], p[k] + 8.0 * d2.bandwidth[k]);
    }
  }
  const int n2 = 400;
  double int2 = 0.0;
  for (int i = 0; i <= n2; ++i) {
    for (int j = 0; j <= n2; ++j) {
      const double w = (i == 0 || i == n2 ? 0.5 : 1.0) * (j == 0 || j == n2 ? 0.5 : 1.0);
      const double x[2] = {lo2[0] + (hi2[0] - lo2[0]) * i / n2, lo2[1] + (hi2[1] - lo2[1]) * j / n2};
      int2 += w * eval_density(d2, x);
    }
  }
  int2 *= (hi2[0] - lo2[0]) / n2 * (hi2[1] - lo2[1]) / n2;
  if (std::abs(int1 - 1.0) > 1e-3) problems.push_back("1-D integral " + fmt(int1));
  if (std::abs(int2 - 1.0) > 1e-3) problems.push_back("2-D integral " + fmt(int2));

  // KS of 10^4 samples against the kernel mixture CDF.
  const auto draws = sample(d1, 10000, 43);
  std::vector<double> xs;
  for (const auto & p : draws) xs.push_back(p[0]);
  std::sort(xs.begin(), xs.end());
  std::vector<double> train;
  for (const auto & p : pts1) train.push_back(p[0]);
  double ks = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = sf_test::kde_cdf_oracle(train, d1.bandwidth[0], xs[i]);
    ks = std::max({ks, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  const double crit = sf_test::ks_critical_1pct(xs.size());
  if (ks >= crit) problems.push_back("KS " + fmt(ks) + " >= " + fmt(crit));

  std::string detail = "max rel error " + fmt(worst_rel) + ", integrals " + fmt(int1) + " / " +
                       fmt(int2) + ", KS " + fmt(ks) + " < " + fmt(crit);
  if (!problems.empty()) {
    detail.clear();
    for (const auto & p : problems) detail += (detail.empty() ? "" : "; ") + p;
  }
  return {problems.empty(), detail};
}

// --- 4 ----------------------------------------------------------------------

Outcome tail_bias_validity()
{
  const ParameterDensity d = fit_density(normal_points(1000, 1, 51));
  const auto plain = sample(d, 10000, 52);
  const auto biased = sample_tail_biased(d, 10000, 2.0, 53);
  double plain_abs = 0.0, plain_sq = 0.0, biased_abs = 0.0;
  for (const auto & p : plain) {
    plain_abs += std::abs(p[0]);
    plain_sq += p[0] * p[0];
  }
  std::vector<double> sq;
  for (const auto & w : biased) {
    biased_abs += std::abs(w.point[0]);
    sq.push_back(w.point[0] * w.point[0]);
  }
  plain_abs /= 1e4;
  biased_abs /= 1e4;
  plain_sq /= 1e4;
  const double is_sq = weighted_mean(biased, sq);
  const double rel = std::abs(is_sq - plain_sq) / plain_sq;
  return {biased_abs > plain_abs && rel < 0.05,
          "mean |x| " + fmt(biased_abs) + " vs " + fmt(plain_abs) + ", E[x^2] " + fmt(is_sq) +
            " vs " + fmt(plain_sq) + " (" + fmt(100 * rel) + "%)"};
}

// --- 5 ----------------------------------------------------------------------

TestScenario random_scenario(std::uint64_t seed)
{
  CounterRng rng(seed);
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  TestScenario ts;
  ts.id = "random-" + std::to_string(seed);
  ts.road = road("motorway-2lane");
  ts.horizon = 8.0;
  const double v0 = u(10.0, 30.0);
  ts.ego = {{"right"}, v0 + u(0.0, 5.0), 100.0, v0, {}};
  const int n_obj = 1 + static_cast<int>(rng.uniform() * 3);
  for (int k = 0; k < n_obj; ++k) {
    DynamicObject obj;
    obj.actor = "obj" + std::to_string(k);
    obj.length = u(3.5, 12.0);
    obj.width = u(1.6, 2.6);
    const double x0 = 100.0 + u(-40.0, 80.0);
    const double lane0 = rng.uniform() < 0.6 ? 0.0 : 3.5;
    const double v = u(0.0, 35.0);
    const double a = u(-4.0, 2.0);
    const bool changes = rng.uniform() < 0.4;
    const double lc_t0 = u(0.0, 5.0), lc_d = u(2.0, 5.0);
    const double disp = lane0 == 0.0 ? 3.5 : -3.5;
    double x = x0, speed = v;
    for (int j = 0; j <= 80; ++j) {
      const double t = 0.1 * j;
      const double uu = (t - lc_t0) / lc_d;
      const double y = lane0 + (changes ? disp * quintic(uu) : 0.0);
      const double lat = changes ? disp / lc_d * quintic_rate(uu) : 0.0;
      const double heading = speed > 0.1 ? std::atan2(lat, speed) : 0.0;
      obj.trajectory.push_back({t, x, y, speed, heading, speed > 0.0 ? a : 0.0, y > 1.75 ? 0 : 1});
      const double next = std::max(0.0, speed + 0.1 * a);
      x += 0.5 * (speed + next) * 0.1;
      speed = next;
    }
    ts.objects.push_back(obj);
  }
  return ts;
}

Outcome simulator_oracles()
{
  std::vector<std::string> problems;
  int collisions = 0, flag_mismatch = 0, dist_mismatch = 0;
  double worst_dist = 0.0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const SimulationResult res = run_scenario(random_scenario(s), SimConfig{}, s);
    bool overlap = false;
    double oracle = std::numeric_limits<double>::infinity();
    const Trace & tr = res.trace;
    for (const auto & step : tr.steps) {
      const auto ego = sf_test::rect(step.ego.x, step.ego.y, step.ego.heading, tr.ego_length, tr.ego_width);
      for (const auto & o : step.objects) {
        const auto box = sf_test::rect(o.x, o.y, o.heading, o.length, o.width);
        overlap = overlap || sf_test::rects_overlap(ego, box);
        oracle = std::min(oracle, sf_test::rect_distance(ego, box));
      }
    }
    collisions += overlap ? 1 : 0;
    if (overlap != res.kpis.collision) ++flag_mismatch;
    if (overlap) oracle = 0.0;
    const double err = std::abs(oracle - res.kpis.min_distance);
    worst_dist = std::max(worst_dist, err);
    if (!(err <= 1e-9)) ++dist_mismatch;
  }
  if (flag_mismatch) problems.push_back(std::to_string(flag_mismatch) + " collision flag mismatches");
  if (dist_mismatch) problems.push_back(std::to_string(dist_mismatch) + " distance mismatches");
  if (collisions == 0 || collisions == 500) problems.push_back("randomized set does not discriminate");

  // TTC spot values: gap over closing speed.
  int ttc_checked = 0;
  for (const auto [gap, closing] : {std::pair{20.0, 5.0}, {10.0, 10.0}, {33.0, 3.0}, {7.5, 2.5}, {50.0, 0.5}}) {
    Trace tr;
    tr.v_max = 50.0;
    TraceStep step;
    step.ego = {0.0, 0.0, 0.0, 20.0, 0.0};
    const double cx = gap + 4.5;
    step.objects.push_back({"lead", cx, 0.3, 0.0, 4.5, 1.8, {cx, 0.3, -closing, 0.0, 0.0, 0.0}});
    tr.steps.push_back(step);
    const double got = compute_kpis(tr).min_ttc;
    if (std::abs(got - gap / closing) > 1e-12 * (gap / closing)) {
      problems.push_back("TTC " + fmt(got) + " for gap " + fmt(gap) + " closing " + fmt(closing));
    }
    ++ttc_checked;
  }

  // Isometry of the ego-frame transform.
  CounterRng rng(55);
  double worst_iso = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const EgoState e{200 * rng.uniform() - 100, 200 * rng.uniform() - 100, 7 * rng.uniform() - 3.5,
                     30 * rng.uniform(), 4 * rng.uniform() - 2};
    const ObjectState a{200 * rng.uniform() - 100, 200 * rng.uniform() - 100, 0, 0, 0, 0};
    const ObjectState b{200 * rng.uniform() - 100, 200 * rng.uniform() - 100, 0, 0, 0, 0};
    const ObjectState ra = to_ego_frame(e, a), rb = to_ego_frame(e, b);
    worst_iso = std::max(worst_iso, std::abs(std::hypot(ra.x - rb.x, ra.y - rb.y) -
                                             std::hypot(a.x - b.x, a.y - b.y)));
  }
  if (worst_iso > 1e-12) problems.push_back("isometry error " + fmt(worst_iso));

  std::string detail = "500 runs (" + std::to_string(collisions) +
                       " colliding) agree with the rectangle oracle, worst distance error " +
                       fmt(worst_dist) + "; " + std::to_string(ttc_checked) +
                       " TTC spot values exact; isometry error " + fmt(worst_iso);
  if (!problems.empty()) {
    detail.clear();
    for (const auto & p : problems) detail += (detail.empty() ? "" : "; ") + p;
  }
  return {problems.empty(), detail};
}

// --- 6 ----------------------------------------------------------------------

std::map<std::string, std::string> snapshot(const fs::path & root)
{
  std::map<std::string, std::string> files;
  for (const auto & e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  }
  return files;
}

std::vector<ScenarioRecord> records_of(const ScenarioDatabase & db, const std::string & pattern)
{
  std::vector<ScenarioRecord> out;
  for (const auto & id : db.scenario_ids()) {
    ScenarioRecord r = db.fetch_scenario(id);
    if (r.pattern == pattern) out.push_back(std::move(r));
  }
  return out;
}

/// Library-level run of the whole pipeline into `dir`.
void run_pipeline(const fs::path & dir)
{
  const PipelineConfig cfg;
  for (std::uint64_t k = 0; k < 12; ++k) {
    const LogScript s = k == 0 ? overtake_pair_script() : overtake_pair_script(jitter_overtake_pair(k));
    write_file(dir / "logs" / ("log-" + std::to_string(k) + ".csv"), write_log_csv(render_log(s)));
  }
  ScenarioDatabase db(dir / "db");
  const auto patterns = default_patterns();
  for (std::uint64_t k = 0; k < 12; ++k) {
    const std::string id = "log-" + std::to_string(k);
    auto [clean, cleaning] = clean_log(parse_log(dir / "logs" / (id + ".csv")), cfg.cleaning);
    db.store_log(id, resample_log(clean, cfg.resample_dt));
    const DrivingLog log = db.fetch_log(id);
    db.store_decomposition(id, decompose_log(log, cfg.thresholds));
    for (ScenarioRecord r : mine_scenarios(log, db.fetch_decomposition(id), patterns)) {
      db.store_scenario(auto_tag(std::move(r), log, patterns, db.taxonomy()));
    }
  }
  const ClassModel model = extract_class(records_of(db, "overtake-of-ego"));
  db.store_class(model);
  db.store_densities(fit_class(model));
  const ClassDensities dens = db.fetch_densities("overtake-of-ego");
  const auto library = road_library();
  const RoadNetwork & r = select_road(TagQuery::parse("road:motorway"), library, db.taxonomy());
  const auto batch = generate_batch(dens, 30, 2.0, r, 7, cfg.synthesis);
  write_file(dir / "batch.json", dump_json_array(batch));
  VerificationCriteria crit = cfg.verification;
  crit.fault_variants = {{FaultInjection::Kind::Blackout, 2.0, 6.0, 0.0}};
  const auto verified = verify_scenarios(load_json_array<TestScenario>(read_file(dir / "batch.json")), crit);
  write_file(dir / "verified.json", dump_json_array(verified));
  const auto results = run_batch(verified, cfg.sim, 11, 2);
  for (const auto & res : results) write_file(dir / "results" / (sanitize_id(res.scenario_id) + ".json"), dump_json(res));
  SafetyReport rep = aggregate(results, verified);
  write_file(dir / "report.json", render(rep, ReportFormat::Json));
  write_file(dir / "report.txt", render(rep, ReportFormat::Text));
}

int run(const std::string & cmd)
{
  return std::system((cmd + " > /dev/null 2>&1").c_str());
}

/// The same pipeline through the command-line tool. Returns an error or "".
std::string run_cli_pipeline(const std::string & cli, const fs::path & dir)
{
  const std::string base = "\"" + cli + "\" -q --db \"" + (dir / "db").string() + "\" ";
  const std::string d = "\"" + dir.string() + "\"";
  if (run(base + "synth --variants 11 --random 0 --seed 1 --out " + d + "/logs") != 0) return "synth failed";
  for (const auto & e : fs::directory_iterator(dir / "logs")) {
    const std::string id = e.path().stem().string();
    if (run(base + "ingest \"" + e.path().string() + "\"") != 0) return "ingest failed";
    if (run(base + "decompose " + id) != 0) return "decompose failed";
    if (run(base + "mine " + id) != 0) return "mine failed";
  }
  if (run(base + "fit overtake-of-ego") != 0) return "fit failed";
  if (run(base + "generate overtake-of-ego -n 30 --seed 7 --out " + d + "/batch.json") != 0) return "generate failed";
  if (run(base + "verify " + d + "/batch.json --fault blackout:2:6 --out " + d + "/verified.json") != 0) return "verify failed";
  if (run(base + "simulate " + d + "/verified.json --seed 11 --jobs 2 --out " + d + "/results") != 0) return "simulate failed";
  if (run(base + "report " + d + "/results " + d + "/verified.json --out " + d + "/report.json") != 0) return "report failed";
  return {};
}

Outcome end_to_end_determinism(const std::string & cli)
{
  sf_test::TempDir a("accept-a"), b("accept-b");
  run_pipeline(a.path());
  run_pipeline(b.path());
  const auto fa = snapshot(a.path()), fb = snapshot(b.path());
  std::size_t results = 0;
  for (const auto & [name, _] : fa) results += name.rfind("results/", 0) == 0 ? 1 : 0;
  if (fa != fb) return {false, "library pipeline output differs between runs"};
  if (results == 0 || !fa.count("report.json")) return {false, "library pipeline produced no results"};
  std::string detail = std::to_string(fa.size()) + " files identical across two library runs (" +
                       std::to_string(results) + " results)";
  if (!cli.empty()) {
    sf_test::TempDir c("accept-c"), d("accept-d");
    for (const auto * dir : {&c, &d}) {
      if (const std::string err = run_cli_pipeline(cli, dir->path()); !err.empty()) {
        return {false, "command-line pipeline: " + err};
      }
    }
    const auto fc = snapshot(c.path()), fd = snapshot(d.path());
    if (fc != fd) return {false, "command-line pipeline output differs between runs"};
    detail += "; " + std::to_string(fc.size()) + " files identical across two command-line runs";
  }
  return {true, detail};
}

// --- 7 ----------------------------------------------------------------------

Outcome fault_discrimination()
{
  std::vector<ScenarioRecord> records;
  const auto patterns = default_patterns();
  const std::vector<std::string> braking{"lead-braking"};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const DrivingLog log = render_log(pattern_instances_script(braking, seed));
    for (auto & r : mine_scenarios(log, decompose_log(log), patterns)) records.push_back(r);
  }
  const ClassDensities dens = fit_class(extract_class(records));
  const auto batch = generate_batch(dens, 40, 2.0, road("motorway-2lane"), 77);
  // The braking slot opens after the synthesis lead-in; blind the sensor from
  // then on for four seconds.
  const double t0 = SynthesisOptions{}.lead_in;
  VerificationCriteria crit;
  crit.fault_variants = {{FaultInjection::Kind::Blackout, t0, t0 + 4.0, 0.0}};
  const auto verified = verify_scenarios(batch, crit);
  const auto results = run_batch(verified, SimConfig{}, 5, 1);
  std::map<std::string, const SimulationResult *> nominal;
  for (const auto & r : results) {
    if (r.variant == "nominal") nominal[r.scenario_id] = &r;
  }
  std::size_t pairs = 0, worse = 0, nominal_collisions = 0, fault_collisions = 0;
  for (const auto & r : results) {
    if (r.variant != "blackout") continue;
    const auto * n = nominal.at(r.scenario_id.substr(0, r.scenario_id.find('~')));
    ++pairs;
    nominal_collisions += n->kpis.collision ? 1 : 0;
    fault_collisions += r.kpis.collision ? 1 : 0;
    if (r.kpis.collision || r.kpis.min_ttc < n->kpis.min_ttc) ++worse;
  }
  return {pairs > 0 && worse == pairs,
          std::to_string(worse) + "/" + std::to_string(pairs) +
            " blackout variants strictly worse than nominal (collisions " +
            std::to_string(nominal_collisions) + " nominal, " + std::to_string(fault_collisions) +
            " blackout)"};
}

// --- 8 ----------------------------------------------------------------------

Outcome database_audit()
{
  sf_test::TempDir dir("accept-db");
  ScenarioDatabase db(dir.path() / "db");
  const auto patterns = default_patterns();
  const PipelineConfig cfg;
  std::size_t replaced = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const std::string id = "random-" + std::to_string(k);
    const DrivingLog raw = parse_log_text(write_log_csv(random_log(1000 + k)), id);
    auto [clean, cleaning] = clean_log(raw, cfg.cleaning);
    replaced += cleaning.total();
    db.store_log(id, resample_log(clean, cfg.resample_dt));
    const DrivingLog log = db.fetch_log(id);
    db.store_decomposition(id, decompose_log(log));
    for (ScenarioRecord r : mine_scenarios(log, db.fetch_decomposition(id), patterns)) {
      db.store_scenario(auto_tag(std::move(r), log, patterns, db.taxonomy()));
    }
  }
  const AuditReport audit = db.audit();

  const Taxonomy tax = db.taxonomy();
  std::map<std::string, TagSet> stored;
  for (const auto & id : db.scenario_ids()) stored[id] = db.fetch_scenario(id).tags;
  const auto refs = sf_test::all_refs(tax);
  CounterRng rng(808);
  std::size_t agree = 0, nonempty = 0;
  for (int q = 0; q < 1000; ++q) {
    const sf_test::Expr e = sf_test::random_expr(rng, refs, 3);
    std::vector<std::string> expected;
    for (const auto & [id, tags] : stored) {
      if (sf_test::eval(e, tax, tags)) expected.push_back(id);
    }
    nonempty += expected.empty() ? 0 : 1;
    agree += db.query_scenarios(e.str()) == expected ? 1 : 0;
  }
  return {audit.ok() && audit.records == stored.size() && agree == 1000 && !stored.empty(),
          std::to_string(stored.size()) + " records from 50 logs (" + std::to_string(replaced) +
            " samples cleaned), " + std::to_string(audit.violations.size()) + " violations, " +
            std::to_string(agree) + "/1000 queries match the oracle (" + std::to_string(nonempty) +
            " non-empty)"};
}

}  // namespace

int main(int argc, char ** argv)
{
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
    {"overtake pair structural reproduction", overtake_pair_reproduction},
    {"decompose/synthesize closure", decompose_synthesize_closure},
    {"density correctness", density_correctness},
    {"tail-bias validity", tail_bias_validity},
    {"simulator oracles", simulator_oracles},
    {"end-to-end determinism", [&] { return end_to_end_determinism(cli); }},
    {"fault-injection discrimination", fault_discrimination},
    {"database audit", database_audit},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception & e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << " (" << o.detail << ") [" << fmt(secs) << " s]" << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed;
}
