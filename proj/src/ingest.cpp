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

#include "scenario_forge/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "scenario_forge/error.hpp"
#include "scenario_forge/format.hpp"

namespace scenario_forge
{

namespace
{

std::vector<std::string_view> split(std::string_view line, char delim)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void malformed(std::size_t line, const std::string & what)
{
  fail(ErrorKind::MalformedRow, "line " + std::to_string(line) + ": " + what);
}

double median(std::vector<double> values)
{
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(values.begin(), mid);
  return 0.5 * (lo + hi);
}

void derive_missing_headings(std::vector<Sample> & samples)
{
  const std::size_t n = samples.size();
  double last = 0.0;
  bool have_last = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isnan(samples[i].heading)) {
      last = samples[i].heading;
      have_last = true;
      continue;
    }
    const std::size_t a = (i + 1 < n) ? i : (i > 0 ? i - 1 : i);
    const std::size_t b = (i + 1 < n) ? i + 1 : i;
    const double dx = samples[b].x - samples[a].x;
    const double dy = samples[b].y - samples[a].y;
    if (a != b && std::hypot(dx, dy) > 1e-9) {
      samples[i].heading = std::atan2(dy, dx);
    } else {
      samples[i].heading = have_last ? last : 0.0;
    }
    last = samples[i].heading;
    have_last = true;
  }
}

double estimate_dt(const std::vector<ActorTrack> & tracks)
{
  std::vector<double> steps;
  for (const auto & tr : tracks) {
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
      steps.push_back(tr.samples[i].t - tr.samples[i - 1].t);
    }
  }
  if (steps.empty()) return 0.1;
  // Snap away the rounding noise of decimal timestamps.
  return std::round(median(std::move(steps)) * 1e9) / 1e9;
}

}  // namespace

std::size_t ActorTrack::index_at(double t) const
{
  if (samples.empty()) return 0;
  auto it = std::lower_bound(samples.begin(), samples.end(), t,
                             [](const Sample & s, double v) { return s.t < v; });
  if (it == samples.end()) return samples.size() - 1;
  std::size_t idx = static_cast<std::size_t>(it - samples.begin());
  if (idx > 0 && std::abs(samples[idx - 1].t - t) <= std::abs(it->t - t)) --idx;
  return idx;
}

const ActorTrack & DrivingLog::ego() const
{
  for (const auto & tr : actors) {
    if (tr.is_ego) return tr;
  }
  fail(ErrorKind::NoEgoActor, "log '" + source_id + "' has no ego actor");
}

const ActorTrack * DrivingLog::find(std::string_view actor) const
{
  for (const auto & tr : actors) {
    if (tr.actor == actor) return &tr;
  }
  return nullptr;
}

double DrivingLog::t_begin() const
{
  double t = std::numeric_limits<double>::infinity();
  for (const auto & tr : actors) {
    if (!tr.samples.empty()) t = std::min(t, tr.t_begin());
  }
  return std::isfinite(t) ? t : 0.0;
}

double DrivingLog::t_end() const
{
  double t = -std::numeric_limits<double>::infinity();
  for (const auto & tr : actors) {
    if (!tr.samples.empty()) t = std::max(t, tr.t_end());
  }
  return std::isfinite(t) ? t : 0.0;
}

DrivingLog parse_log(const std::filesystem::path & path, const CsvFormat & format)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::StorageFailure, "cannot open log '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_log_text(buf.str(), path.stem().string(), format);
}

DrivingLog parse_log_text(std::string_view text, std::string source_id, const CsvFormat & format)
{
  DrivingLog log;
  log.source_id = std::move(source_id);

  std::map<std::string, std::size_t> column;
  bool have_header = false;
  std::size_t width = 0;
  std::map<ActorId, std::size_t> track_of;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) {
      if (nl == text.size()) break;
      continue;
    }

    if (!have_header) {
      if (line.rfind(format.metadata_prefix, 0) == 0) {
        auto body = trim(line.substr(format.metadata_prefix.size()));
        const auto eq = body.find('=');
        if (eq != std::string_view::npos) {
          auto & values = log.metadata[std::string(trim(body.substr(0, eq)))];
          for (auto v : split(body.substr(eq + 1), ',')) {
            if (!v.empty()) values.emplace_back(v);
          }
        }
        continue;
      }
      const auto names = split(line, format.delimiter);
      for (std::size_t i = 0; i < names.size(); ++i) column.emplace(std::string(names[i]), i);
      std::string missing;
      for (const auto & c : log_columns()) {
        if (column.count(c) == 0) missing += (missing.empty() ? "" : ", ") + c;
        else width = std::max(width, column[c] + 1);
      }
      if (!missing.empty()) {
        fail(ErrorKind::MissingColumn, "missing column(s): " + missing);
      }
      have_header = true;
      continue;
    }

    const auto fields = split(line, format.delimiter);
    if (fields.size() < width) malformed(line_no, "expected at least " + std::to_string(width) +
                                                    " fields");
    auto num = [&](const char * name) {
      auto v = parse_double(fields[column[name]]);
      if (!v || !std::isfinite(*v)) malformed(line_no, std::string("bad value for ") + name);
      return *v;
    };

    Sample s;
    s.t = num("t");
    s.x = num("x");
    s.y = num("y");
    s.v = num("v");
    s.a = num("a");
    const auto heading_text = fields[column["heading"]];
    if (heading_text.empty()) {
      s.heading = std::numeric_limits<double>::quiet_NaN();
    } else {
      s.heading = num("heading");
    }
    const auto lane = parse_int(fields[column["lane_index"]]);
    if (!lane) malformed(line_no, "bad value for lane_index");
    s.lane_index = static_cast<int>(*lane);

    const auto ego_text = fields[column["is_ego"]];
    bool is_ego = false;
    if (ego_text == "1" || ego_text == "true" || ego_text == "True") {
      is_ego = true;
    } else if (!(ego_text == "0" || ego_text == "false" || ego_text == "False")) {
      malformed(line_no, "bad value for is_ego");
    }

    const std::string actor(fields[column["actor_id"]]);
    if (actor.empty()) malformed(line_no, "empty actor_id");
    auto [it, inserted] = track_of.emplace(actor, log.actors.size());
    if (inserted) {
      log.actors.push_back(ActorTrack{actor, is_ego, {}});
    }
    ActorTrack & track = log.actors[it->second];
    if (track.is_ego != is_ego) malformed(line_no, "inconsistent is_ego for actor " + actor);
    if (!track.samples.empty() && !(s.t > track.samples.back().t)) {
      malformed(line_no, "non-increasing timestamp for actor " + actor);
    }
    track.samples.push_back(s);
  }

  if (!have_header) {
    fail(ErrorKind::MissingColumn, "log has no header row");
  }
  const auto egos = std::count_if(log.actors.begin(), log.actors.end(),
                                  [](const ActorTrack & t) { return t.is_ego; });
  if (egos == 0) {
    fail(ErrorKind::NoEgoActor, "no actor flagged is_ego in '" + log.source_id + "'");
  }
  if (egos > 1) {
    fail(ErrorKind::InvariantViolation, "more than one ego actor in '" + log.source_id + "'");
  }
  for (auto & tr : log.actors) derive_missing_headings(tr.samples);
  log.dt = estimate_dt(log.actors);
  return log;
}

std::string write_log_csv(const DrivingLog & log)
{
  std::string out;
  for (const auto & [key, values] : log.metadata) {
    out += "# " + key + "=";
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + values[i];
    out += '\n';
  }
  const auto & cols = log_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  for (const auto & tr : log.actors) {
    for (const auto & s : tr.samples) {
      out += format_double(s.t) + ',' + tr.actor + ',' + (tr.is_ego ? "1" : "0") + ',' +
             format_double(s.x) + ',' + format_double(s.y) + ',' + format_double(s.v) + ',' +
             format_double(s.a) + ',' + format_double(s.heading) + ',' +
             std::to_string(s.lane_index) + '\n';
    }
  }
  return out;
}

std::vector<std::string> check_log(const DrivingLog & log)
{
  std::vector<std::string> bad;
  if (!(log.dt > 0.0)) bad.push_back("dt must be positive");
  const auto egos = std::count_if(log.actors.begin(), log.actors.end(),
                                  [](const ActorTrack & t) { return t.is_ego; });
  if (egos != 1) bad.push_back("expected exactly one ego actor");
  std::set<ActorId> ids;
  for (const auto & tr : log.actors) {
    if (!ids.insert(tr.actor).second) bad.push_back("duplicate actor " + tr.actor);
    if (tr.samples.empty()) bad.push_back("empty track " + tr.actor);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
      if (!(tr.samples[i].t > tr.samples[i - 1].t)) {
        bad.push_back("non-increasing time in track " + tr.actor);
        break;
      }
    }
  }
  return bad;
}

std::size_t CleaningReport::total() const
{
  std::size_t n = 0;
  for (const auto & [channel, count] : replacements) n += count;
  return n;
}

namespace
{

/// Flags samples that are implausible or deviate from the centered rolling
/// median by more than k scaled MADs.
/// Bounds and the rolling median/MAD rule. For position channels a sample
/// that jumps further than v_max * dt away from both neighbours is also
/// flagged; the MAD rule alone breaks down once half a window is corrupt.
std::vector<bool> detect_outliers(const std::vector<double> & values,
                                  const std::vector<Sample> & samples, const CleaningPolicy & policy,
                                  double lo, double hi, bool positional)
{
  const std::size_t n = values.size();
  const std::size_t half = static_cast<std::size_t>(std::max(policy.window, 1) / 2);
  std::vector<bool> flags(n, false);
  std::vector<double> win;
  std::vector<double> dev;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] < lo || values[i] > hi) {
      flags[i] = true;
      continue;
    }
    if (n < 3) continue;
    if (positional && i > 0 && i + 1 < n) {
      const double before = policy.v_max * (samples[i].t - samples[i - 1].t);
      const double after = policy.v_max * (samples[i + 1].t - samples[i].t);
      if (std::abs(values[i] - values[i - 1]) > before && std::abs(values[i + 1] - values[i]) > after) {
        flags[i] = true;
        continue;
      }
    }
    const std::size_t b = i >= half ? i - half : 0;
    const std::size_t e = std::min(n, i + half + 1);
    win.assign(values.begin() + static_cast<std::ptrdiff_t>(b),
               values.begin() + static_cast<std::ptrdiff_t>(e));
    const double med = median(win);
    dev.clear();
    for (double w : win) dev.push_back(std::abs(w - med));
    const double scale = 1.4826 * median(dev);
    const double d = std::abs(values[i] - med);
    if (d > policy.min_deviation && d > policy.k_mad * scale) flags[i] = true;
  }
  return flags;
}

/// Linear interpolation over flagged samples from the nearest unflagged ones.
std::vector<double> interpolate_flagged(const std::vector<Sample> & samples,
                                        const std::vector<double> & values,
                                        const std::vector<bool> & flags)
{
  const std::size_t n = values.size();
  std::vector<double> out = values;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (!flags[i]) keep.push_back(i);
  }
  if (keep.empty()) return out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!flags[i]) continue;
    auto it = std::lower_bound(keep.begin(), keep.end(), i);
    if (it == keep.begin()) {
      out[i] = values[keep.front()];
    } else if (it == keep.end()) {
      out[i] = values[keep.back()];
    } else {
      const std::size_t r = *it;
      const std::size_t l = *(it - 1);
      const double f = (samples[i].t - samples[l].t) / (samples[r].t - samples[l].t);
      out[i] = values[l] + f * (values[r] - values[l]);
    }
  }
  return out;
}

}  // namespace

std::pair<DrivingLog, CleaningReport> clean_log(const DrivingLog & log,
                                                const CleaningPolicy & policy)
{
  if (policy.window < 1 || !(policy.k_mad > 0.0)) {
    fail(ErrorKind::InvalidArgument, "cleaning window and k must be positive");
  }
  DrivingLog out = log;
  CleaningReport report;
  constexpr double inf = std::numeric_limits<double>::infinity();

  struct ChannelSpec
  {
    const char * name;
    double Sample::*field;
    double lo;
    double hi;
    bool positional;
  };
  const ChannelSpec channels[] = {
    {"x", &Sample::x, -inf, inf, true},
    {"y", &Sample::y, -inf, inf, true},
    {"v", &Sample::v, policy.v_min, policy.v_max, false},
    {"a", &Sample::a, -policy.a_abs_max, policy.a_abs_max, false},
  };

  for (auto & track : out.actors) {
    auto & samples = track.samples;
    const std::size_t n = samples.size();
    for (const auto & ch : channels) {
      std::vector<double> original(n);
      for (std::size_t i = 0; i < n; ++i) original[i] = samples[i].*ch.field;

      std::vector<bool> replaced(n, false);
      std::vector<double> work = original;
      for (int pass = 0; pass < policy.max_passes; ++pass) {
        const auto flags = detect_outliers(work, samples, policy, ch.lo, ch.hi, ch.positional);
        bool grew = false;
        for (std::size_t i = 0; i < n; ++i) {
          if (flags[i] && !replaced[i]) {
            replaced[i] = true;
            grew = true;
          }
        }
        if (!grew) break;
        work = interpolate_flagged(samples, original, replaced);
      }

      const auto count = static_cast<std::size_t>(std::count(replaced.begin(), replaced.end(), true));
      if (n > 0 && static_cast<double>(count) / static_cast<double>(n) > policy.max_outlier_fraction) {
        fail(ErrorKind::TooManyOutliers,
             "actor " + track.actor + " channel " + ch.name + ": " + std::to_string(count) + " of " +
               std::to_string(n) + " samples are outliers");
      }
      for (std::size_t i = 0; i < n; ++i) {
        samples[i].*ch.field = std::clamp(work[i], ch.lo, ch.hi);
      }
      report.replacements[ch.name] += count;
      report.per_actor[track.actor][ch.name] += count;
    }
  }
  return {std::move(out), std::move(report)};
}

namespace
{

double lerp(double a, double b, double f) { return a + f * (b - a); }

double lerp_angle(double a, double b, double f)
{
  double d = std::remainder(b - a, 2.0 * M_PI);
  return std::remainder(a + f * d, 2.0 * M_PI);
}

}  // namespace

DrivingLog resample_log(const DrivingLog & log, double dt_target)
{
  if (!(dt_target > 0.0) || !std::isfinite(dt_target)) {
    fail(ErrorKind::InvalidArgument, "dt_target must be positive");
  }
  for (const auto & tr : log.actors) {
    if (tr.samples.empty()) fail(ErrorKind::EmptyTrack, "track " + tr.actor + " has no samples");
  }

  DrivingLog out;
  out.dt = dt_target;
  out.source_id = log.source_id;
  out.metadata = log.metadata;
  const double origin = log.t_begin();
  const double snap = 1e-9 * dt_target;

  for (const auto & tr : log.actors) {
    ActorTrack res{tr.actor, tr.is_ego, {}};
    const auto & s = tr.samples;
    const auto k0 = static_cast<long long>(std::ceil((tr.t_begin() - origin) / dt_target - 1e-9));
    const auto k1 = static_cast<long long>(std::floor((tr.t_end() - origin) / dt_target + 1e-9));
    std::size_t j = 0;
    for (long long k = k0; k <= k1; ++k) {
      const double t = origin + static_cast<double>(k) * dt_target;
      while (j + 1 < s.size() && s[j + 1].t <= t + snap) ++j;
      if (std::abs(s[j].t - t) <= snap || j + 1 >= s.size()) {
        Sample copy = s[j];
        if (std::abs(s[j].t - t) > snap) copy.t = t;
        res.samples.push_back(copy);
        continue;
      }
      const Sample & a = s[j];
      const Sample & b = s[j + 1];
      const double f = (t - a.t) / (b.t - a.t);
      Sample r;
      r.t = t;
      r.x = lerp(a.x, b.x, f);
      r.y = lerp(a.y, b.y, f);
      r.v = lerp(a.v, b.v, f);
      r.a = lerp(a.a, b.a, f);
      r.heading = lerp_angle(a.heading, b.heading, f);
      r.lane_index = f < 0.5 ? a.lane_index : b.lane_index;
      res.samples.push_back(r);
    }
    if (res.samples.empty()) {
      // Track shorter than one grid step: keep its first sample on the grid.
      Sample copy = s.front();
      copy.t = origin + std::round((copy.t - origin) / dt_target) * dt_target;
      res.samples.push_back(copy);
    }
    out.actors.push_back(std::move(res));
  }
  return out;
}

}  // namespace scenario_forge
