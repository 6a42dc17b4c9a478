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

#ifndef SCENARIO_FORGE__INGEST_HPP_
#define SCENARIO_FORGE__INGEST_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scenario_forge/scenario.hpp"

namespace scenario_forge
{

struct Sample
{
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double a = 0.0;
  double heading = 0.0;
  int lane_index = 0;

  bool operator==(const Sample &) const = default;
};

struct ActorTrack
{
  ActorId actor;
  bool is_ego = false;
  std::vector<Sample> samples;

  double t_begin() const { return samples.empty() ? 0.0 : samples.front().t; }
  double t_end() const { return samples.empty() ? 0.0 : samples.back().t; }
  /// Index of the sample closest to time t.
  std::size_t index_at(double t) const;

  bool operator==(const ActorTrack &) const = default;
};

/// Fixed-rate multi-actor log. Metadata carries free-form `key=value[,value]`
/// annotations (e.g. weather=rain, road=motorway) used for tagging.
struct DrivingLog
{
  double dt = 0.1;
  std::vector<ActorTrack> actors;
  std::string source_id;
  std::map<std::string, std::vector<std::string>> metadata;

  const ActorTrack & ego() const;
  const ActorTrack * find(std::string_view actor) const;
  double t_begin() const;
  double t_end() const;

  bool operator==(const DrivingLog &) const = default;
};

/// Input CSV layout. The header row is mandatory; column order is free.
struct CsvFormat
{
  char delimiter = ',';
  /// Lines starting with this prefix before the header carry metadata.
  std::string metadata_prefix = "#";
};

inline const std::vector<std::string> & log_columns()
{
  static const std::vector<std::string> columns{"t", "actor_id", "is_ego", "x", "y",
                                                "v", "a", "heading", "lane_index"};
  return columns;
}

/// Throws MalformedRow(line), MissingColumn, NoEgoActor.
DrivingLog parse_log(const std::filesystem::path & path, const CsvFormat & format = {});
DrivingLog parse_log_text(std::string_view text, std::string source_id,
                          const CsvFormat & format = {});

/// Canonical CSV: metadata lines, header, rows grouped by actor in log order.
std::string write_log_csv(const DrivingLog & log);

/// Checks dt > 0, exactly one ego, strictly increasing timestamps.
std::vector<std::string> check_log(const DrivingLog & log);

struct CleaningPolicy
{
  /// Centered rolling-median window (samples, odd).
  int window = 9;
  /// Outlier threshold in (scaled) median absolute deviations.
  double k_mad = 5.0;
  /// Fraction of replaced samples in any channel above which data is unusable.
  double max_outlier_fraction = 0.2;
  double v_min = 0.0;
  double v_max = 70.0;
  double a_abs_max = 15.0;
  /// Deviations at or below this are never flagged (guards exact-step signals).
  double min_deviation = 1e-6;
  int max_passes = 10;
};

struct CleaningReport
{
  /// Replaced samples per channel (x, y, v, a) summed over actors.
  std::map<std::string, std::size_t> replacements;
  std::map<ActorId, std::map<std::string, std::size_t>> per_actor;

  std::size_t total() const;
};

/// Replaces implausible or MAD-outlying samples by linear interpolation of the
/// nearest retained neighbours. Throws TooManyOutliers.
std::pair<DrivingLog, CleaningReport> clean_log(const DrivingLog & log,
                                                const CleaningPolicy & policy = {});

/// Linear interpolation of every channel onto a common uniform grid (lane index
/// by nearest neighbour). Throws EmptyTrack, InvalidArgument (dt_target <= 0).
DrivingLog resample_log(const DrivingLog & log, double dt_target);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__INGEST_HPP_
