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

#ifndef SCENARIO_FORGE__ROAD_HPP_
#define SCENARIO_FORGE__ROAD_HPP_

#include <optional>
#include <string>
#include <vector>

#include "scenario_forge/geometry.hpp"
#include "scenario_forge/taxonomy.hpp"

namespace scenario_forge
{

struct Lane
{
  std::string id;
  std::vector<Point2> centerline;
  double width = 3.5;
  std::vector<std::string> successors;

  bool operator==(const Lane &) const = default;
};

struct RoadNetwork
{
  std::string id;
  std::vector<Lane> lanes;
  TagSet tags;

  const Lane * find(std::string_view lane_id) const;
  bool operator==(const RoadNetwork &) const = default;
};

/// Polyline violations, non-positive widths, unknown successors and successor
/// endpoint gaps of 0.1 m or more.
std::vector<std::string> check_road(const RoadNetwork & road);

struct PathPose
{
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

struct FrenetPoint
{
  double s = 0.0;
  /// Signed offset, positive to the left of the travel direction.
  double d = 0.0;
};

/// Arc-length parametrized polyline with a Frenet frame.
class ReferencePath
{
public:
  ReferencePath() = default;
  explicit ReferencePath(std::vector<Point2> points);

  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  bool empty() const { return points_.size() < 2; }
  /// Pose at arc length s displaced by d along the left normal. Positions
  /// beyond either end extrapolate along the end segment.
  PathPose at(double s, double d = 0.0) const;
  FrenetPoint project(Point2 p) const;

private:
  std::vector<Point2> points_;
  std::vector<double> cumulative_;
};

/// Centerline of `lane_id` followed by its first-successor chain.
ReferencePath lane_path(const RoadNetwork & road, const std::string & lane_id,
                        std::vector<std::string> * route = nullptr);

/// Lanes whose travel direction agrees with `heading` and whose extent covers
/// `p` longitudinally, ordered left to right.
std::vector<const Lane *> cross_section(const RoadNetwork & road, Point2 p, double heading);

/// Index (left to right) of the cross-section lane containing p, if any.
std::optional<int> lane_index_at(const RoadNetwork & road, Point2 p, double heading);

/// Straight two- and three-lane motorways and an urban T-junction.
std::vector<RoadNetwork> road_library();

/// First network by id whose tags satisfy `query`. Throws NoMatchingRoad.
const RoadNetwork & select_road(const TagQuery & query, const std::vector<RoadNetwork> & library,
                                const Taxonomy & taxonomy);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__ROAD_HPP_
