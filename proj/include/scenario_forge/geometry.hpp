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

#ifndef SCENARIO_FORGE__GEOMETRY_HPP_
#define SCENARIO_FORGE__GEOMETRY_HPP_

#include <array>

namespace scenario_forge
{

struct Point2
{
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2 &) const = default;
};

/// Rectangle footprint centred on (x, y), length along `heading`.
struct OrientedBox
{
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double length = 4.5;
  double width = 1.8;

  std::array<Point2, 4> corners() const;
};

bool boxes_overlap(const OrientedBox & a, const OrientedBox & b);

/// Minimum Euclidean distance between two footprints, 0 when they overlap.
double box_distance(const OrientedBox & a, const OrientedBox & b);

double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Gap over closing speed for an object at ego-frame offset (rel_x, rel_y)
/// moving with ego-frame longitudinal velocity rel_vx. The bumper gap is
/// rel_x - bumper_offset. Infinity unless the object is ahead, within
/// `half_lane` laterally and closing; 0 once the bumpers touch.
double time_to_collision(double rel_x, double rel_y, double rel_vx, double half_lane,
                         double bumper_offset);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__GEOMETRY_HPP_
