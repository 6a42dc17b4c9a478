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

#include "scenario_forge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scenario_forge
{

std::array<Point2, 4> OrientedBox::corners() const
{
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const double hl = 0.5 * length;
  const double hw = 0.5 * width;
  auto at = [&](double u, double v) { return Point2{x + c * u - s * v, y + s * u + c * v}; };
  return {at(hl, hw), at(-hl, hw), at(-hl, -hw), at(hl, -hw)};
}

bool boxes_overlap(const OrientedBox & a, const OrientedBox & b)
{
  // Separating axis test over the four edge normals.
  const auto ca = a.corners();
  const auto cb = b.corners();
  for (const OrientedBox * box : {&a, &b}) {
    for (double angle : {box->heading, box->heading + 0.5 * M_PI}) {
      const double ax = std::cos(angle);
      const double ay = std::sin(angle);
      double amin = std::numeric_limits<double>::infinity(), amax = -amin;
      double bmin = amin, bmax = -amin;
      for (const auto & p : ca) {
        const double d = p.x * ax + p.y * ay;
        amin = std::min(amin, d);
        amax = std::max(amax, d);
      }
      for (const auto & p : cb) {
        const double d = p.x * ax + p.y * ay;
        bmin = std::min(bmin, d);
        bmax = std::max(bmax, d);
      }
      if (amax < bmin || bmax < amin) return false;
    }
  }
  return true;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b)
{
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

double box_distance(const OrientedBox & a, const OrientedBox & b)
{
  if (boxes_overlap(a, b)) return 0.0;
  // For disjoint convex polygons the closest pair involves a vertex.
  const auto ca = a.corners();
  const auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      best = std::min(best, point_segment_distance(ca[i], cb[j], cb[(j + 1) % 4]));
      best = std::min(best, point_segment_distance(cb[i], ca[j], ca[(j + 1) % 4]));
    }
  }
  return best;
}

double time_to_collision(double rel_x, double rel_y, double rel_vx, double half_lane,
                         double bumper_offset)
{
  const double inf = std::numeric_limits<double>::infinity();
  if (rel_x <= 0.0 || std::abs(rel_y) >= half_lane) return inf;
  const double closing = -rel_vx;
  if (!(closing > 0.0)) return inf;
  const double gap = rel_x - bumper_offset;
  return gap <= 0.0 ? 0.0 : gap / closing;
}

}  // namespace scenario_forge
