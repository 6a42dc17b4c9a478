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

#include "scenario_forge/road.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scenario_forge/error.hpp"

namespace scenario_forge
{

const Lane * RoadNetwork::find(std::string_view lane_id) const
{
  for (const auto & lane : lanes) {
    if (lane.id == lane_id) return &lane;
  }
  return nullptr;
}

std::vector<std::string> check_road(const RoadNetwork & road)
{
  std::vector<std::string> bad;
  if (road.lanes.empty()) bad.push_back("road " + road.id + " has no lanes");
  for (const auto & lane : road.lanes) {
    if (lane.centerline.size() < 2) bad.push_back("lane " + lane.id + " needs >= 2 points");
    if (!(lane.width > 0.0)) bad.push_back("lane " + lane.id + " has non-positive width");
    for (const auto & succ_id : lane.successors) {
      const Lane * succ = road.find(succ_id);
      if (succ == nullptr) {
        bad.push_back("lane " + lane.id + " has unknown successor " + succ_id);
        continue;
      }
      if (lane.centerline.empty() || succ->centerline.empty()) continue;
      const Point2 a = lane.centerline.back();
      const Point2 b = succ->centerline.front();
      if (std::hypot(a.x - b.x, a.y - b.y) >= 0.1) {
        bad.push_back("lane " + lane.id + " is discontinuous with successor " + succ_id);
      }
    }
  }
  return bad;
}

ReferencePath::ReferencePath(std::vector<Point2> points) : points_(std::move(points))
{
  // Drop repeated vertices so every segment has a direction.
  points_.erase(std::unique(points_.begin(), points_.end(),
                            [](Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y) < 1e-9; }),
                points_.end());
  cumulative_.assign(points_.size(), 0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + std::hypot(points_[i].x - points_[i - 1].x,
                                                     points_[i].y - points_[i - 1].y);
  }
}

PathPose ReferencePath::at(double s, double d) const
{
  if (empty()) fail(ErrorKind::InvalidArgument, "reference path has fewer than two points");
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t seg = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  seg = std::clamp<std::size_t>(seg, 1, points_.size() - 1) - 1;
  const Point2 a = points_[seg];
  const Point2 b = points_[seg + 1];
  const double len = cumulative_[seg + 1] - cumulative_[seg];
  const double ux = (b.x - a.x) / len;
  const double uy = (b.y - a.y) / len;
  const double u = s - cumulative_[seg];
  return {a.x + ux * u - uy * d, a.y + uy * u + ux * d, std::atan2(uy, ux)};
}

FrenetPoint ReferencePath::project(Point2 p) const
{
  if (empty()) fail(ErrorKind::InvalidArgument, "reference path has fewer than two points");
  FrenetPoint best;
  double best_dist = std::numeric_limits<double>::infinity();
  const std::size_t last = points_.size() - 2;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Point2 a = points_[i];
    const Point2 b = points_[i + 1];
    const double len = cumulative_[i + 1] - cumulative_[i];
    const double ux = (b.x - a.x) / len;
    const double uy = (b.y - a.y) / len;
    double u = (p.x - a.x) * ux + (p.y - a.y) * uy;
    // The end segments extend indefinitely.
    if (i != 0) u = std::max(u, 0.0);
    if (i != last) u = std::min(u, len);
    const double qx = a.x + ux * u;
    const double qy = a.y + uy * u;
    const double dist = std::hypot(p.x - qx, p.y - qy);
    if (dist < best_dist) {
      best_dist = dist;
      best.s = cumulative_[i] + u;
      best.d = ux * (p.y - a.y) - uy * (p.x - a.x);
    }
  }
  return best;
}

ReferencePath lane_path(const RoadNetwork & road, const std::string & lane_id,
                        std::vector<std::string> * route)
{
  const Lane * lane = road.find(lane_id);
  if (lane == nullptr) fail(ErrorKind::InvalidArgument, "unknown lane " + lane_id);
  std::vector<Point2> points;
  std::vector<std::string> visited;
  while (lane != nullptr &&
         std::find(visited.begin(), visited.end(), lane->id) == visited.end()) {
    visited.push_back(lane->id);
    const auto start = points.empty() ? lane->centerline.begin() : lane->centerline.begin() + 1;
    points.insert(points.end(), start, lane->centerline.end());
    lane = lane->successors.empty() ? nullptr : road.find(lane->successors.front());
  }
  if (route != nullptr) *route = visited;
  return ReferencePath(std::move(points));
}

namespace
{

double angle_diff(double a, double b)
{
  return std::remainder(a - b, 2.0 * M_PI);
}

}  // namespace

std::vector<const Lane *> cross_section(const RoadNetwork & road, Point2 p, double heading)
{
  std::vector<std::pair<double, const Lane *>> hits;
  for (const auto & lane : road.lanes) {
    const ReferencePath path(lane.centerline);
    if (path.empty()) continue;
    const FrenetPoint f = path.project(p);
    if (f.s < -0.5 || f.s > path.length() + 0.5) continue;
    if (std::abs(angle_diff(path.at(f.s).heading, heading)) > M_PI / 3.0) continue;
    // The point lies furthest right of the leftmost lane.
    hits.emplace_back(f.d, &lane);
  }
  std::sort(hits.begin(), hits.end(), [](const auto & a, const auto & b) {
    return a.first != b.first ? a.first < b.first : a.second->id < b.second->id;
  });
  std::vector<const Lane *> out;
  for (const auto & [d, lane] : hits) out.push_back(lane);
  return out;
}

std::optional<int> lane_index_at(const RoadNetwork & road, Point2 p, double heading)
{
  const auto lanes = cross_section(road, p, heading);
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const FrenetPoint f = ReferencePath(lanes[i]->centerline).project(p);
    if (std::abs(f.d) <= 0.5 * lanes[i]->width + 1e-6) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::vector<RoadNetwork> road_library()
{
  auto straight = [](std::string id, double y, double x0, double x1) {
    return Lane{std::move(id), {{x0, y}, {x1, y}}, 3.5, {}};
  };
  RoadNetwork m2{"motorway-2lane",
                 {straight("left", 3.5, 0.0, 5000.0), straight("right", 0.0, 0.0, 5000.0)},
                 {"road:motorway-straight"}};
  RoadNetwork m3{"motorway-3lane",
                 {straight("left", 7.0, 0.0, 5000.0), straight("middle", 3.5, 0.0, 5000.0),
                  straight("right", 0.0, 0.0, 5000.0)},
                 {"road:motorway-straight"}};

  RoadNetwork tj{"urban-t-junction", {}, {"road:t-junction"}};
  Lane approach = straight("east-approach", 0.0, 0.0, 500.0);
  approach.successors = {"east-exit", "north-turn"};
  Lane turn{"north-turn", {}, 3.5, {}};
  constexpr int arc_points = 16;
  constexpr double radius = 12.0;
  for (int k = 0; k <= arc_points; ++k) {
    const double th = 0.5 * M_PI * k / arc_points;
    turn.centerline.push_back({500.0 + radius * std::sin(th), radius - radius * std::cos(th)});
  }
  turn.centerline.push_back({500.0 + radius, 1000.0});
  tj.lanes = {approach, straight("east-exit", 0.0, 500.0, 1500.0), turn,
              Lane{"west", {{1500.0, 3.5}, {0.0, 3.5}}, 3.5, {}}};
  return {m2, m3, tj};
}

const RoadNetwork & select_road(const TagQuery & query, const std::vector<RoadNetwork> & library,
                                const Taxonomy & taxonomy)
{
  if (library.empty()) fail(ErrorKind::NoMatchingRoad, "road library is empty");
  query.validate(taxonomy);
  std::vector<std::size_t> order(library.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return library[a].id < library[b].id; });
  for (std::size_t i : order) {
    if (query.matches(taxonomy, library[i].tags)) return library[i];
  }
  fail(ErrorKind::NoMatchingRoad, "no road matches " + query.str());
}

}  // namespace scenario_forge
