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

#ifndef SCENARIO_FORGE_TESTS__SUPPORT_HPP_
#define SCENARIO_FORGE_TESTS__SUPPORT_HPP_

// Shared fixtures and independent oracles. Nothing here calls into the
// library code it is used to check.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <unistd.h>

namespace sf_test
{

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir
{
public:
  explicit TempDir(const std::string & tag)
  {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("sf-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir &) = delete;
  TempDir & operator=(const TempDir &) = delete;

  const std::filesystem::path & path() const { return path_; }

private:
  std::filesystem::path path_;
};

// --- kernel density -------------------------------------------------------

/// Naive double loop over training points and dimensions.
inline double kde_oracle(const std::vector<std::vector<double>> & points,
                         const std::vector<double> & h, const std::vector<double> & x)
{
  long double sum = 0.0L;
  for (const auto & p : points) {
    long double prod = 1.0L;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const long double u = (static_cast<long double>(x[j]) - p[j]) / h[j];
      prod *= std::exp(-0.5L * u * u) / (std::sqrt(2.0L * static_cast<long double>(M_PI)) * h[j]);
    }
    sum += prod;
  }
  return static_cast<double>(sum / points.size());
}

/// CDF of a 1-D Gaussian KDE via erfc.
inline double kde_cdf_oracle(const std::vector<double> & points, double h, double x)
{
  double sum = 0.0;
  for (double p : points) sum += 0.5 * std::erfc(-(x - p) / (h * std::sqrt(2.0)));
  return sum / points.size();
}

/// Asymptotic two-sided 1% critical value of the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

// --- planar geometry --------------------------------------------------------

struct P2
{
  double x, y;
};

/// Corners of a centred rectangle, counter-clockwise.
inline std::array<P2, 4> rect(double cx, double cy, double heading, double length, double width)
{
  const double c = std::cos(heading), s = std::sin(heading);
  const double hl = length / 2.0, hw = width / 2.0;
  std::array<P2, 4> out{};
  const double lx[4] = {hl, -hl, -hl, hl};
  const double ly[4] = {hw, hw, -hw, -hw};
  for (int i = 0; i < 4; ++i) out[i] = {cx + c * lx[i] - s * ly[i], cy + s * lx[i] + c * ly[i]};
  return out;
}

inline double cross(P2 o, P2 a, P2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

inline bool segments_intersect(P2 a, P2 b, P2 c, P2 d)
{
  const double d1 = cross(c, d, a), d2 = cross(c, d, b), d3 = cross(a, b, c), d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on = [](P2 p, P2 q, P2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  return (d1 == 0 && on(c, d, a)) || (d2 == 0 && on(c, d, b)) || (d3 == 0 && on(a, b, c)) ||
         (d4 == 0 && on(a, b, d));
}

/// Point inside (or on) a convex counter-clockwise polygon.
inline bool inside(const std::array<P2, 4> & poly, P2 p)
{
  for (int i = 0; i < 4; ++i) {
    if (cross(poly[i], poly[(i + 1) % 4], p) < 0) return false;
  }
  return true;
}

/// Edge-crossing / containment test, independent of separating axes.
inline bool rects_overlap(const std::array<P2, 4> & a, const std::array<P2, 4> & b)
{
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (segments_intersect(a[i], a[(i + 1) % 4], b[j], b[(j + 1) % 4])) return true;
    }
  }
  return inside(a, b[0]) || inside(b, a[0]);
}

inline double point_to_segment(P2 p, P2 a, P2 b)
{
  // Closest point by clamped parameter of the orthogonal projection.
  const double ex = b.x - a.x, ey = b.y - a.y;
  const double len2 = ex * ex + ey * ey;
  double u = len2 > 0 ? ((p.x - a.x) * ex + (p.y - a.y) * ey) / len2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  return std::hypot(p.x - (a.x + u * ex), p.y - (a.y + u * ey));
}

inline double rect_distance(const std::array<P2, 4> & a, const std::array<P2, 4> & b)
{
  if (rects_overlap(a, b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, point_to_segment(a[i], b[j], b[(j + 1) % 4]));
      best = std::min(best, point_to_segment(b[i], a[j], a[(j + 1) % 4]));
    }
  }
  return best;
}

}  // namespace sf_test

#endif  // SCENARIO_FORGE_TESTS__SUPPORT_HPP_
