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

#include "scenario_forge/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scenario_forge/error.hpp"
#include "scenario_forge/rng.hpp"

namespace scenario_forge
{

namespace
{

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

void check_points(const std::vector<std::vector<double>> & points)
{
  if (points.size() < 2) {
    fail(ErrorKind::InvalidArgument, "density fit needs at least 2 points, got " +
                                       std::to_string(points.size()));
  }
  const std::size_t dim = points.front().size();
  if (dim == 0) fail(ErrorKind::InvalidArgument, "density fit needs dim >= 1");
  for (const auto & p : points) {
    if (p.size() != dim) fail(ErrorKind::InvalidArgument, "ragged parameter matrix");
    for (double v : p) {
      if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "non-finite parameter value");
    }
  }
}

std::vector<double> column_stddev(const std::vector<std::vector<double>> & points)
{
  const std::size_t n = points.size();
  const std::size_t dim = points.front().size();
  std::vector<double> sd(dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    double mean = 0.0;
    for (const auto & p : points) mean += p[j];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto & p : points) ss += (p[j] - mean) * (p[j] - mean);
    sd[j] = std::sqrt(ss / static_cast<double>(n - 1));
    // Relative guard: spread indistinguishable from rounding counts as zero.
    if (sd[j] <= 1e-12 * std::max(1.0, std::abs(mean))) {
      fail(ErrorKind::DegenerateDimension, "dimension " + std::to_string(j) + " has zero variance");
    }
  }
  return sd;
}

// Sum over training points of exp(-0.5 * |z|^2), shifted by `shift` in log space.
double log_kernel_sum(const ParameterDensity & d, std::span<const double> x)
{
  const std::size_t n = d.size();
  const std::size_t dim = d.dim();
  std::vector<double> e(n);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double q = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double z = (x[j] - d.samples[i * dim + j]) / d.bandwidth[j];
      q += z * z;
    }
    e[i] = -0.5 * q;
    peak = std::max(peak, e[i]);
  }
  double acc = 0.0;
  for (double v : e) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

double log_normalizer(const ParameterDensity & d)
{
  double c = -std::log(static_cast<double>(d.size()));
  for (double h : d.bandwidth) c -= kLogSqrt2Pi + std::log(h);
  return c;
}

}  // namespace

std::vector<double> silverman_bandwidth(const std::vector<std::vector<double>> & points)
{
  check_points(points);
  const auto sd = column_stddev(points);
  const double n = static_cast<double>(points.size());
  const double dim = static_cast<double>(sd.size());
  const double factor = std::pow(4.0 / ((dim + 2.0) * n), 1.0 / (dim + 4.0));
  std::vector<double> h(sd.size());
  for (std::size_t j = 0; j < sd.size(); ++j) h[j] = sd[j] * factor;
  return h;
}

ParameterDensity fit_density(const std::vector<std::vector<double>> & points,
                             std::vector<std::string> field_names, const BandwidthRule & rule)
{
  check_points(points);
  const std::size_t dim = points.front().size();
  ParameterDensity d;
  if (rule.kind == BandwidthRule::Kind::Fixed) {
    column_stddev(points);
    if (rule.fixed.size() != dim) {
      fail(ErrorKind::InvalidArgument, "fixed bandwidth has wrong dimension");
    }
    d.bandwidth = rule.fixed;
  } else {
    d.bandwidth = silverman_bandwidth(points);
  }
  for (double h : d.bandwidth) {
    if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorKind::InvalidArgument, "bandwidth must be > 0");
  }
  if (field_names.empty()) {
    for (std::size_t j = 0; j < dim; ++j) field_names.push_back("x" + std::to_string(j));
  }
  if (field_names.size() != dim) fail(ErrorKind::InvalidArgument, "field names / dim mismatch");
  d.field_names = std::move(field_names);
  d.samples.reserve(points.size() * dim);
  for (const auto & p : points) d.samples.insert(d.samples.end(), p.begin(), p.end());
  return d;
}

double eval_density(const ParameterDensity & d, std::span<const double> x)
{
  if (x.size() != d.dim()) fail(ErrorKind::InvalidArgument, "point has wrong dimension");
  const std::size_t dim = d.dim();
  double norm = 1.0;
  for (double h : d.bandwidth) norm *= h;
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double q = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double z = (x[j] - d.samples[i * dim + j]) / d.bandwidth[j];
      q += z * z;
    }
    acc += std::exp(-0.5 * q);
  }
  return acc / (static_cast<double>(d.size()) * norm *
                std::pow(2.0 * M_PI, 0.5 * static_cast<double>(dim)));
}

double log_density(const ParameterDensity & d, std::span<const double> x)
{
  if (x.size() != d.dim()) fail(ErrorKind::InvalidArgument, "point has wrong dimension");
  return log_kernel_sum(d, x) + log_normalizer(d);
}

ParameterDensity inflate_bandwidth(const ParameterDensity & density, double factor)
{
  ParameterDensity q = density;
  for (auto & h : q.bandwidth) h *= factor;
  return q;
}

std::vector<std::vector<double>> sample(const ParameterDensity & d, std::size_t n_out,
                                        std::uint64_t seed)
{
  if (d.size() == 0) fail(ErrorKind::InvalidArgument, "cannot sample an empty density");
  CounterRng rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(n_out);
  const std::size_t n = d.size();
  for (std::size_t k = 0; k < n_out; ++k) {
    const auto i = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
    std::vector<double> x(d.dim());
    for (std::size_t j = 0; j < d.dim(); ++j) {
      x[j] = d.samples[i * d.dim() + j] + d.bandwidth[j] * rng.normal();
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<WeightedSample> sample_tail_biased(const ParameterDensity & d, std::size_t n_out,
                                               double c, std::uint64_t seed)
{
  if (!(c >= 1.0) || !std::isfinite(c)) {
    fail(ErrorKind::InvalidArgument, "tail inflation factor must be >= 1");
  }
  const ParameterDensity proposal = inflate_bandwidth(d, c);
  auto draws = sample(proposal, n_out, seed);
  std::vector<WeightedSample> out;
  out.reserve(draws.size());
  for (auto & x : draws) {
    const double w = c == 1.0 ? 1.0 : std::exp(log_density(d, x) - log_density(proposal, x));
    out.push_back(WeightedSample{std::move(x), w});
  }
  return out;
}

double weighted_mean(std::span<const WeightedSample> draws, std::span<const double> values)
{
  if (draws.size() != values.size() || draws.empty()) {
    fail(ErrorKind::InvalidArgument, "weighted_mean needs matching non-empty inputs");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    num += draws[i].weight * values[i];
    den += draws[i].weight;
  }
  return num / den;
}

}  // namespace scenario_forge
