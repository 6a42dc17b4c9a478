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

#ifndef SCENARIO_FORGE__DENSITY_HPP_
#define SCENARIO_FORGE__DENSITY_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace scenario_forge
{

/// Product-Gaussian kernel density estimate over parameter vectors.
/// Immutable after fitting; evaluation and sampling are thread-safe.
struct ParameterDensity
{
  std::vector<std::string> field_names;
  /// n x dim training points, row-major.
  std::vector<double> samples;
  std::vector<double> bandwidth;

  std::size_t dim() const { return bandwidth.size(); }
  std::size_t size() const { return dim() == 0 ? 0 : samples.size() / dim(); }
  std::span<const double> point(std::size_t i) const
  {
    return {samples.data() + i * dim(), dim()};
  }

  bool operator==(const ParameterDensity &) const = default;
};

struct WeightedSample
{
  std::vector<double> point;
  double weight = 1.0;

  bool operator==(const WeightedSample &) const = default;
};

struct BandwidthRule
{
  enum class Kind { Silverman, Fixed };
  Kind kind = Kind::Silverman;
  /// Per-dimension bandwidth for Kind::Fixed.
  std::vector<double> fixed;

  static BandwidthRule silverman() { return {}; }
  static BandwidthRule fixed_at(std::vector<double> h) { return {Kind::Fixed, std::move(h)}; }
};

/// h_j = sigma_j * (4 / ((dim + 2) n))^(1 / (dim + 4)).
std::vector<double> silverman_bandwidth(const std::vector<std::vector<double>> & points);

/// Throws DegenerateDimension(j) for a zero-variance dimension and
/// InvalidArgument for n < 2, ragged or non-finite input.
ParameterDensity fit_density(const std::vector<std::vector<double>> & points,
                             std::vector<std::string> field_names = {},
                             const BandwidthRule & rule = BandwidthRule::silverman());

/// (1/n) sum_i prod_j phi((x_j - s_ij) / h_j) / h_j. May underflow to 0 far
/// from the data; use log_density there.
double eval_density(const ParameterDensity & density, std::span<const double> x);
double log_density(const ParameterDensity & density, std::span<const double> x);

/// Same training points, bandwidth scaled by `factor`.
ParameterDensity inflate_bandwidth(const ParameterDensity & density, double factor);

/// Standard smoothed-bootstrap draws: a uniformly chosen training point
/// perturbed by N(0, diag(h^2)). Deterministic in `seed`.
std::vector<std::vector<double>> sample(const ParameterDensity & density, std::size_t n_out,
                                        std::uint64_t seed);

/// Draws from the proposal with bandwidth c*h and attaches importance weights
/// p(x)/q(x). c = 1 is accepted (all weights 1); c < 1 throws InvalidArgument.
std::vector<WeightedSample> sample_tail_biased(const ParameterDensity & density,
                                               std::size_t n_out, double c, std::uint64_t seed);

/// Self-normalized importance estimate sum w_i f_i / sum w_i.
double weighted_mean(std::span<const WeightedSample> draws, std::span<const double> values);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__DENSITY_HPP_
