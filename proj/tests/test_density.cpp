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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scenario_forge/density.hpp"
#include "scenario_forge/error.hpp"
#include "scenario_forge/rng.hpp"
#include "support.hpp"

using namespace scenario_forge;

namespace
{

std::vector<std::vector<double>> normal_points(std::size_t n, std::size_t dim, std::uint64_t seed)
{
  CounterRng rng(seed);
  std::vector<std::vector<double>> out(n, std::vector<double>(dim));
  for (auto & p : out) {
    for (auto & x : p) x = rng.normal();
  }
  return out;
}

double trapezoid_1d(const ParameterDensity & d, double lo, double hi, int n)
{
  const double h = (hi - lo) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    sum += w * eval_density(d, std::span<const double>(&x, 1));
  }
  return sum * h;
}

}  // namespace

TEST_CASE("fit_density input checks")
{
  CHECK_THROWS_AS(fit_density({{1.0}, {1.0}, {1.0}}), Error);
  try {
    fit_density({{1.0, 0.0}, {1.0, 1.0}, {1.0, 2.0}});
    FAIL("expected DegenerateDimension");
  } catch (const Error & e) {
    CHECK(e.kind() == ErrorKind::DegenerateDimension);
  }
  CHECK_THROWS_AS(fit_density({{1.0}}), Error);
  CHECK_THROWS_AS(fit_density({{1.0}, {std::nan("")}}), Error);
  CHECK_THROWS_AS(fit_density({{1.0, 2.0}, {1.0}}), Error);
}

TEST_CASE("two unit kernels evaluated half way")
{
  const auto d = fit_density({{0.0}, {2.0}}, {"x"}, BandwidthRule::fixed_at({1.0}));
  const double x = 1.0;
  CHECK(eval_density(d, std::span<const double>(&x, 1)) ==
        doctest::Approx(0.24197072451914337).epsilon(1e-15));
}

TEST_CASE("silverman bandwidth")
{
  const auto pts = normal_points(500, 2, 3);
  const auto h = silverman_bandwidth(pts);
  for (std::size_t j = 0; j < 2; ++j) {
    double mean = 0.0, var = 0.0;
    for (const auto & p : pts) mean += p[j];
    mean /= pts.size();
    for (const auto & p : pts) var += (p[j] - mean) * (p[j] - mean);
    var /= (pts.size() - 1);
    CHECK(h[j] == doctest::Approx(std::sqrt(var) * std::pow(4.0 / (4.0 * 500.0), 1.0 / 6.0)));
  }
}

TEST_CASE("evaluation matches the kernel-sum oracle")
{
  for (std::size_t dim : {1u, 2u, 3u}) {
    const auto pts = normal_points(200, dim, 10 + dim);
    const auto d = fit_density(pts);
    CounterRng rng(99);
    for (int probe = 0; probe < 1000; ++probe) {
      std::vector<double> x(dim);
      for (auto & v : x) v = 3.0 * rng.normal();
      const double want = sf_test::kde_oracle(pts, d.bandwidth, x);
      const double got = eval_density(d, x);
      CHECK(std::abs(got - want) <= 1e-12 * want);
      CHECK(got > 0.0);
    }
  }
}

TEST_CASE("single cluster peaks at its centre and decays")
{
  std::vector<std::vector<double>> pts;
  for (int i = -5; i <= 5; ++i) pts.push_back({0.1 * i});
  const auto d = fit_density(pts);
  const double c = 0.0;
  const double peak = eval_density(d, std::span<const double>(&c, 1));
  for (int i = -40; i <= 40; ++i) {
    const double x = 0.05 * i;
    CHECK(eval_density(d, std::span<const double>(&x, 1)) <= peak);
  }
  const double far = 0.5 + 10.0 * d.bandwidth[0];
  CHECK(eval_density(d, std::span<const double>(&far, 1)) < 1e-20 * peak);
  CHECK(log_density(d, std::span<const double>(&far, 1)) < std::log(1e-20 * peak));
}

TEST_CASE("density integrates to one")
{
  SUBCASE("1-D")
  {
    const auto d = fit_density(normal_points(1000, 1, 5));
    CHECK(trapezoid_1d(d, -8.0, 8.0, 4000) == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("2-D")
  {
    const auto pts = normal_points(300, 2, 6);
    const auto d = fit_density(pts);
    const int n = 400;
    const double lo = -8.0, hi = 8.0, h = (hi - lo) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double w = ((i == 0 || i == n) ? 0.5 : 1.0) * ((j == 0 || j == n) ? 0.5 : 1.0);
        const double x[2] = {lo + i * h, lo + j * h};
        sum += w * eval_density(d, x);
      }
    }
    CHECK(sum * h * h == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("plain sampling")
{
  const auto pts = normal_points(1000, 1, 21);
  const auto d = fit_density(pts);
  const auto a = sample(d, 10000, 5);
  CHECK(a == sample(d, 10000, 5));
  CHECK(a != sample(d, 10000, 6));

  double train_mean = 0.0, train_var = 0.0;
  for (const auto & p : pts) train_mean += p[0];
  train_mean /= pts.size();
  for (const auto & p : pts) train_var += (p[0] - train_mean) * (p[0] - train_mean);
  train_var /= pts.size();

  double mean = 0.0, var = 0.0;
  for (const auto & p : a) mean += p[0];
  mean /= a.size();
  for (const auto & p : a) var += (p[0] - mean) * (p[0] - mean);
  var /= (a.size() - 1);
  CHECK(std::abs(mean - train_mean) < 0.05);
  const double expected = train_var + d.bandwidth[0] * d.bandwidth[0];
  CHECK(std::abs(var - expected) < 0.1 * expected);

  // Two-sided KS against the exact KDE CDF.
  std::vector<double> xs;
  for (const auto & p : a) xs.push_back(p[0]);
  std::sort(xs.begin(), xs.end());
  std::vector<double> train;
  for (const auto & p : pts) train.push_back(p[0]);
  double ks = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = sf_test::kde_cdf_oracle(train, d.bandwidth[0], xs[i]);
    ks = std::max({ks, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  CHECK(ks < sf_test::ks_critical_1pct(xs.size()));
}

TEST_CASE("tail-biased sampling")
{
  const auto d = fit_density(normal_points(1000, 1, 31));

  SUBCASE("c = 1 gives unit weights")
  {
    for (const auto & w : sample_tail_biased(d, 500, 1.0, 3)) CHECK(w.weight == doctest::Approx(1.0));
    CHECK_THROWS_AS(sample_tail_biased(d, 10, 0.5, 3), Error);
  }
  SUBCASE("inflated proposal reaches further out and stays unbiased")
  {
    const auto plain = sample(d, 10000, 41);
    const auto biased = sample_tail_biased(d, 10000, 3.0, 42);
    double plain_abs = 0.0, biased_abs = 0.0, plain_sq = 0.0;
    std::vector<double> sq;
    for (const auto & p : plain) {
      plain_abs += std::abs(p[0]);
      plain_sq += p[0] * p[0];
    }
    for (const auto & w : biased) {
      biased_abs += std::abs(w.point[0]);
      sq.push_back(w.point[0] * w.point[0]);
      CHECK(std::isfinite(w.weight));
      CHECK(w.weight > 0.0);
    }
    CHECK(biased_abs > plain_abs);
    const double is_estimate = weighted_mean(biased, sq);
    CHECK(std::abs(is_estimate - plain_sq / 10000.0) < 0.05 * plain_sq / 10000.0);
  }
  SUBCASE("weights are the density ratio")
  {
    const auto q = inflate_bandwidth(d, 2.0);
    for (const auto & w : sample_tail_biased(d, 200, 2.0, 7)) {
      CHECK(w.weight == doctest::Approx(eval_density(d, w.point) / eval_density(q, w.point)).epsilon(1e-12));
    }
  }
  SUBCASE("determinism")
  {
    CHECK(sample_tail_biased(d, 100, 2.0, 1) == sample_tail_biased(d, 100, 2.0, 1));
  }
}
