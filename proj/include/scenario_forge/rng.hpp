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

#ifndef SCENARIO_FORGE__RNG_HPP_
#define SCENARIO_FORGE__RNG_HPP_

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace scenario_forge
{

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Sub-seed for item `index` of a seeded batch. Parallel and serial runs agree
/// because the result only depends on (seed, index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept;

/// Counter-based generator: output k is a pure function of (key, k).
/// Satisfies UniformRandomBitGenerator so it composes with <random>.
class CounterRng
{
public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(mix64(key)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept
  {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return mix64(key_ ^ mix64(counter_++)); }

  std::uint64_t counter() const noexcept { return counter_; }

  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(*this); }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__RNG_HPP_
