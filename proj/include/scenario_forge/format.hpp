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

#ifndef SCENARIO_FORGE__FORMAT_HPP_
#define SCENARIO_FORGE__FORMAT_HPP_

#include <optional>
#include <string>
#include <string_view>

namespace scenario_forge
{

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::string_view trim(std::string_view text);

/// Hex SHA-256 digest of `data`.
std::string sha256_hex(std::string_view data);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__FORMAT_HPP_
