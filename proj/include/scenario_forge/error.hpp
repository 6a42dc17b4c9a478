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

#ifndef SCENARIO_FORGE__ERROR_HPP_
#define SCENARIO_FORGE__ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace scenario_forge
{

enum class ErrorKind {
  // taxonomy / database
  CyclicTree,
  DuplicateTreeName,
  OrphanTag,
  MutualExclusionViolation,
  InvariantViolation,
  StorageFailure,
  UnknownTag,
  // ingest
  MalformedRow,
  MissingColumn,
  NoEgoActor,
  TooManyOutliers,
  EmptyTrack,
  // decompose
  InconsistentEvents,
  // density
  DegenerateDimension,
  // mining
  EmptyInput,
  HeterogeneousPattern,
  // genscen
  NoMatchingRoad,
  InfeasibleParameters,
  OffRoad,
  RejectionBudgetExhausted,
  // simulate
  NumericalDivergence,
  // report
  IdMismatch,
  // generic
  InvalidArgument,
  ParseError,
  UnknownClass,
  UnknownLog,
};

std::string_view to_string(ErrorKind kind);

/// Usage-type errors map to exit code 2 in the CLI, everything else to 1.
bool is_usage_error(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string & message)
  : std::runtime_error(message), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string & message)
{
  throw Error(kind, message);
}

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__ERROR_HPP_
