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

#include "scenario_forge/error.hpp"

namespace scenario_forge
{

std::string_view to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::CyclicTree: return "CyclicTree";
    case ErrorKind::DuplicateTreeName: return "DuplicateTreeName";
    case ErrorKind::OrphanTag: return "OrphanTag";
    case ErrorKind::MutualExclusionViolation: return "MutualExclusionViolation";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::StorageFailure: return "StorageFailure";
    case ErrorKind::UnknownTag: return "UnknownTag";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NoEgoActor: return "NoEgoActor";
    case ErrorKind::TooManyOutliers: return "TooManyOutliers";
    case ErrorKind::EmptyTrack: return "EmptyTrack";
    case ErrorKind::InconsistentEvents: return "InconsistentEvents";
    case ErrorKind::DegenerateDimension: return "DegenerateDimension";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::HeterogeneousPattern: return "HeterogeneousPattern";
    case ErrorKind::NoMatchingRoad: return "NoMatchingRoad";
    case ErrorKind::InfeasibleParameters: return "InfeasibleParameters";
    case ErrorKind::OffRoad: return "OffRoad";
    case ErrorKind::RejectionBudgetExhausted: return "RejectionBudgetExhausted";
    case ErrorKind::NumericalDivergence: return "NumericalDivergence";
    case ErrorKind::IdMismatch: return "IdMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownClass: return "UnknownClass";
    case ErrorKind::UnknownLog: return "UnknownLog";
  }
  return "Unknown";
}

bool is_usage_error(ErrorKind kind)
{
  return kind == ErrorKind::UnknownClass || kind == ErrorKind::UnknownLog ||
         kind == ErrorKind::InvalidArgument;
}

}  // namespace scenario_forge
