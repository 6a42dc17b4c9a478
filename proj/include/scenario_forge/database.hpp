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

#ifndef SCENARIO_FORGE__DATABASE_HPP_
#define SCENARIO_FORGE__DATABASE_HPP_

#include <filesystem>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "scenario_forge/decompose.hpp"
#include "scenario_forge/genscen.hpp"
#include "scenario_forge/ingest.hpp"
#include "scenario_forge/mining.hpp"
#include "scenario_forge/scenario.hpp"
#include "scenario_forge/taxonomy.hpp"

namespace scenario_forge
{

struct AuditReport
{
  std::size_t records = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Directory of versioned JSON documents:
///
///   taxonomy.json
///   scenarios/<id>.json
///   logs/<log-id>.csv
///   decompositions/<log-id>.json
///   classes/<name>.json
///   densities/<name>.json
///
/// Any number of concurrent readers, one writer at a time. Every write goes to
/// a temporary file that is renamed into place.
class ScenarioDatabase
{
public:
  /// Opens (creating if needed) a database. A fresh database starts with the
  /// default taxonomy.
  explicit ScenarioDatabase(std::filesystem::path root);

  const std::filesystem::path & root() const { return root_; }

  Taxonomy taxonomy() const;
  /// Throws CyclicTree, DuplicateTreeName, OrphanTag.
  std::string register_tree(TagTree tree);

  /// Validates, assigns the content id and persists. Storing the same content
  /// again returns the same id. Throws InvariantViolation, StorageFailure.
  std::string store_scenario(ScenarioRecord record);
  /// Throws StorageFailure when the id is unknown.
  ScenarioRecord fetch_scenario(const std::string & id) const;
  std::vector<std::string> scenario_ids() const;
  /// Throws MutualExclusionViolation, UnknownTag.
  ScenarioRecord assign_tags(const std::string & id, const TagSet & tags);

  /// Ids (sorted) of records matching the query under subtree semantics.
  std::vector<std::string> query_scenarios(std::string_view expr) const;
  std::vector<std::string> query_scenarios(const TagQuery & query) const;

  /// Re-reads every record and checks all record invariants, tag exclusivity
  /// and content ids.
  AuditReport audit() const;

  void store_log(const std::string & log_id, const DrivingLog & log);
  /// Throws UnknownLog.
  DrivingLog fetch_log(const std::string & log_id) const;
  std::vector<std::string> log_ids() const;

  void store_decomposition(const std::string & log_id, const LogDecomposition & decomposition);
  /// Throws UnknownLog when the log has not been decomposed.
  LogDecomposition fetch_decomposition(const std::string & log_id) const;

  void store_class(const ClassModel & model);
  /// Throws UnknownClass.
  ClassModel fetch_class(const std::string & name) const;
  void store_densities(const ClassDensities & densities);
  ClassDensities fetch_densities(const std::string & name) const;
  std::vector<std::string> class_names() const;

private:
  std::filesystem::path scenario_path(const std::string & id) const;
  ScenarioRecord read_scenario(const std::string & id) const;
  std::vector<std::string> list(const char * dir, const char * ext) const;
  void write_scenario(const ScenarioRecord & record);

  std::filesystem::path root_;
  Taxonomy taxonomy_;
  mutable std::shared_mutex mutex_;
};

/// Filesystem-safe identifier derived from a file stem.
std::string sanitize_id(std::string_view text);

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__DATABASE_HPP_
