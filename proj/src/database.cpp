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

#include "scenario_forge/database.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include "scenario_forge/error.hpp"
#include "scenario_forge/serialize.hpp"

namespace scenario_forge
{

namespace fs = std::filesystem;

namespace
{

std::string read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::StorageFailure, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const fs::path & path, const std::string & content)
{
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) fail(ErrorKind::StorageFailure, "cannot create " + path.parent_path().string());
  // Skip the write when the bytes are already there; keeps re-runs inert.
  if (fs::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    if (os.str() == content) return;
  }
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::StorageFailure, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::StorageFailure, "short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::StorageFailure, "cannot rename into " + path.string());
}

}  // namespace

std::string sanitize_id(std::string_view text)
{
  std::string out;
  for (char c : text) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), '_');
  return out;
}

ScenarioDatabase::ScenarioDatabase(fs::path root) : root_(std::move(root))
{
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec || !fs::is_directory(root_)) {
    fail(ErrorKind::StorageFailure, "cannot open database at " + root_.string());
  }
  const fs::path tax = root_ / "taxonomy.json";
  if (fs::exists(tax)) {
    taxonomy_ = load_json<Taxonomy>(read_file(tax));
  } else {
    taxonomy_ = default_taxonomy();
    write_file_atomic(tax, dump_json(taxonomy_));
  }
}

Taxonomy ScenarioDatabase::taxonomy() const
{
  std::shared_lock lock(mutex_);
  return taxonomy_;
}

std::string ScenarioDatabase::register_tree(TagTree tree)
{
  std::unique_lock lock(mutex_);
  Taxonomy next = taxonomy_;
  const std::string name = next.register_tree(std::move(tree));
  write_file_atomic(root_ / "taxonomy.json", dump_json(next));
  taxonomy_ = std::move(next);
  return name;
}

fs::path ScenarioDatabase::scenario_path(const std::string & id) const
{
  return root_ / "scenarios" / (sanitize_id(id) + ".json");
}

void ScenarioDatabase::write_scenario(const ScenarioRecord & record)
{
  write_file_atomic(scenario_path(record.id), dump_json(record));
}

std::string ScenarioDatabase::store_scenario(ScenarioRecord record)
{
  std::unique_lock lock(mutex_);
  if (const auto bad = check_record(record, taxonomy_); !bad.empty()) {
    std::string msg = "record violates " + std::to_string(bad.size()) + " invariant(s): " + bad[0];
    fail(ErrorKind::InvariantViolation, msg);
  }
  record.id = record_id(record);
  write_scenario(record);
  return record.id;
}

ScenarioRecord ScenarioDatabase::read_scenario(const std::string & id) const
{
  const fs::path path = scenario_path(id);
  if (!fs::exists(path)) fail(ErrorKind::StorageFailure, "no scenario with id " + id);
  return load_json<ScenarioRecord>(read_file(path));
}

ScenarioRecord ScenarioDatabase::fetch_scenario(const std::string & id) const
{
  std::shared_lock lock(mutex_);
  return read_scenario(id);
}

std::vector<std::string> ScenarioDatabase::list(const char * dir, const char * ext) const
{
  std::vector<std::string> out;
  const fs::path d = root_ / dir;
  if (!fs::is_directory(d)) return out;
  for (const auto & entry : fs::directory_iterator(d)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      out.push_back(entry.path().stem().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> ScenarioDatabase::scenario_ids() const
{
  std::shared_lock lock(mutex_);
  return list("scenarios", ".json");
}

ScenarioRecord ScenarioDatabase::assign_tags(const std::string & id, const TagSet & tags)
{
  std::unique_lock lock(mutex_);
  ScenarioRecord record = scenario_forge::assign_tags(read_scenario(id), tags, taxonomy_);
  write_scenario(record);
  return record;
}

std::vector<std::string> ScenarioDatabase::query_scenarios(std::string_view expr) const
{
  return query_scenarios(TagQuery::parse(expr));
}

std::vector<std::string> ScenarioDatabase::query_scenarios(const TagQuery & query) const
{
  std::shared_lock lock(mutex_);
  query.validate(taxonomy_);
  std::vector<std::string> out;
  for (const auto & id : list("scenarios", ".json")) {
    if (query.matches(taxonomy_, read_scenario(id).tags)) out.push_back(id);
  }
  return out;
}

AuditReport ScenarioDatabase::audit() const
{
  std::shared_lock lock(mutex_);
  AuditReport report;
  for (const auto & stem : list("scenarios", ".json")) {
    ++report.records;
    ScenarioRecord record;
    try {
      record = read_scenario(stem);
    } catch (const Error & e) {
      report.violations.push_back(stem + ": " + e.what());
      continue;
    }
    for (const auto & msg : check_record(record, taxonomy_)) {
      report.violations.push_back(stem + ": " + msg);
    }
    if (record.id != stem) report.violations.push_back(stem + ": stored id " + record.id);
    if (record_id(record) != record.id) {
      report.violations.push_back(stem + ": content does not hash to its id");
    }
  }
  return report;
}

void ScenarioDatabase::store_log(const std::string & log_id, const DrivingLog & log)
{
  std::unique_lock lock(mutex_);
  write_file_atomic(root_ / "logs" / (sanitize_id(log_id) + ".csv"), write_log_csv(log));
}

DrivingLog ScenarioDatabase::fetch_log(const std::string & log_id) const
{
  std::shared_lock lock(mutex_);
  const fs::path path = root_ / "logs" / (sanitize_id(log_id) + ".csv");
  if (!fs::exists(path)) fail(ErrorKind::UnknownLog, "no log with id " + log_id);
  return parse_log_text(read_file(path), log_id);
}

std::vector<std::string> ScenarioDatabase::log_ids() const
{
  std::shared_lock lock(mutex_);
  return list("logs", ".csv");
}

void ScenarioDatabase::store_decomposition(const std::string & log_id,
                                           const LogDecomposition & decomposition)
{
  std::unique_lock lock(mutex_);
  write_file_atomic(root_ / "decompositions" / (sanitize_id(log_id) + ".json"),
                    dump_json(decomposition));
}

LogDecomposition ScenarioDatabase::fetch_decomposition(const std::string & log_id) const
{
  std::shared_lock lock(mutex_);
  const fs::path path = root_ / "decompositions" / (sanitize_id(log_id) + ".json");
  if (!fs::exists(path)) fail(ErrorKind::UnknownLog, "log " + log_id + " has not been decomposed");
  return load_json<LogDecomposition>(read_file(path));
}

void ScenarioDatabase::store_class(const ClassModel & model)
{
  std::unique_lock lock(mutex_);
  write_file_atomic(root_ / "classes" / (sanitize_id(model.cls.name) + ".json"), dump_json(model));
}

ClassModel ScenarioDatabase::fetch_class(const std::string & name) const
{
  std::shared_lock lock(mutex_);
  const fs::path path = root_ / "classes" / (sanitize_id(name) + ".json");
  if (!fs::exists(path)) fail(ErrorKind::UnknownClass, "no scenario class named " + name);
  return load_json<ClassModel>(read_file(path));
}

void ScenarioDatabase::store_densities(const ClassDensities & densities)
{
  std::unique_lock lock(mutex_);
  write_file_atomic(root_ / "densities" / (sanitize_id(densities.model.cls.name) + ".json"),
                    dump_json(densities));
}

ClassDensities ScenarioDatabase::fetch_densities(const std::string & name) const
{
  std::shared_lock lock(mutex_);
  const fs::path path = root_ / "densities" / (sanitize_id(name) + ".json");
  if (!fs::exists(path)) fail(ErrorKind::UnknownClass, "no fitted densities for class " + name);
  return load_json<ClassDensities>(read_file(path));
}

std::vector<std::string> ScenarioDatabase::class_names() const
{
  std::shared_lock lock(mutex_);
  return list("classes", ".json");
}

}  // namespace scenario_forge
