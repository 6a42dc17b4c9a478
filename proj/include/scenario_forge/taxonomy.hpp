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

#ifndef SCENARIO_FORGE__TAXONOMY_HPP_
#define SCENARIO_FORGE__TAXONOMY_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace scenario_forge
{

struct Tag
{
  std::string id;
  std::string label;
  int layer = 0;
  std::optional<std::string> parent;

  bool operator==(const Tag &) const = default;
};

/// A rooted tree of tags. Tags in the same layer are mutually exclusive when
/// attached to one scenario; deeper layers refine their ancestors.
struct TagTree
{
  std::string name;
  std::vector<Tag> nodes;

  /// Appends a node, deriving its layer from the parent already present.
  TagTree & add(std::string id, std::string label, std::optional<std::string> parent = {});

  const Tag * find(std::string_view id) const;

  bool operator==(const TagTree &) const = default;
};

/// "tree:tag" reference.
struct TagRef
{
  std::string tree;
  std::string tag;

  static TagRef parse(std::string_view text);
  std::string str() const { return tree + ":" + tag; }

  auto operator<=>(const TagRef &) const = default;
};

using TagSet = std::set<std::string>;

class Taxonomy
{
public:
  /// Validates and registers a tree; returns its name (the tree id).
  std::string register_tree(TagTree tree);

  const TagTree * find_tree(std::string_view name) const;
  const std::map<std::string, TagTree, std::less<>> & trees() const { return trees_; }

  bool contains(const TagRef & ref) const;
  /// Throws UnknownTag.
  const Tag & tag(const TagRef & ref) const;

  /// True when `tag` equals `ancestor` or lies in its subtree.
  bool subsumes(const TagRef & ancestor, const TagRef & tag) const;

  /// Throws MutualExclusionViolation(tree, layer) when two tags share a layer
  /// of one tree, UnknownTag when a reference is not registered.
  void check_exclusive(const TagSet & tags) const;

  bool operator==(const Taxonomy &) const = default;

private:
  std::map<std::string, TagTree, std::less<>> trees_;
};

/// Weather, road and target-maneuver trees.
Taxonomy default_taxonomy();

/// Boolean tag query: AND / OR / NOT over tag references, with parentheses.
/// A tag reference matches a scenario carrying that tag or any descendant.
class TagQuery
{
public:
  static TagQuery parse(std::string_view text);

  /// Throws UnknownTag for references missing from `taxonomy`.
  void validate(const Taxonomy & taxonomy) const;
  bool matches(const Taxonomy & taxonomy, const TagSet & tags) const;

  std::string str() const;
  std::vector<TagRef> references() const;

private:
  enum class Op { Leaf, Not, And, Or };
  struct Node
  {
    Op op = Op::Leaf;
    TagRef ref;
    int lhs = -1;
    int rhs = -1;
  };

  bool eval(int node, const Taxonomy & taxonomy, const TagSet & tags) const;
  std::string str(int node) const;

  std::vector<Node> nodes_;
  int root_ = -1;

  friend class QueryParser;
};

}  // namespace scenario_forge

#endif  // SCENARIO_FORGE__TAXONOMY_HPP_
