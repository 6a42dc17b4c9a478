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

#include "scenario_forge/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "scenario_forge/error.hpp"

namespace scenario_forge
{

TagTree & TagTree::add(std::string id, std::string label, std::optional<std::string> parent)
{
  int layer = 0;
  if (parent) {
    const Tag * p = find(*parent);
    if (p == nullptr) {
      fail(ErrorKind::OrphanTag, "tag '" + id + "' references missing parent '" + *parent + "'");
    }
    layer = p->layer + 1;
  }
  nodes.push_back(Tag{std::move(id), std::move(label), layer, std::move(parent)});
  return *this;
}

const Tag * TagTree::find(std::string_view id) const
{
  auto it = std::find_if(nodes.begin(), nodes.end(), [&](const Tag & t) { return t.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

TagRef TagRef::parse(std::string_view text)
{
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    fail(ErrorKind::UnknownTag, "malformed tag reference '" + std::string(text) + "'");
  }
  return TagRef{std::string(text.substr(0, colon)), std::string(text.substr(colon + 1))};
}

std::string Taxonomy::register_tree(TagTree tree)
{
  if (tree.name.empty() || tree.name.find(':') != std::string::npos) {
    fail(ErrorKind::InvariantViolation, "invalid tree name '" + tree.name + "'");
  }
  if (trees_.count(tree.name) != 0) {
    fail(ErrorKind::DuplicateTreeName, "tree '" + tree.name + "' already registered");
  }
  if (tree.nodes.empty()) {
    fail(ErrorKind::OrphanTag, "tree '" + tree.name + "' has no root");
  }

  std::map<std::string, const Tag *> by_id;
  for (const auto & t : tree.nodes) {
    if (t.id.empty() || t.id.find(':') != std::string::npos) {
      fail(ErrorKind::InvariantViolation, "invalid tag id '" + t.id + "'");
    }
    if (!by_id.emplace(t.id, &t).second) {
      fail(ErrorKind::InvariantViolation, "duplicate tag id '" + t.id + "' in " + tree.name);
    }
  }

  std::vector<const Tag *> roots;
  std::multimap<std::string, const Tag *> children;
  for (const auto & t : tree.nodes) {
    if (!t.parent) {
      roots.push_back(&t);
      continue;
    }
    if (*t.parent == t.id) {
      fail(ErrorKind::CyclicTree, "tag '" + t.id + "' is its own parent");
    }
    if (by_id.count(*t.parent) == 0) {
      fail(ErrorKind::OrphanTag, "tag '" + t.id + "' has unknown parent '" + *t.parent + "'");
    }
    children.emplace(*t.parent, &t);
  }
  if (roots.empty()) {
    fail(ErrorKind::CyclicTree, "tree '" + tree.name + "' has no root (cycle)");
  }
  if (roots.size() > 1) {
    fail(ErrorKind::OrphanTag, "tree '" + tree.name + "' has " + std::to_string(roots.size()) +
                                 " roots");
  }

  // Every node must hang below the root with consistent layer numbers.
  std::size_t reached = 0;
  std::vector<const Tag *> stack{roots.front()};
  if (roots.front()->layer != 0) {
    fail(ErrorKind::InvariantViolation, "root of '" + tree.name + "' must have layer 0");
  }
  while (!stack.empty()) {
    const Tag * t = stack.back();
    stack.pop_back();
    ++reached;
    auto [lo, hi] = children.equal_range(t->id);
    for (auto it = lo; it != hi; ++it) {
      if (it->second->layer != t->layer + 1) {
        fail(ErrorKind::InvariantViolation,
             "tag '" + it->second->id + "' layer must be parent layer + 1");
      }
      stack.push_back(it->second);
    }
  }
  if (reached != tree.nodes.size()) {
    fail(ErrorKind::CyclicTree, "tree '" + tree.name + "' contains a cycle");
  }

  auto name = tree.name;
  trees_.emplace(name, std::move(tree));
  return name;
}

const TagTree * Taxonomy::find_tree(std::string_view name) const
{
  auto it = trees_.find(name);
  return it == trees_.end() ? nullptr : &it->second;
}

bool Taxonomy::contains(const TagRef & ref) const
{
  const TagTree * tree = find_tree(ref.tree);
  return tree != nullptr && tree->find(ref.tag) != nullptr;
}

const Tag & Taxonomy::tag(const TagRef & ref) const
{
  const TagTree * tree = find_tree(ref.tree);
  const Tag * t = tree ? tree->find(ref.tag) : nullptr;
  if (t == nullptr) {
    fail(ErrorKind::UnknownTag, "unknown tag '" + ref.str() + "'");
  }
  return *t;
}

bool Taxonomy::subsumes(const TagRef & ancestor, const TagRef & tag) const
{
  if (ancestor.tree != tag.tree) {
    return false;
  }
  const TagTree * tree = find_tree(tag.tree);
  if (tree == nullptr) {
    return false;
  }
  const Tag * t = tree->find(tag.tag);
  while (t != nullptr) {
    if (t->id == ancestor.tag) {
      return true;
    }
    t = t->parent ? tree->find(*t->parent) : nullptr;
  }
  return false;
}

void Taxonomy::check_exclusive(const TagSet & tags) const
{
  std::map<std::pair<std::string, int>, std::string> seen;
  for (const auto & text : tags) {
    const TagRef ref = TagRef::parse(text);
    const Tag & t = tag(ref);
    auto [it, inserted] = seen.emplace(std::make_pair(ref.tree, t.layer), ref.tag);
    if (!inserted) {
      fail(ErrorKind::MutualExclusionViolation,
           "tags '" + it->second + "' and '" + ref.tag + "' share layer " +
             std::to_string(t.layer) + " of tree '" + ref.tree + "'");
    }
  }
}

Taxonomy default_taxonomy()
{
  Taxonomy tax;

  TagTree weather{"weather", {}};
  weather.add("weather", "Weather")
    .add("clear", "Clear", "weather")
    .add("rain", "Rain", "weather")
    .add("snow", "Snow", "weather")
    .add("fog", "Fog", "weather")
    .add("light-rain", "Light rain", "rain")
    .add("heavy-rain", "Heavy rain", "rain")
    .add("light-snow", "Light snow", "snow")
    .add("heavy-snow", "Heavy snow", "snow");
  tax.register_tree(std::move(weather));

  TagTree road{"road", {}};
  road.add("road", "Road type")
    .add("motorway", "Motorway", "road")
    .add("urban", "Urban road", "road")
    .add("rural", "Rural road", "road")
    .add("motorway-straight", "Straight motorway", "motorway")
    .add("on-ramp", "On-ramp", "motorway")
    .add("intersection", "Intersection", "urban")
    .add("roundabout", "Roundabout", "urban")
    .add("t-junction", "T-junction", "intersection")
    .add("crossing", "Crossing", "intersection");
  tax.register_tree(std::move(road));

  TagTree maneuver{"target-maneuver", {}};
  maneuver.add("maneuver", "Target maneuver")
    .add("lane-change", "Lane change", "maneuver")
    .add("overtaking", "Overtaking", "maneuver")
    .add("longitudinal", "Longitudinal", "maneuver")
    .add("cut-in", "Cut-in", "lane-change")
    .add("cut-out", "Cut-out", "lane-change")
    .add("passing-ego", "Target passes ego", "overtaking")
    .add("lead-braking", "Lead vehicle braking", "longitudinal");
  tax.register_tree(std::move(maneuver));

  return tax;
}

// --- query -----------------------------------------------------------------

class QueryParser
{
public:
  explicit QueryParser(std::string_view text) : text_(text) { tokenize(); }

  TagQuery parse()
  {
    TagQuery q;
    if (tokens_.empty()) {
      fail(ErrorKind::ParseError, "empty tag query");
    }
    q.root_ = parse_or(q);
    if (pos_ != tokens_.size()) {
      fail(ErrorKind::ParseError, "unexpected token '" + tokens_[pos_] + "' in tag query");
    }
    return q;
  }

private:
  void tokenize()
  {
    std::size_t i = 0;
    while (i < text_.size()) {
      const char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '(' || c == ')' || c == '!' || c == '&' || c == '|') {
        tokens_.emplace_back(1, c);
        ++i;
      } else {
        std::size_t j = i;
        while (j < text_.size()) {
          const char d = text_[j];
          if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '!' ||
              d == '&' || d == '|') {
            break;
          }
          ++j;
        }
        tokens_.emplace_back(text_.substr(i, j - i));
        i = j;
      }
    }
  }

  static std::string upper(std::string s)
  {
    for (auto & c : s) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return s;
  }

  bool accept(std::string_view word)
  {
    if (pos_ < tokens_.size()) {
      const auto tok = upper(tokens_[pos_]);
      if (tok == word || (word == "AND" && tok == "&") || (word == "OR" && tok == "|") ||
          (word == "NOT" && tok == "!")) {
        ++pos_;
        return true;
      }
    }
    return false;
  }

  int push(TagQuery & q, TagQuery::Node node)
  {
    q.nodes_.push_back(std::move(node));
    return static_cast<int>(q.nodes_.size()) - 1;
  }

  int parse_or(TagQuery & q)
  {
    int lhs = parse_and(q);
    while (accept("OR")) {
      const int rhs = parse_and(q);
      lhs = push(q, {TagQuery::Op::Or, {}, lhs, rhs});
    }
    return lhs;
  }

  int parse_and(TagQuery & q)
  {
    int lhs = parse_unary(q);
    while (accept("AND")) {
      const int rhs = parse_unary(q);
      lhs = push(q, {TagQuery::Op::And, {}, lhs, rhs});
    }
    return lhs;
  }

  int parse_unary(TagQuery & q)
  {
    if (accept("NOT")) {
      const int operand = parse_unary(q);
      return push(q, {TagQuery::Op::Not, {}, operand, -1});
    }
    if (accept("(")) {
      const int inner = parse_or(q);
      if (!accept(")")) {
        fail(ErrorKind::ParseError, "missing ')' in tag query");
      }
      return inner;
    }
    if (pos_ >= tokens_.size()) {
      fail(ErrorKind::ParseError, "tag query ends unexpectedly");
    }
    const std::string & tok = tokens_[pos_];
    if (tok == ")" || upper(tok) == "AND" || upper(tok) == "OR") {
      fail(ErrorKind::ParseError, "unexpected token '" + tok + "' in tag query");
    }
    ++pos_;
    return push(q, {TagQuery::Op::Leaf, TagRef::parse(tok), -1, -1});
  }

  std::string_view text_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

TagQuery TagQuery::parse(std::string_view text) { return QueryParser(text).parse(); }

void TagQuery::validate(const Taxonomy & taxonomy) const
{
  for (const auto & ref : references()) {
    taxonomy.tag(ref);
  }
}

bool TagQuery::matches(const Taxonomy & taxonomy, const TagSet & tags) const
{
  return eval(root_, taxonomy, tags);
}

bool TagQuery::eval(int node, const Taxonomy & taxonomy, const TagSet & tags) const
{
  const Node & n = nodes_.at(static_cast<std::size_t>(node));
  switch (n.op) {
    case Op::Leaf:
      return std::any_of(tags.begin(), tags.end(), [&](const std::string & t) {
        return taxonomy.subsumes(n.ref, TagRef::parse(t));
      });
    case Op::Not:
      return !eval(n.lhs, taxonomy, tags);
    case Op::And:
      return eval(n.lhs, taxonomy, tags) && eval(n.rhs, taxonomy, tags);
    case Op::Or:
      return eval(n.lhs, taxonomy, tags) || eval(n.rhs, taxonomy, tags);
  }
  return false;
}

std::string TagQuery::str() const { return root_ < 0 ? std::string{} : str(root_); }

std::string TagQuery::str(int node) const
{
  const Node & n = nodes_.at(static_cast<std::size_t>(node));
  switch (n.op) {
    case Op::Leaf: return n.ref.str();
    case Op::Not: return "NOT " + str(n.lhs);
    case Op::And: return "(" + str(n.lhs) + " AND " + str(n.rhs) + ")";
    case Op::Or: return "(" + str(n.lhs) + " OR " + str(n.rhs) + ")";
  }
  return {};
}

std::vector<TagRef> TagQuery::references() const
{
  std::vector<TagRef> refs;
  for (const auto & n : nodes_) {
    if (n.op == Op::Leaf) {
      refs.push_back(n.ref);
    }
  }
  return refs;
}

}  // namespace scenario_forge
