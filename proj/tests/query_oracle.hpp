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

#ifndef SCENARIO_FORGE_TESTS__QUERY_ORACLE_HPP_
#define SCENARIO_FORGE_TESTS__QUERY_ORACLE_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "scenario_forge/rng.hpp"
#include "scenario_forge/taxonomy.hpp"

namespace sf_test
{

using scenario_forge::CounterRng;
using scenario_forge::Tag;
using scenario_forge::TagSet;
using scenario_forge::TagTree;
using scenario_forge::Taxonomy;

// Brute-force query oracle: random expression trees evaluated directly,
// with ancestry resolved by walking parent links of the registered trees.
struct Expr
{
  enum Op { Leaf, Not, And, Or } op = Leaf;
  std::string ref;
  std::vector<Expr> kids;

  std::string str() const
  {
    switch (op) {
      case Leaf:
        return ref;
      case Not:
        return "NOT (" + kids[0].str() + ")";
      case And:
        return "(" + kids[0].str() + ") AND (" + kids[1].str() + ")";
      case Or:
        return "(" + kids[0].str() + ") OR (" + kids[1].str() + ")";
    }
    return {};
  }
};

inline bool descends(const Taxonomy & tax, const std::string & tag_ref, const std::string & ancestor_ref)
{
  const auto colon = tag_ref.find(':');
  const auto acolon = ancestor_ref.find(':');
  const std::string tree = tag_ref.substr(0, colon);
  if (tree != ancestor_ref.substr(0, acolon)) return false;
  const TagTree * t = tax.find_tree(tree);
  std::optional<std::string> cur = tag_ref.substr(colon + 1);
  while (cur) {
    if (*cur == ancestor_ref.substr(acolon + 1)) return true;
    const Tag * node = t->find(*cur);
    cur = node ? node->parent : std::nullopt;
  }
  return false;
}

inline bool eval(const Expr & e, const Taxonomy & tax, const TagSet & tags)
{
  switch (e.op) {
    case Expr::Leaf:
      return std::any_of(tags.begin(), tags.end(),
                         [&](const std::string & t) { return descends(tax, t, e.ref); });
    case Expr::Not:
      return !eval(e.kids[0], tax, tags);
    case Expr::And:
      return eval(e.kids[0], tax, tags) && eval(e.kids[1], tax, tags);
    case Expr::Or:
      return eval(e.kids[0], tax, tags) || eval(e.kids[1], tax, tags);
  }
  return false;
}

inline std::vector<std::string> all_refs(const Taxonomy & tax)
{
  std::vector<std::string> out;
  for (const auto & [name, tree] : tax.trees()) {
    for (const auto & n : tree.nodes) out.push_back(name + ":" + n.id);
  }
  return out;
}

inline Expr random_expr(CounterRng & rng, const std::vector<std::string> & refs, int depth)
{
  Expr e;
  const double u = rng.uniform();
  if (depth == 0 || u < 0.35) {
    e.ref = refs[static_cast<std::size_t>(rng.uniform() * refs.size()) % refs.size()];
    return e;
  }
  e.op = u < 0.5 ? Expr::Not : (u < 0.75 ? Expr::And : Expr::Or);
  e.kids.push_back(random_expr(rng, refs, depth - 1));
  if (e.op != Expr::Not) e.kids.push_back(random_expr(rng, refs, depth - 1));
  return e;
}

/// Valid tag set: per tree, a random node and possibly one of its ancestors.
inline TagSet random_tags(CounterRng & rng, const Taxonomy & tax)
{
  TagSet tags;
  for (const auto & [name, tree] : tax.trees()) {
    if (rng.uniform() < 0.3) continue;
    const Tag & t = tree.nodes[static_cast<std::size_t>(rng.uniform() * tree.nodes.size()) %
                               tree.nodes.size()];
    tags.insert(name + ":" + t.id);
    if (t.parent && rng.uniform() < 0.3) tags.insert(name + ":" + *t.parent);
  }
  return tags;
}

}  // namespace sf_test

#endif  // SCENARIO_FORGE_TESTS__QUERY_ORACLE_HPP_
