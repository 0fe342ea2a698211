#pragma once

#include <cstdint>
#include <ostream>
#include <set>
#include <utility>
#include <vector>

#include "semcafe/ids.hpp"
#include "semcafe/kb_store.hpp"

namespace semcafe {

class TypeVocabulary;

// The types of one entity, closed upward through subclass edges until a
// top-level category is reached.
struct TypeDag {
  EntityId entity;  // yago id this DAG is anchored to
  std::set<TypeId> nodes;
  std::set<std::pair<TypeId, TypeId>> edges;  // child -> parent
  std::set<TypeId> reached_roots;
  // Nodes with no parent that are not roots. Real dumps contain such gaps;
  // they are diagnostics, never fatal.
  std::vector<TypeId> dead_ends;

  bool empty() const { return nodes.empty(); }
};

// Upward closure of the entity's direct types. Roots are never expanded.
// An entity with no type assertions yields an empty DAG.
TypeDag closure(const KnowledgeBase& kb, const EntityId& yago_id);

// 0/1 membership of the DAG's nodes in the vocabulary, as the sorted list
// of vocabulary positions present. A type reachable by several paths still
// contributes a single 1.
struct TypeIndicator {
  std::vector<std::uint32_t> positions;  // sorted, unique
  std::size_t dropped = 0;               // DAG nodes absent from the vocabulary
};

TypeIndicator type_vector(const TypeDag& dag, const TypeVocabulary& vocab);

// Debug edge-list export: "entity<TAB><yago id>" header, then one
// "child<TAB>parent" line per edge.
void write_dag(std::ostream& out, const TypeDag& dag);

}  // namespace semcafe
