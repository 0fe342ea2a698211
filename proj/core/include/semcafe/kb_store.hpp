#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "semcafe/ids.hpp"

namespace semcafe {

enum class Strictness { strict, lenient };

// Immutable once loaded; safe to share across any number of reader threads.
struct KnowledgeBase {
  // normalized surface string -> dbpedia entities it may denote
  std::map<std::string, std::set<EntityId>, std::less<>> surface_forms;
  // dbpedia entity -> owl:sameAs yago entities
  std::map<EntityId, std::set<EntityId>> same_as;
  // yago entity -> number of properties asserted about it
  std::map<EntityId, std::int64_t> property_counts;
  // yago entity -> directly asserted WordNet types
  std::map<EntityId, std::set<TypeId>> direct_types;
  // child type -> parent types (subclass edges point upward)
  std::map<TypeId, std::set<TypeId>> subclass;
  // the top-level categories; traversal stops here
  std::set<TypeId> roots;

  struct LoadStats {
    std::size_t dangling_property_counts = 0;  // sameAs targets defaulted to 0
    std::size_t root_parent_edges_dropped = 0;
    std::size_t empty_surfaces_dropped = 0;
    std::size_t roots_found = 0;
  };
  LoadStats load_stats;
};

// Reads the six-file TSV snapshot (surfaces, sameas, propcounts, types,
// subclass, roots). Strict mode demands exactly 5 roots, no dangling
// property-count references, and roots without parents; lenient mode
// repairs those with counted warnings. Subclass cycles and malformed
// lines are errors in both modes.
KnowledgeBase load_kb(const std::filesystem::path& directory,
                      Strictness strictness);

struct ValidationReport {
  std::size_t surface_form_count = 0;
  std::size_t dbpedia_entity_count = 0;
  std::size_t yago_entity_count = 0;
  std::size_t type_count = 0;
  std::size_t subclass_edge_count = 0;
  std::size_t root_count = 0;
  std::size_t dangling_references = 0;
  // every type from which no root is reachable via subclass edges
  std::vector<TypeId> unreachable_types;
};

ValidationReport validate_kb(const KnowledgeBase& kb);

// Exact lookup of a normalized surface form. Empty set when absent.
const std::set<EntityId>& surface_lookup(const KnowledgeBase& kb,
                                         std::string_view form);

}  // namespace semcafe
