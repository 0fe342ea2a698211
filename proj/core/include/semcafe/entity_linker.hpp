#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "semcafe/ids.hpp"
#include "semcafe/kb_store.hpp"
#include "semcafe/text_pipeline.hpp"

namespace semcafe {

// A surface-form hit in a token stream. Span is a half-open token interval.
struct Mention {
  std::string doc_id;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string surface;             // matched normalized string
  std::set<EntityId> candidates;   // dbpedia entities this surface may denote
};

// A disambiguated entity aggregated over a document.
struct LinkedEntity {
  EntityId dbpedia_id;
  std::optional<EntityId> yago_id;  // absent when the entity has no sameAs
  std::size_t mention_count = 0;
};

// Token-sequence dictionary over every surface form in a knowledge base.
// Immutable after build; shareable across threads.
class Matcher {
 public:
  static Matcher build(const KnowledgeBase& kb);

  // Greedy leftmost-longest non-overlapping matching: scanning left to
  // right, at each position emit the longest pattern starting there (if
  // any) and resume after its end.
  std::vector<Mention> spot(std::span<const std::string> tokens) const;

  std::size_t pattern_count() const { return surfaces_.size(); }

 private:
  struct Node {
    std::unordered_map<std::uint32_t, std::uint32_t> next;  // token -> node
    std::int32_t surface = -1;  // index into surfaces_ when terminal
  };
  struct Surface {
    std::string text;
    std::set<EntityId> candidates;
  };

  std::unordered_map<std::string, std::uint32_t> token_ids_;
  std::vector<Node> nodes_;
  std::vector<Surface> surfaces_;
};

inline Matcher build_matcher(const KnowledgeBase& kb) {
  return Matcher::build(kb);
}

// Among an entity's sameAs candidates, picks the one with the most
// properties; ties break to the lexicographically smallest local name.
// Absent when the entity has no sameAs links.
std::optional<EntityId> disambiguate(const KnowledgeBase& kb,
                                     const EntityId& dbpedia_id);

// Spot over title ++ body tokens, expand ambiguous surfaces to every
// candidate, disambiguate each, and aggregate per (dbpedia, yago) pair in
// first-occurrence order.
std::vector<LinkedEntity> link_document(const KnowledgeBase& kb,
                                        const Matcher& matcher,
                                        const CleanDocument& doc);

}  // namespace semcafe
