#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "semcafe/entity_linker.hpp"
#include "semcafe/ids.hpp"
#include "semcafe/type_dag.hpp"

namespace semcafe {

// The ordered universe of types the fingerprint vector ranges over.
// Frozen on the training corpus; test-time types outside it are dropped.
class TypeVocabulary {
 public:
  TypeVocabulary() = default;

  // Union of the DAGs' node sets, lexicographically sorted.
  static TypeVocabulary build(std::span<const TypeDag> dags);
  static TypeVocabulary from_types(std::vector<TypeId> types);

  std::size_t size() const { return types_.size(); }
  const std::vector<TypeId>& types() const { return types_; }
  std::optional<std::uint32_t> index_of(const TypeId& type) const;

  // One type id per line, position = line index.
  std::string to_text() const;
  void save(const std::filesystem::path& path) const;
  static TypeVocabulary load(const std::filesystem::path& path);

 private:
  std::vector<TypeId> types_;
  std::map<TypeId, std::uint32_t> index_;
};

// Per-article count vector over the type vocabulary: for each type, how
// many of the article's entities carry it in their closed hierarchy.
struct Fingerprint {
  std::string doc_id;
  std::uint64_t dimension = 0;
  std::map<std::uint32_t, std::uint64_t> counts;  // position -> count >= 1
};

enum class FingerprintMode { unique_entity, mention_weighted };

std::string_view to_string(FingerprintMode mode);
std::optional<FingerprintMode> fingerprint_mode_from_string(
    std::string_view s);

// One linked entity together with its closed type DAG.
struct EntityTypes {
  LinkedEntity entity;
  TypeDag dag;
};

// Sum of the entities' indicator vectors; in mention_weighted mode each
// entity's vector is scaled by its mention count first.
Fingerprint fingerprint_document(const std::string& doc_id,
                                 std::span<const EntityTypes> entities,
                                 const TypeVocabulary& vocab,
                                 FingerprintMode mode,
                                 std::size_t* dropped_types = nullptr);

// Full per-document pipeline (link -> closure -> sum) over a corpus.
// Output order equals input order.
std::vector<Fingerprint> fingerprint_corpus(
    std::span<const CleanDocument> docs, const KnowledgeBase& kb,
    const Matcher& matcher, const TypeVocabulary& vocab, FingerprintMode mode,
    std::size_t* dropped_types = nullptr);

// Computes the entity/DAG pairs feeding one document's fingerprint. The
// memo caches closures across documents keyed by yago id.
std::vector<EntityTypes> link_and_close(
    const KnowledgeBase& kb, const Matcher& matcher, const CleanDocument& doc,
    std::unordered_map<std::string, TypeDag>* closure_memo = nullptr);

// JSON-Lines: {"doc_id":..., "dim":|T|, "counts":{"<position>":count,...}}
std::string fingerprint_line_json(const Fingerprint& fp);
void write_fingerprints(const std::filesystem::path& path,
                        std::span<const Fingerprint> fingerprints);
std::vector<Fingerprint> read_fingerprints(const std::filesystem::path& path);

}  // namespace semcafe
