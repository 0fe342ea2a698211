#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace semcafe {

enum class Ns { dbpedia, yago };

std::string_view to_string(Ns ns);

// Identifier of a knowledge-base entity. The rendered form is
// "<namespace>:<local_name>", e.g. "yago:Vladimir_Putin", and round-trips
// through parse().
struct EntityId {
  Ns ns = Ns::dbpedia;
  std::string local;

  static EntityId dbpedia(std::string local_name);
  static EntityId yago(std::string local_name);

  // Accepts "dbpedia:X" / "yago:X"; nullopt on anything else.
  static std::optional<EntityId> parse(std::string_view rendered);

  // Local names must be non-empty and free of whitespace and tabs.
  static bool valid_local_name(std::string_view name);

  std::string render() const;

  auto operator<=>(const EntityId&) const = default;
};

// A WordNet type identifier: wordnet_<lemma>_<synset-digits>,
// e.g. "wordnet_country_108544813". The trailing segment is all digits.
struct TypeId {
  std::string value;

  static bool valid(std::string_view v);
  static std::optional<TypeId> parse(std::string_view v);

  auto operator<=>(const TypeId&) const = default;
};

}  // namespace semcafe
